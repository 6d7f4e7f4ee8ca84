#pragma once

#include <random>

#include "specloc/types.hpp"

namespace testutil {

using specloc::CMatrix;
using specloc::Index;
using specloc::RMatrix;
using specloc::cplx;

inline CMatrix random_hermitian(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
  return (a + a.adjoint()) / 2.0;
}

inline CMatrix random_complex(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
  return a;
}

inline RMatrix random_antisymmetric(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> g;
  RMatrix a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = g(rng);
  return a - a.transpose();
}

inline CMatrix random_unitary(std::mt19937_64& rng, Index n) {
  Eigen::HouseholderQR<CMatrix> qr(random_complex(rng, n));
  return qr.householderQ();
}

inline RMatrix random_orthogonal(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> g;
  RMatrix a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = g(rng);
  Eigen::HouseholderQR<RMatrix> qr(a);
  return qr.householderQ();
}

// Pfaffian by expansion along the first row (sum over perfect matchings).
inline double matching_pfaffian(const RMatrix& a) {
  const Index n = a.rows();
  if (n == 0) return 1.0;
  if (n % 2) return 0.0;
  double total = 0.0;
  for (Index j = 1; j < n; ++j) {
    std::vector<Index> rest;
    for (Index k = 1; k < n; ++k)
      if (k != j) rest.push_back(k);
    RMatrix sub(n - 2, n - 2);
    for (Index p = 0; p < n - 2; ++p)
      for (Index q = 0; q < n - 2; ++q) sub(p, q) = a(rest[static_cast<std::size_t>(p)], rest[static_cast<std::size_t>(q)]);
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    total += sign * a(0, j) * matching_pfaffian(sub);
  }
  return total;
}

}  // namespace testutil
