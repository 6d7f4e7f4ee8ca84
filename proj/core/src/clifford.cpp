#include "specloc/clifford.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace specloc {

double operator_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double operator_norm(const RMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<RMatrix> svd(m);
  return svd.singularValues()(0);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

RMatrix kron(const RMatrix& a, const RMatrix& b) {
  RMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {

const cplx I(0.0, 1.0);

std::array<CMatrix, 4> pauli_basis() {
  CMatrix s0 = CMatrix::Identity(2, 2);
  CMatrix s1(2, 2), s2(2, 2), s3(2, 2);
  s1 << 0, 1, 1, 0;
  s2 << 0, -I, I, 0;
  s3 << 1, 0, 0, -1;
  return {s0, s1, s2, s3};
}

void check_odd_supported(int d) {
  if (d < 1 || d % 2 == 0)
    throw std::invalid_argument("Clifford dimension must be odd and positive, got " +
                                std::to_string(d));
  if (d > 7)
    throw std::invalid_argument("Clifford dimension " + std::to_string(d) +
                                " unsupported (d <= 7)");
}

std::vector<CMatrix> build_gammas(int d) {
  if (d == 1) return {CMatrix::Identity(1, 1)};
  const auto p = pauli_basis();
  auto prev = build_gammas(d - 2);
  const Index nu = prev.front().rows();
  const CMatrix id = CMatrix::Identity(nu, nu);
  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(d));
  out.push_back(kron(id, p[1]));
  out.push_back(kron(id, p[2]));
  for (const auto& g : prev) out.push_back(kron(g, p[3]));
  return out;
}

// Entries of Pauli strings are in {0, ±1, ±i}, so exact comparison is sound.
bool exactly_equal(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff() == 0.0; }

}  // namespace

SignPair dirac_signs(int d) {
  check_odd_supported(d);
  switch (d % 8) {
    case 1: return {+1, +1};
    case 3: return {-1, -1};
    case 5: return {+1, -1};
    default: return {-1, +1};
  }
}

CliffordRep build_clifford(int d) {
  check_odd_supported(d);
  CliffordRep rep;
  rep.d = d;
  rep.gammas = build_gammas(d);
  rep.nu = static_cast<int>(rep.gammas.front().rows());
  const SignPair signs = dirac_signs(d);
  rep.sign_D = signs.s;

  // Search Σ = c·P over Pauli strings P of length (d-1)/2 and c ∈ {1, i}.
  const int len = (d - 1) / 2;
  const auto p = pauli_basis();
  int count = 1;
  for (int i = 0; i < len; ++i) count *= 4;
  for (int code = 0; code < count; ++code) {
    CMatrix P = CMatrix::Identity(1, 1);
    int c = code;
    for (int i = 0; i < len; ++i, c /= 4) P = kron(P, p[static_cast<std::size_t>(c % 4)]);
    for (const cplx phase : {cplx(1.0, 0.0), I}) {
      const CMatrix cand = phase * P;
      if (cand.imag().cwiseAbs().maxCoeff() != 0.0) continue;
      bool ok = true;
      for (const auto& g : rep.gammas) {
        if (!exactly_equal(cand.adjoint() * g.conjugate() * cand, double(rep.sign_D) * g)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      rep.sigma = cand.real();
      const RMatrix sq = rep.sigma * rep.sigma;
      rep.sign_prime_D = sq(0, 0) > 0 ? +1 : -1;
      if (rep.sign_prime_D != signs.s_prime)
        throw Error("Clifford construction: Σ² sign disagrees with the d mod 8 table");
      return rep;
    }
  }
  throw Error("Clifford construction: no real Σ found for d = " + std::to_string(d));
}

bool verify_clifford(const CliffordRep& rep, double tol) {
  if (rep.d < 1 || rep.d % 2 == 0 || static_cast<int>(rep.gammas.size()) != rep.d) return false;
  if (rep.nu != (1 << ((rep.d - 1) / 2))) return false;
  if (rep.sigma.rows() != rep.nu || rep.sigma.cols() != rep.nu) return false;
  const CMatrix id = CMatrix::Identity(rep.nu, rep.nu);
  for (std::size_t i = 0; i < rep.gammas.size(); ++i) {
    const CMatrix& gi = rep.gammas[i];
    if (gi.rows() != rep.nu || gi.cols() != rep.nu) return false;
    if (operator_norm(CMatrix(gi - gi.adjoint())) > tol) return false;
    if (operator_norm(CMatrix(gi * gi - id)) > tol) return false;
    for (std::size_t j = i + 1; j < rep.gammas.size(); ++j) {
      const CMatrix& gj = rep.gammas[j];
      if (operator_norm(CMatrix(gi * gj + gj * gi)) > tol) return false;
    }
  }
  const SignPair expected = dirac_signs(rep.d);
  if (rep.sign_D != expected.s || rep.sign_prime_D != expected.s_prime) return false;
  const RMatrix rid = RMatrix::Identity(rep.nu, rep.nu);
  if (operator_norm(RMatrix(rep.sigma.transpose() * rep.sigma - rid)) > tol) return false;
  if (operator_norm(RMatrix(rep.sigma * rep.sigma - double(rep.sign_prime_D) * rid)) > tol)
    return false;
  const CMatrix sigma = rep.sigma.cast<cplx>();
  for (const auto& g : rep.gammas) {
    if (operator_norm(CMatrix(sigma.adjoint() * g.conjugate() * sigma - double(rep.sign_D) * g)) >
        tol)
      return false;
  }
  return true;
}

CMatrix dirac_block(const CliffordRep& rep, std::span<const int> site) {
  if (static_cast<int>(site.size()) != rep.d)
    throw std::invalid_argument("dirac_block: site dimension does not match Clifford dimension");
  CMatrix block = CMatrix::Zero(rep.nu, rep.nu);
  for (int j = 0; j < rep.d; ++j) block += double(site[static_cast<std::size_t>(j)]) * rep.gammas[static_cast<std::size_t>(j)];
  return block;
}

}  // namespace specloc
