#include "dense_lapack.hpp"

#include <complex>
#include <string>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace specloc::detail {

namespace {

template <typename Scalar>
PivotCounts count_blocks(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a,
                         const std::vector<lapack_int>& ipiv) {
  PivotCounts out;
  const Index n = a.rows();
  for (Index k = 0; k < n;) {
    if (ipiv[static_cast<std::size_t>(k)] > 0) {
      const double v = std::real(a(k, k));
      if (v > 0) ++out.plus;
      else if (v < 0) ++out.minus;
      else ++out.zero;
      k += 1;
      continue;
    }
    // 2×2 block [[p, conj(q)], [q, r]] stored in the lower triangle.
    const double p = std::real(a(k, k));
    const double r = std::real(a(k + 1, k + 1));
    const double q = std::abs(a(k + 1, k));
    const double det = p * r - q * q;
    const double tr = p + r;
    if (det < 0) {
      ++out.plus;
      ++out.minus;
    } else if (det > 0) {
      if (tr > 0) out.plus += 2;
      else out.minus += 2;
    } else {
      ++out.zero;
      if (tr > 0) ++out.plus;
      else if (tr < 0) ++out.minus;
      else ++out.zero;
    }
    k += 2;
  }
  return out;
}

void check_info(lapack_int info, const char* routine) {
  if (info < 0) throw Error(std::string(routine) + ": illegal argument " + std::to_string(-info));
}

}  // namespace

PivotCounts bunch_kaufman_inertia(CMatrix& a) {
  const Index n = a.rows();
  if (n == 0) return {};
  std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
  // info > 0 reports an exactly zero pivot; the factorization is still complete.
  const lapack_int info = LAPACKE_zhetrf(LAPACK_COL_MAJOR, 'L', static_cast<lapack_int>(n), a.data(),
                                         static_cast<lapack_int>(a.outerStride()), ipiv.data());
  check_info(info, "zhetrf");
  return count_blocks(a, ipiv);
}

PivotCounts bunch_kaufman_inertia(RMatrix& a) {
  const Index n = a.rows();
  if (n == 0) return {};
  std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', static_cast<lapack_int>(n), a.data(),
                                         static_cast<lapack_int>(a.outerStride()), ipiv.data());
  check_info(info, "dsytrf");
  return count_blocks(a, ipiv);
}

}  // namespace specloc::detail
