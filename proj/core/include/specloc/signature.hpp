#pragma once

#include <optional>
#include <vector>

#include "specloc/types.hpp"

namespace specloc {

/// Eigenvalue counts of a Hermitian matrix relative to a zero threshold.
struct Inertia {
  Index n_plus = 0;
  Index n_minus = 0;
  Index n_zero = 0;
  double tol = 0.0;

  Index signature() const { return n_plus - n_minus; }
  Index dimension() const { return n_plus + n_minus + n_zero; }

  Inertia& operator+=(const Inertia& o) {
    n_plus += o.n_plus;
    n_minus += o.n_minus;
    n_zero += o.n_zero;
    return *this;
  }
};

inline bool same_counts(const Inertia& a, const Inertia& b) {
  return a.n_plus == b.n_plus && a.n_minus == b.n_minus && a.n_zero == b.n_zero;
}

/// dim · ε · ‖H‖_∞.
double default_zero_tolerance(const CMatrix& H);
double default_zero_tolerance(const RMatrix& H);

/// Inertia from a Bunch–Kaufman LDLᴴ factorization (LAPACK ?hetrf/?sytrf),
/// reading signs off the 1×1 and 2×2 pivot blocks.
///
/// With tol > 0 the counts are n_plus = #(λ > tol) and n_minus = #(λ < −tol),
/// obtained from the factorizations of H − tol and H + tol. With tol = 0 a
/// single factorization is used and only exactly singular pivots count as
/// zero. When tol is omitted, default_zero_tolerance(H) is used.
///
/// Throws std::invalid_argument if H is not Hermitian within 1e-12 (relative).
Inertia inertia(const CMatrix& H, std::optional<double> tol = std::nullopt);
Inertia inertia(const RMatrix& H, std::optional<double> tol = std::nullopt);

/// Reference path: counts from a full eigendecomposition.
Inertia eigen_inertia(const CMatrix& H, std::optional<double> tol = std::nullopt);
Inertia eigen_inertia(const RMatrix& H, std::optional<double> tol = std::nullopt);

/// (n_plus − n_minus)/2. Throws NotInvertibleError if n_zero > 0 and
/// OddSignatureError if the signature is odd.
Index half_signature(const Inertia& in);
Index half_signature(const CMatrix& H, std::optional<double> tol = std::nullopt);

/// Block structure used by structured_inertia: indices of each diagonal block
/// (blocks must partition 0..n−1) and an optional preference rank per block;
/// lower ranks are tried first when selecting blocks to eliminate.
struct BlockPartition {
  std::vector<std::vector<Index>> blocks;
  std::vector<int> rank;
};

/// Inertia of H − shift·1 for a sparse Hermitian H via Haynsworth additivity:
/// a set E of mutually uncoupled, well-conditioned diagonal blocks is
/// eliminated exactly (their inertia from small eigenproblems), and the dense
/// Schur complement on the remaining indices is factored as in inertia() with
/// tol = 0. Exactly equal to the dense result in exact arithmetic.
Inertia structured_inertia(const CSparse& H, const BlockPartition& part, double shift = 0.0);
Inertia structured_inertia(const RSparse& H, const BlockPartition& part, double shift = 0.0);

/// Pfaffian of a real antisymmetric matrix via Householder tridiagonalization
/// (determinant of each reflector tracked exactly).
double pfaffian(const RMatrix& K);

/// sgn Pf(K). Validates antisymmetry (within tol), even dimension and
/// invertibility (smallest singular value > tol), and checks |Pf|² = det K.
int pfaffian_sign(const RMatrix& K, double tol);

/// Smallest |λ| of a Hermitian matrix. Dense eigensolver up to
/// dense_limit, shift-invert Lanczos (sparse LU at 0) above.
double min_abs_eigenvalue(const CSparse& H, Index dense_limit = 4000);
double min_abs_eigenvalue(const RSparse& H, Index dense_limit = 4000);

/// All eigenvalues (ascending) of a Hermitian matrix.
RVector hermitian_eigenvalues(const CMatrix& H);

}  // namespace specloc
