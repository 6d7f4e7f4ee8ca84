#pragma once

#include <optional>
#include <vector>

#include "specloc/clifford.hpp"
#include "specloc/lattice.hpp"
#include "specloc/operators.hpp"
#include "specloc/signature.hpp"
#include "specloc/types.hpp"

namespace specloc {

enum class LocalizerKind { Linear, Tapered, Homotopy, Flow };

/// Finite-volume localizer. Rows and columns are ordered grading-major:
/// index = g·(N·S) + s·N + a for grading g ∈ {0, 1}, site s (ball order) and
/// fiber component a, so the matrix literally has the 2×2 block form
/// [[κD_ρ, A_ρ], [A_ρ*, −κD_ρ]]. Stored sparse; dense() materialises it.
struct LocalizerMatrix {
  CSparse matrix;
  LocalizerKind kind = LocalizerKind::Linear;
  double kappa = 0.0;
  double rho = 0.0;
  double lambda = 1.0;
  int d = 0;
  int fiber_dim = 0;
  std::size_t site_count = 0;
  /// Σ_j n_j mod 2 per site; used to pick uncoupled site blocks.
  std::vector<int> site_parity;

  Index dimension() const { return matrix.rows(); }
  CMatrix dense() const { return CMatrix(matrix); }
  /// Indices belonging to each site (both gradings, all fiber components).
  BlockPartition site_partition() const;
};

/// Even C¹ profile G_ρ (1 on [−ρ/2, ρ/2], 0 outside (−ρ, ρ)) and the
/// matching F_ρ = ½(1 + sgn(x)(1 − G_ρ⁴)^{1/2}), sgn(0) = +1, so that
/// 4F(1−F) = G⁴.
struct TaperingPair {
  double rho = 1.0;

  double G(double x) const;
  double F(double x) const;
  /// (1 − G⁴)^{1/2} = |2F − 1|.
  double taper(double x) const;
  /// G′_ρ(x).
  double dG(double x) const;
};

TaperingPair haagerup_profile(double rho);

/// ‖Ĝ′_ρ‖_{L¹} with Ĝ(p) = (1/2π)∫G(x)e^{−ipx}dx, by direct quadrature of
/// the transform over a truncated p-range plus an analytic tail bound (so
/// the result is an upper estimate).
double derivative_transform_l1(const TaperingPair& pair);

LocalizerMatrix build_localizer(const HoppingOperator& op, const CliffordRep& rep, const LatticeBall& ball,
                                double kappa);

LocalizerMatrix build_tapered_localizer(const HoppingOperator& op, const CliffordRep& rep, const LatticeBall& ball,
                                        const TaperingPair& pair);

/// L_κ(F, G) with F = λF^L + (1−λ)F_ρ, G = λ + (1−λ)G_ρ and F^L(x) = ½(1 + x/ρ),
/// ρ = ball radius. λ = 1 reproduces build_localizer.
LocalizerMatrix homotopy_localizer(const HoppingOperator& op, const CliffordRep& rep, const LatticeBall& ball,
                                   double kappa, double lambda);

/// κD̂ + λH with D̂ = diag(D_ρ, −D_ρ) and H the chiral block of A_ρ.
LocalizerMatrix flow_localizer(const HoppingOperator& op, const CliffordRep& rep, const LatticeBall& ball,
                               double kappa, double lambda);

struct GapCheck {
  double min_abs_eig = 0.0;
  bool satisfies_bound = false;
  /// g = 0: the bound says nothing.
  bool vacuous = false;
};

/// min |λ(L)| and whether it meets g/√2 − 1e-9.
GapCheck gap_check(const LocalizerMatrix& L, double g);

/// Inertia of L; dense factorization up to dense_limit, structured
/// (site-block Schur) factorization above. tol as in inertia().
Inertia localizer_inertia(const LocalizerMatrix& L, double tol, Index dense_limit = 3000);

}  // namespace specloc
