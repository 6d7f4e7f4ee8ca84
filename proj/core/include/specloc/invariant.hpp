#pragma once

#include <optional>

#include "specloc/localizer.hpp"
#include "specloc/operators.hpp"
#include "specloc/signature.hpp"
#include "specloc/symmetry.hpp"

namespace specloc {

struct InvariantOptions {
  /// nullopt → κ_max from the condition report (g when [D, A] = 0).
  std::optional<double> kappa;
  /// nullopt → ρ_min = 2g/κ.
  std::optional<double> rho;
  /// Zero threshold for the inertia. Default: g/(2√2) when the sufficient
  /// conditions hold, else 0 (only exactly singular pivots count as zero).
  std::optional<double> tol;
  BoundsOptions bounds;
  std::optional<SymmetryOperator> symmetry;
  /// Smallest |eigenvalue| is computed for dimensions up to this size.
  Index min_eig_max_dim = 6000;
  /// Dense factorization up to this size, structured factorization above.
  Index dense_limit = 3000;
  /// Tolerance for symmetry residuals and realness checks.
  double symmetry_tol = 1e-10;
};

struct InvariantResult {
  InvariantKind kind = InvariantKind::Z;
  /// Z: half-signature. 2Z: half-signature (even). Z2: Pfaffian sign.
  /// Trivial: 0.
  long value = 0;
  ConditionReport conditions;
  Inertia inertia;
  Index dimension = 0;
  std::optional<double> min_abs_eig;
  std::optional<double> symmetry_residual;
  std::optional<SymmetryClass> symmetry_class;
  /// True when the matrix was realified before factorization.
  bool realified = false;

  bool verified() const { return conditions.verified(); }
};

/// κ resolved from options (auto → κ_max, or g when κ_max is infinite).
double resolve_kappa(const OperatorBounds& bounds, const std::optional<double>& kappa);
/// ρ resolved from options (auto → ρ_min = 2g/κ).
double resolve_rho(const OperatorBounds& bounds, double kappa, const std::optional<double>& rho);

/// condition report → localizer → (symmetry dispatch) → inertia / Pfaffian.
/// Throws NotInvertibleError when κ or ρ must be derived from a zero gap.
InvariantResult compute_invariant(const HoppingOperator& op, const CliffordRep& rep, const InvariantOptions& options);

/// Same with precomputed bounds (reused across sweeps).
InvariantResult compute_invariant(const HoppingOperator& op, const CliffordRep& rep, const OperatorBounds& bounds,
                                  const InvariantOptions& options);

}  // namespace specloc
