#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "specloc/clifford.hpp"
#include "specloc/lattice.hpp"
#include "specloc/types.hpp"

namespace specloc {

/// One displacement of a finite-range operator and its (reference) coefficient.
struct Hopping {
  std::vector<int> r;
  CMatrix coefficient;
};

/// Finite-range operator on ℓ²(ℤᵈ) ⊗ ℂᴺ with the convention
///
///   (Aψ)(n) = Σ_r A_r(n) ψ(n − r).
///
/// Translation-invariant operators store A_r directly. Disordered (or
/// otherwise site-dependent) operators install a SiteFunction which returns
/// A_r(n) for hopping index h; the stored coefficient then only serves as a
/// label, and the caller supplies sup_n ‖A_r(n)‖ for the locality bound.
class HoppingOperator {
 public:
  using SiteFunction = std::function<CMatrix(std::size_t hop, std::span<const int> site)>;

  HoppingOperator(int d, int N);

  int dimension() const { return d_; }
  int fiber_dim() const { return N_; }
  const std::vector<Hopping>& hoppings() const { return hoppings_; }

  /// Adds A to the coefficient at displacement r (creating it if needed).
  void add_hopping(std::vector<int> r, const CMatrix& A);

  /// Makes the operator site-dependent. sup_norms[h] must bound ‖A_h(n)‖ over n.
  void set_site_function(SiteFunction f, std::vector<double> sup_norms);

  bool translation_invariant() const { return !site_fn_; }

  /// A_r(n) for hopping index h.
  CMatrix coefficient(std::size_t h, std::span<const int> site) const;

  /// sup_n ‖A_r(n)‖ for hopping index h.
  double sup_norm(std::size_t h) const;

  /// max ‖r‖₂ over the support.
  double range() const;

 private:
  int d_;
  int N_;
  std::vector<Hopping> hoppings_;
  SiteFunction site_fn_;
  std::vector<double> sup_norms_;
};

/// Dirichlet restriction to the ball: block (m, n) = A_{m−n}(m). Site-major
/// ordering, index = site·N + a.
CMatrix restrict(const HoppingOperator& op, const LatticeBall& ball);
CSparse restrict_sparse(const HoppingOperator& op, const LatticeBall& ball);

/// [X_axis, A]; hoppings r ↦ r_axis · A_r(n). axis is 0-based.
HoppingOperator commutator_with_position(const HoppingOperator& op, int axis);

/// A*: hopping −r with coefficient A_r(n + r)*.
HoppingOperator adjoint(const HoppingOperator& op);

/// A(k) = Σ_r A_r e^{−i k·r}; translation-invariant operators only.
CMatrix symbol(const HoppingOperator& op, std::span<const double> k);

/// ∂A/∂k_axis at k.
CMatrix symbol_derivative(const HoppingOperator& op, std::span<const double> k, int axis);

enum class BoundMode { Exact, UpperBound, Estimate };

std::string to_string(BoundMode mode);

enum class CommutatorMode { ExactSymbol, UpperBound };

struct CommutatorNorm {
  double value = 0.0;
  BoundMode mode = BoundMode::Exact;
  /// Rigorous upper bound accompanying the grid value (equals value in
  /// upper-bound mode).
  double certified_upper = 0.0;
};

/// ‖[D, A]‖ with D = Σ_j (Γ_j ⊗ 1_m) X_j acting on ℂᴺ = ℂ^ν ⊗ ℂ^m. The
/// coefficients must commute with every Γ_j ⊗ 1_m, otherwise [D, A] is
/// unbounded and std::invalid_argument is thrown.
CommutatorNorm dirac_commutator_norm(const HoppingOperator& op, const CliffordRep& rep,
                                     CommutatorMode mode);

struct SymbolMode {};
struct TruncationMode {
  double rho_probe = 64.0;
};
using NormGapMode = std::variant<SymbolMode, TruncationMode>;

struct NormGap {
  double norm_A = 0.0;
  double gap_g = 0.0;
  bool invertible = false;
  /// True for truncation estimates, false for symbol-grid values.
  bool estimate = false;
  /// Symbol mode: grid value ± Lipschitz slack brackets the true extrema.
  double norm_upper = 0.0;
  double gap_lower = 0.0;
};

/// ‖A‖ and g = ‖A⁻¹‖⁻¹. Gap below 1e-10·‖A‖ is reported as not invertible.
NormGap norm_and_gap(const HoppingOperator& op, const NormGapMode& mode);

/// Operator inputs plus the two sufficient conditions at (κ, ρ).
struct ConditionReport {
  double norm_A = 0.0;
  double gap_g = 0.0;
  double comm_norm = 0.0;
  double kappa = 0.0;
  double rho = 0.0;
  double kappa_max = 0.0;
  double rho_min = 0.0;
  bool invertible = false;
  bool cond1_ok = false;
  bool cond2_ok = false;
  BoundMode bound_mode = BoundMode::Exact;
  bool gap_estimate = false;

  bool verified() const { return invertible && cond1_ok && cond2_ok; }
};

/// Scalar inputs shared by every (κ, ρ) for one operator.
struct OperatorBounds {
  NormGap norm_gap;
  CommutatorNorm comm;
};

struct BoundsOptions {
  /// Symbol mode for translation-invariant operators, truncation otherwise.
  std::optional<NormGapMode> norm_mode;
  std::optional<CommutatorMode> comm_mode;
};

OperatorBounds operator_bounds(const HoppingOperator& op, const CliffordRep& rep,
                               const BoundsOptions& options = {});

/// κ_max = g³/(18‖A‖‖[D,A]‖) (infinite when the commutator vanishes).
double kappa_max(const OperatorBounds& b);

/// Comparisons carry a 1e-12 relative slack so that κ = κ_max, ρ = ρ_min
/// computed in floating point still satisfy the conditions they were built from.
ConditionReport condition_report(const OperatorBounds& b, double kappa, double rho);

/// Throws NotInvertibleError if A has no gap.
ConditionReport condition_report(const HoppingOperator& op, const CliffordRep& rep, double kappa,
                                 double rho);

}  // namespace specloc
