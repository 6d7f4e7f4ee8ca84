#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "specloc/operators.hpp"
#include "specloc/signature.hpp"
#include "specloc/types.hpp"

namespace specloc {

/// k ↦ A(k) = Σ_r A_r e^{−i k·r} for a translation-invariant operator.
class BlochSymbol {
 public:
  explicit BlochSymbol(HoppingOperator op);

  int dimension() const { return op_.dimension(); }
  int fiber_dim() const { return op_.fiber_dim(); }
  CMatrix operator()(std::span<const double> k) const { return symbol(op_, k); }
  /// Exact term-wise derivative ∂A/∂k_axis.
  CMatrix derivative(std::span<const double> k, int axis) const { return symbol_derivative(op_, k, axis); }
  /// Symbol of the entrywise complex conjugate operator, k ↦ conj(A(−k)).
  BlochSymbol conjugate() const;

 private:
  HoppingOperator op_;
};

struct WindingResult {
  long value = 0;
  int grid = 0;
  double min_abs_det = 0.0;
};

/// (1/2π)∮ d arg det A(k) over k ∈ [0, 2π). The grid doubles from `grid`
/// until two successive grids agree and every step's phase increment is
/// below π/4. With the hopping convention used here, the index of the
/// shift model shift_model(n) equals +n = its winding.
WindingResult winding_number_d1(const BlochSymbol& symbol, int grid = 64);

struct ChernResult {
  long value = 0;
  double raw = 0.0;
  double residual = 0.0;
  int grid = 0;
  /// (grid, raw) for each refinement step.
  std::vector<std::pair<int, double>> history;
};

/// −1/(24π²) ∫ Σ_σ sgn σ Tr(B_σ1 B_σ2 B_σ3) d³k with B_j = A⁻¹∂_jA, by the
/// periodic trapezoid rule. Refines from `grid` (doubling, up to max_grid)
/// until successive values differ by < 1e-3 and the nearest-integer
/// residual is < 1e-3; throws ConvergenceError if the residual stays > 0.1.
ChernResult odd_chern_d3(const BlochSymbol& symbol, int grid = 16, int max_grid = 64);

/// The operator a on ℂᵐ with A_r = 1_ν ⊗ a_r for every hopping (the form
/// forced by [A, Γ_j ⊗ 1_m] = 0). The index of ΠAΠ + 1 − Π with D acting on
/// the ℂ^ν factor is the winding of a; the winding of A itself counts it ν
/// times. Throws std::invalid_argument if A is not of this form within tol.
HoppingOperator clifford_fiber_reduction(const HoppingOperator& op, int nu, double tol = 1e-12);

/// (b₋, b₊) per integer k in [k_min, k_max] for flow_localizer(shift_model(n)):
/// b± = −κn/2 ± ((κn/2 + κk)² + λ²)^{1/2}, the spectrum of the 2×2 block
/// coupling site k (upper grading) to site k + n (lower grading). Only
/// pairs with both sites inside the ball occur in the finite matrix.
std::vector<std::pair<double, double>> shift_localizer_spectrum(int n, double kappa, double lambda, int k_min,
                                                                int k_max);

/// λ values in [0, 1] where some b±(k) vanishes, ascending and deduplicated:
/// λ = (κ/2)(n² − (n − 2k)²)^{1/2}, k = 0..|n|.
std::vector<double> shift_crossing_locations(int n, double kappa);

struct Crossing {
  double lambda = 0.0;
  /// Bracketing interval from bisection.
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  /// Signature change across the crossing (2 per eigenvalue crossing upward).
  long delta_signature = 0;
};

struct FlowResult {
  long flow = 0;
  Index sig_start = 0;
  Index sig_end = 0;
  std::vector<Crossing> crossings;
  /// True when the start point has zero eigenvalues (counted as neither sign).
  bool singular_start = false;
};

using HermitianPath = std::function<CMatrix(double)>;

/// Spectral flow of λ ↦ H(λ) on [0, 1]: inertia on a uniform grid of
/// `steps` intervals, then bisection of every interval whose signature
/// changes, down to width `resolution`. Eigenvalues with |λ| ≤ tol count as
/// neither sign (η convention), so the flow is ½(Sig(1) − Sig(0)) even if the
/// start point is singular. Throws NotInvertibleError if H(1) is singular
/// and OddSignatureError if the signature difference is odd.
FlowResult spectral_flow(const HermitianPath& path, int steps, double tol = 1e-10, double resolution = 1e-7);

/// Σ sgn(λ)|λ|^{−s}. Throws NotInvertibleError on a zero eigenvalue.
double eta_partial_sum(std::span<const double> eigs, double s);

/// Index of ΠAΠ + 1 − Π for an operator with A − 1 supported in the ball of
/// radius window (verified on the shell window < ‖n‖ ≤ window + probe). Such
/// an operator is a compact perturbation of the identity and has index 0.
/// Throws std::invalid_argument if A differs from 1 on the probe shell.
long compact_perturbation_index(const HoppingOperator& op, double window, double probe);

}  // namespace specloc
