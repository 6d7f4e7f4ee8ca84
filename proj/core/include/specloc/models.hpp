#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "specloc/operators.hpp"
#include "specloc/symmetry.hpp"

namespace specloc {

/// A named operator with its parameters and (optionally) a declared symmetry.
struct Model {
  std::string name;
  std::map<std::string, double> params;
  HoppingOperator op;
  std::optional<SymmetryOperator> symmetry;
};

/// Sⁿ as the single hopping at r = −n, i.e. (Aψ)(m) = ψ(m + n). With this
/// orientation the index of ΠAΠ + 1 − Π is +n. n = 0 is the identity.
HoppingOperator shift_model(int n);

/// Shift (as in shift_model(1)) on the window [−W, W], W = ⌊2ρ⌋, and the
/// identity outside. Row W is empty, so the operator is not invertible.
HoppingOperator defect_shift_model(double rho);

/// defect_shift_model closed into a cycle: the extra hopping r = 2W maps
/// ψ(−W) to site W, giving ‖[X, A]‖ ≈ 4ρ.
HoppingOperator cyclic_defect_shift_model(double rho);

/// Multiplies every coefficient A_r(n) by an independent uniform factor in
/// [1 − w, 1 + w], drawn from a generator seeded by (seed, r index, n).
/// w = 0 returns the operator unchanged.
HoppingOperator with_uniform_disorder(const HoppingOperator& op, double w, std::uint64_t seed);

/// A_0 = m, A_{+1} = t (symbol m + t e^{−ik}), passed through
/// with_uniform_disorder(w, seed).
HoppingOperator ssh_model(double m, double t, double disorder_w = 0.0, std::uint64_t seed = 0);

/// N = 4 = ν ⊗ 2 operator 1_ν ⊗ a(k) with
/// a(k) = Σ_j sin(k_j) σ_j + i(m + Σ_j cos(k_j))·1. Gap closings at m ∈ {±1, ±3}.
HoppingOperator chiral_3d_model(double m);

/// The chiral 3D model's symmetry: S = 1_ν ⊗ iσ₂, s_A = −1, s'_A = −1.
SymmetryOperator chiral_3d_symmetry();

/// Two coupled SSH copies: A_0 = m·1, A_{+1} = t·diag(1, 0) + c σ_x,
/// A_{−1} = t·diag(0, 1) − c σ_x. Satisfies Sᵀ conj(A) S = A* with S = iσ₂.
/// The gap closes only at m = |t| (for c ≠ 0, t ≠ 0).
HoppingOperator diii_chain_model(double m, double t, double coupling = 0.25);

/// S = iσ₂, s_A = −1, s'_A = −1.
SymmetryOperator diii_symmetry();

/// Built-in models by name: shift (n), defect-shift (rho), cyclic-defect-shift
/// (rho), ssh (m, t, w, seed), chiral3d (m), diii (m, t, c), identity (d, N).
/// Missing parameters take defaults; unknown names or parameters throw
/// std::invalid_argument.
Model make_model(const std::string& name, const std::map<std::string, double>& params);

std::vector<std::string> model_names();

}  // namespace specloc
