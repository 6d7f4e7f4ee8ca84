#pragma once

#include <optional>
#include <string>

#include "specloc/clifford.hpp"
#include "specloc/localizer.hpp"
#include "specloc/operators.hpp"
#include "specloc/types.hpp"

namespace specloc {

enum class InvariantKind { Z, TwoZ, Z2, Trivial };

std::string to_string(InvariantKind kind);

/// (s_A, s'_A) for j ∈ {2, 4, 6, 8} (j mod 8, with 0 read as 8).
SignPair operator_signs(int j);

struct SymmetryClass {
  int s_L = 1;
  int s_prime_L = 1;
  InvariantKind kind = InvariantKind::Z;
};

/// s_L = s_A s_D, s'_L = s'_D s'_A (s_A)^{(s_D+1)/2}; the pair (s_L, s'_L)
/// selects the invariant: (+,+) → Z, (+,−) → 2Z, (−,+) → Z2, (−,−) → trivial.
SymmetryClass classify(int s_D, int s_prime_D, int s_A, int s_prime_A);

/// classify() with the signs read from the d and j tables.
SymmetryClass classify_dj(int d, int j);

/// Model-level symmetry: real unitary S on ℂᴺ with S² = s'_A and
/// Sᵀ conj(A) S = A (s_A = +1) or A* (s_A = −1).
struct SymmetryOperator {
  RMatrix S;
  int s_A = 1;
  int s_prime_A = 1;
};

struct RealSymmetryData {
  /// Σ ⊗ 1_m on the fiber ℂᴺ = ℂ^ν ⊗ ℂ^m.
  RMatrix sigma;
  RMatrix S;
  int s_D = 1;
  int s_prime_D = 1;
  int s_A = 1;
  int s_prime_A = 1;

  int s_L() const { return classify(s_D, s_prime_D, s_A, s_prime_A).s_L; }
  int s_prime_L() const { return classify(s_D, s_prime_D, s_A, s_prime_A).s_prime_L; }
  SymmetryClass symmetry_class() const { return classify(s_D, s_prime_D, s_A, s_prime_A); }
};

/// Combines the Clifford real structure with a model symmetry. Throws
/// std::invalid_argument on sign or dimension inconsistencies.
RealSymmetryData make_symmetry_data(const CliffordRep& rep, int N, const SymmetryOperator& sym);

/// Residuals of the standing assumptions and of the operator relation.
struct SymmetryResiduals {
  double S_squared = 0.0;        // ‖S² − s'_A‖
  double sigma_S = 0.0;          // ‖SΣ − ΣS‖
  double S_dirac = 0.0;          // max_j ‖S Γ̃_j − Γ̃_j S‖
  double sigma_A = 0.0;          // max_r ‖Σ A_r − A_r Σ‖
  double operator_relation = 0.0;  // max_r ‖Sᵀ conj(A_r) S − (A^{[s_A]})_r‖

  double max() const;
};

/// Translation-invariant operators are checked on their coefficients;
/// site-dependent ones on the coefficients at every site of probe.
SymmetryResiduals check_symmetry(const RealSymmetryData& data, const HoppingOperator& op, const CliffordRep& rep,
                                 const LatticeBall* probe = nullptr);

/// R = ΣS σ₁^{{s_A}} σ₃^{{s_A s_D}} on a localizer with site_count sites
/// (grading-major order). Entries are exactly 0 or ±1.
RSparse build_R(const RealSymmetryData& data, std::size_t site_count);

/// ‖Rᵀ conj(L) R − s_L L‖_F.
double verify_symmetry(const CSparse& L, const RSparse& R, int s_L);
double verify_symmetry(const LocalizerMatrix& L, const RSparse& R, int s_L);

enum class RootBranch { First, Second };

/// M = R^{1/2} for R with R² = 1: eigenvalue 1 ↦ 1, −1 ↦ i (first branch)
/// or −i (second).
CSparse square_root_R(const RSparse& R, RootBranch branch = RootBranch::First);

/// K = i M L Mᴴ, checked real and antisymmetric within tol, returned as real.
RMatrix z2_matrix(const LocalizerMatrix& L, const RSparse& R, double tol, RootBranch branch = RootBranch::First);

/// sgn Pf(i M L Mᴴ). Throws std::invalid_argument if R² ≠ 1.
int z2_invariant(const LocalizerMatrix& L, const RSparse& R, double tol, RootBranch branch = RootBranch::First);

/// For s_L = s'_L = +1: M L Mᴴ is real symmetric and has the inertia of L.
RSparse realify(const LocalizerMatrix& L, const RSparse& R, double tol);

}  // namespace specloc
