#pragma once

#include <span>
#include <vector>

#include "specloc/types.hpp"

namespace specloc {

/// Irreducible Hermitian representation Γ_1..Γ_d of the complex Clifford
/// algebra for odd d, with the real unitary Σ that implements complex
/// conjugation on the Dirac operator:
///
///   Σᵀ conj(Γ_j) Σ = sign_D · Γ_j,    Σ² = sign_prime_D · 1.
///
/// Σ is stored as a real matrix, so its imaginary part is zero by type.
struct CliffordRep {
  int d = 0;
  int nu = 0;
  std::vector<CMatrix> gammas;
  RMatrix sigma;
  int sign_D = 1;
  int sign_prime_D = 1;
};

/// Sign pair (s, s') attached to a dimension by the real-structure table.
struct SignPair {
  int s = 1;
  int s_prime = 1;

  friend bool operator==(const SignPair&, const SignPair&) = default;
};

/// (sign_D, sign_prime_D) for odd d, keyed by d mod 8.
SignPair dirac_signs(int d);

/// Builds the representation for d ∈ {1, 3, 5, 7}. For d = 3 the gammas are
/// the Pauli matrices and Σ = iσ₂.
///
/// Γ's are built recursively (Γ' = {1⊗σ₁, 1⊗σ₂, Γ_j⊗σ₃}); Σ is then found
/// among the Pauli strings of matching length, which makes every entry of Σ
/// exactly 0 or ±1.
CliffordRep build_clifford(int d);

/// True iff every CliffordRep invariant holds within tol (operator norm).
bool verify_clifford(const CliffordRep& rep, double tol);

/// Σ_j n_j Γ_j at a lattice site (ν×ν).
CMatrix dirac_block(const CliffordRep& rep, std::span<const int> site);

}  // namespace specloc
