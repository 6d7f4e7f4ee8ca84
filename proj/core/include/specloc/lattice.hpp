#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "specloc/clifford.hpp"
#include "specloc/types.hpp"

namespace specloc {

/// The integer points {x ∈ ℤᵈ : ‖x‖₂ ≤ ρ}, sorted lexicographically.
///
/// Membership uses ‖x‖² ≤ ρ²(1 + 1e-12) so that radii computed in floating
/// point (e.g. ρ = 2g/κ) keep the boundary sites they mathematically contain.
class LatticeBall {
 public:
  LatticeBall(int d, double rho);

  int dimension() const { return d_; }
  double radius() const { return rho_; }
  std::size_t size() const { return count_; }

  std::span<const int> site(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  double site_norm(std::size_t i) const;
  std::optional<std::size_t> index_of(std::span<const int> x) const;

  /// Largest |x_j| over the ball.
  int extent() const { return extent_; }

 private:
  std::uint64_t key(std::span<const int> x) const;

  int d_;
  double rho_;
  int extent_;
  std::size_t count_ = 0;
  std::vector<int> coords_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

LatticeBall build_ball(int d, double rho);

/// Block-diagonal D_ρ with block Σ_j n_j Γ_j at site n; index = site·ν + a.
CMatrix dirac_matrix(const LatticeBall& ball, const CliffordRep& rep);

}  // namespace specloc
