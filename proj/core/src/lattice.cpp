#include "specloc/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace specloc {

namespace {
constexpr double kBallSlack = 1e-12;
}

LatticeBall::LatticeBall(int d, double rho) : d_(d), rho_(rho) {
  if (d < 1) throw std::invalid_argument("LatticeBall: dimension must be >= 1");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("LatticeBall: rho must be positive");
  const double r2 = rho * rho * (1.0 + kBallSlack);
  extent_ = static_cast<int>(std::floor(std::sqrt(r2)));
  if (extent_ > (1 << 20)) throw std::invalid_argument("LatticeBall: rho too large");

  // Odometer over the cube [-R, R]^d with the first coordinate most
  // significant yields lexicographic order directly.
  std::vector<int> x(static_cast<std::size_t>(d), -extent_);
  for (;;) {
    double n2 = 0.0;
    for (int v : x) n2 += double(v) * double(v);
    if (n2 <= r2) {
      index_.emplace(key(x), count_++);
      coords_.insert(coords_.end(), x.begin(), x.end());
    }
    int j = d - 1;
    while (j >= 0 && x[static_cast<std::size_t>(j)] == extent_) {
      x[static_cast<std::size_t>(j)] = -extent_;
      --j;
    }
    if (j < 0) break;
    ++x[static_cast<std::size_t>(j)];
  }
}

std::uint64_t LatticeBall::key(std::span<const int> x) const {
  const std::uint64_t base = 2 * static_cast<std::uint64_t>(extent_) + 1;
  std::uint64_t k = 0;
  for (int v : x) k = k * base + static_cast<std::uint64_t>(v + extent_);
  return k;
}

double LatticeBall::site_norm(std::size_t i) const {
  double n2 = 0.0;
  for (int v : site(i)) n2 += double(v) * double(v);
  return std::sqrt(n2);
}

std::optional<std::size_t> LatticeBall::index_of(std::span<const int> x) const {
  if (static_cast<int>(x.size()) != d_) return std::nullopt;
  for (int v : x)
    if (v < -extent_ || v > extent_) return std::nullopt;
  auto it = index_.find(key(x));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

LatticeBall build_ball(int d, double rho) { return LatticeBall(d, rho); }

CMatrix dirac_matrix(const LatticeBall& ball, const CliffordRep& rep) {
  if (ball.dimension() != rep.d) throw std::invalid_argument("dirac_matrix: ball and Clifford dimensions differ");
  const Index nu = rep.nu;
  const Index n = static_cast<Index>(ball.size()) * nu;
  CMatrix D = CMatrix::Zero(n, n);
  for (std::size_t s = 0; s < ball.size(); ++s)
    D.block(static_cast<Index>(s) * nu, static_cast<Index>(s) * nu, nu, nu) = dirac_block(rep, ball.site(s));
  return D;
}

}  // namespace specloc
