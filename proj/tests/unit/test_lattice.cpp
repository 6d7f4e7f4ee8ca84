#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "specloc/lattice.hpp"
#include "specloc/signature.hpp"

using namespace specloc;

namespace {

std::size_t brute_count(int d, int rho) {
  std::size_t count = 0;
  std::vector<int> x(static_cast<std::size_t>(d), -rho);
  while (true) {
    long s = 0;
    for (int v : x) s += long(v) * v;
    if (s <= long(rho) * rho) ++count;
    std::size_t i = 0;
    while (i < x.size() && x[i] == rho) x[i++] = -rho;
    if (i == x.size()) break;
    ++x[i];
  }
  return count;
}

}  // namespace

TEST_CASE("lattice: d = 1, ρ = 2 lists −2..2 in order") {
  const auto ball = build_ball(1, 2.0);
  REQUIRE(ball.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(ball.site(i)[0] == int(i) - 2);
  CHECK(ball.extent() == 2);
}

TEST_CASE("lattice: site counts match brute-force enumeration") {
  CHECK(build_ball(3, 1.0).size() == 7);
  CHECK(build_ball(3, 2.0).size() == 33);
  for (int d : {1, 2, 3})
    for (int rho : {1, 2, 3, 5}) {
      CAPTURE(d);
      CAPTURE(rho);
      CHECK(build_ball(d, rho).size() == brute_count(d, rho));
    }
}

TEST_CASE("lattice: sites are distinct, lexicographic, and round-trip through index_of") {
  const auto ball = build_ball(3, 3.5);
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const auto s = ball.site(i);
    REQUIRE(ball.index_of(s).has_value());
    CHECK(*ball.index_of(s) == i);
    CHECK(ball.site_norm(i) <= 3.5);
    if (i > 0) {
      const auto p = ball.site(i - 1);
      CHECK(std::lexicographical_compare(p.begin(), p.end(), s.begin(), s.end()));
    }
  }
  const std::array<int, 3> outside{4, 0, 0};
  CHECK_FALSE(ball.index_of(outside).has_value());
}

TEST_CASE("lattice: floating-point radii keep their boundary sites") {
  const auto ball = build_ball(2, std::sqrt(2.0));
  const std::array<int, 2> corner{1, 1};
  CHECK(ball.index_of(corner).has_value());
  CHECK(ball.size() == 9);
}

TEST_CASE("lattice: non-positive radius is rejected") {
  CHECK_THROWS(build_ball(1, 0.0));
  CHECK_THROWS(build_ball(2, -1.0));
}

TEST_CASE("lattice: d = 1 Dirac matrix is diag(−ρ..ρ)") {
  const auto rep = build_clifford(1);
  const auto D = dirac_matrix(build_ball(1, 2.0), rep);
  CMatrix expected = CMatrix::Zero(5, 5);
  for (int i = 0; i < 5; ++i) expected(i, i) = i - 2;
  CHECK((D - expected).norm() == 0.0);
}

TEST_CASE("lattice: Dirac blocks have eigenvalues ±‖n‖") {
  const auto rep = build_clifford(3);
  const auto ball = build_ball(3, 2.0);
  const auto D = dirac_matrix(ball, rep);
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const CMatrix block = D.block(Index(i) * 2, Index(i) * 2, 2, 2);
    const RVector ev = hermitian_eigenvalues(block);
    CHECK(ev(0) == doctest::Approx(-ball.site_norm(i)).epsilon(1e-12));
    CHECK(ev(1) == doctest::Approx(ball.site_norm(i)).epsilon(1e-12));
  }
  const auto in = eigen_inertia(dirac_matrix(build_ball(3, 1.0), rep), 1e-9);
  CHECK(in.n_plus == 6);
  CHECK(in.n_minus == 6);
  CHECK(in.n_zero == 2);
}
