#include <doctest.h>

#include <cmath>
#include <numbers>

#include "specloc/localizer.hpp"
#include "specloc/models.hpp"

using namespace specloc;

namespace {

// ∫₀^∞ |Ĝ₁′(p)| dp·2 with Ĝ₁′(p) = 2i sin(3p/4) t̂(p/4), t̂(q) = (1 − cos q)/(πq²):
// G₁ is the convolution of the indicator of [−3/4, 3/4] with the hat of
// half-width 1/4 scaled to unit height, so its derivative has the product transform.
double analytic_transform_l1(double rho) {
  auto integrand = [](double p) {
    const double q = p / 4.0;
    const double that = q == 0.0 ? 1.0 / (2.0 * std::numbers::pi) : (1.0 - std::cos(q)) / (std::numbers::pi * q * q);
    return std::abs(2.0 * std::sin(3.0 * p / 4.0) * that);
  };
  // Simpson on [0, 4000]; the integrand decays like p⁻² and the tail is < 1e-3.
  const int n = 400000;
  const double P = 4000.0, h = P / n;
  double acc = integrand(0.0) + integrand(P);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * integrand(h * i);
  return 2.0 * acc * h / 3.0 / rho;
}

}  // namespace

TEST_CASE("localizer: shift at ρ = 2, κ = 1 has the literal block form") {
  const auto rep = build_clifford(1);
  HoppingOperator S(1, 1);
  S.add_hopping({1}, CMatrix::Constant(1, 1, 1.0));
  const auto ball = build_ball(1, 2.0);
  const auto L = build_localizer(S, rep, ball, 1.0);
  REQUIRE(L.dimension() == 10);
  CMatrix expected = CMatrix::Zero(10, 10);
  const CMatrix D = dirac_matrix(ball, rep);
  const CMatrix A = restrict(S, ball);
  expected.topLeftCorner(5, 5) = D;
  expected.topRightCorner(5, 5) = A;
  expected.bottomLeftCorner(5, 5) = A.adjoint();
  expected.bottomRightCorner(5, 5) = -D;
  CHECK((L.dense() - expected).norm() == 0.0);
}

TEST_CASE("localizer: identity operator has spectrum ±(κ²n² + 1)^{1/2}") {
  const auto rep = build_clifford(1);
  const auto ball = build_ball(1, 4.0);
  const double kappa = 0.3;
  const auto L = build_localizer(shift_model(0), rep, ball, kappa);
  const RVector ev = hermitian_eigenvalues(L.dense());
  std::vector<double> expected;
  for (int n = -4; n <= 4; ++n) {
    expected.push_back(std::sqrt(kappa * kappa * n * n + 1));
    expected.push_back(-std::sqrt(kappa * kappa * n * n + 1));
  }
  std::sort(expected.begin(), expected.end());
  for (Index i = 0; i < ev.size(); ++i) CHECK(ev(i) == doctest::Approx(expected[static_cast<std::size_t>(i)]).epsilon(1e-12));
  CHECK(half_signature(localizer_inertia(L, 1e-8)) == 0);
}

TEST_CASE("localizer: grading structure J(L − κD̂)J = −(L − κD̂)") {
  const auto rep = build_clifford(3);
  const auto ball = build_ball(3, 2.0);
  const auto op = chiral_3d_model(2.0);
  const auto L = build_localizer(op, rep, ball, 0.2);
  const Index half = L.dimension() / 2;
  CMatrix Dhat = CMatrix::Zero(L.dimension(), L.dimension());
  const CMatrix D = kron(dirac_matrix(ball, rep), CMatrix::Identity(2, 2));
  // dirac_matrix is site·ν + a; the fiber index is a·m + μ within the site, matching kron(D_site, 1_m).
  Dhat.topLeftCorner(half, half) = D;
  Dhat.bottomRightCorner(half, half) = -D;
  const CMatrix H = L.dense() - 0.2 * Dhat;
  RVector j = RVector::Ones(L.dimension());
  j.tail(half).setConstant(-1.0);
  const CMatrix JHJ = j.cast<cplx>().asDiagonal() * H * j.cast<cplx>().asDiagonal();
  CHECK((JHJ + H).norm() < 1e-14);
  CHECK((H.topLeftCorner(half, half)).norm() == 0.0);
  CHECK((H.topRightCorner(half, half) - restrict(op, ball)).norm() < 1e-14);
}

TEST_CASE("localizer: shift n = 1 at κ = 1/18, ρ = 36") {
  const auto rep = build_clifford(1);
  const auto L = build_localizer(shift_model(1), rep, build_ball(1, 36.0), 1.0 / 18.0);
  CHECK(L.dimension() == 146);
  const auto gc = gap_check(L, 1.0);
  CHECK(gc.satisfies_bound);
  CHECK_FALSE(gc.vacuous);
  CHECK(gc.min_abs_eig >= 1.0 / std::numbers::sqrt2);
  CHECK(half_signature(localizer_inertia(L, 1.0 / (2 * std::numbers::sqrt2))) == 1);
  CHECK(half_signature(eigen_inertia(L.dense(), 1e-9)) == 1);
}

TEST_CASE("localizer: gap check is vacuous without a gap") {
  const auto L = build_localizer(ssh_model(1.0, 1.0), build_clifford(1), build_ball(1, 5.0), 0.1);
  CHECK(gap_check(L, 0.0).vacuous);
  CHECK_FALSE(gap_check(L, 0.0).satisfies_bound);
}

TEST_CASE("localizer: Haagerup profile values") {
  const auto p = haagerup_profile(10.0);
  CHECK(p.G(0.0) == 1.0);
  CHECK(p.G(5.0) == 1.0);
  CHECK(p.G(-5.0) == 1.0);
  CHECK(p.G(10.0) == 0.0);
  CHECK(p.G(-10.0) == 0.0);
  CHECK(p.G(12.0) == 0.0);
  CHECK(p.F(0.0) == 0.5);
  CHECK(p.F(10.0) == 1.0);
  CHECK(p.F(-10.0) == 0.0);
  for (double x = -12.0; x <= 12.0; x += 0.37) {
    const double g = p.G(x), f = p.F(x);
    CHECK(4 * f * (1 - f) == doctest::Approx(std::pow(g, 4)).epsilon(1e-12));
    CHECK(p.G(x) == doctest::Approx(p.G(-x)).epsilon(1e-14));
    CHECK(p.F(x) + p.F(-x) == doctest::Approx(1.0).epsilon(1e-12));
    const double fd = (p.G(x + 1e-6) - p.G(x - 1e-6)) / 2e-6;
    CHECK(p.dG(x) == doctest::Approx(fd).epsilon(1e-5));
  }
  CHECK_THROWS(haagerup_profile(0.0));
}

TEST_CASE("localizer: derivative transform L¹ norm obeys the 8/ρ bound") {
  for (double rho : {1.0, 10.0, 36.0}) {
    CAPTURE(rho);
    const double v = derivative_transform_l1(haagerup_profile(rho));
    CHECK(v <= 8.0 / rho);
    const double ref = analytic_transform_l1(rho);
    CHECK(v >= ref * (1 - 1e-3));
    CHECK(v <= ref * 1.03);
  }
}

TEST_CASE("localizer: tapered localizer of the identity") {
  const auto rep = build_clifford(1);
  const double rho = 8.0;
  const auto pair = haagerup_profile(rho);
  const auto ball = build_ball(1, rho);
  const auto L = build_tapered_localizer(shift_model(0), rep, ball, pair);
  const CMatrix M = L.dense();
  const Index S = static_cast<Index>(ball.size());
  for (Index s = 0; s < S; ++s) {
    const double x = ball.site(static_cast<std::size_t>(s))[0];
    CHECK(M(s, s).real() == doctest::Approx(2 * pair.F(x) - 1).epsilon(1e-14));
    CHECK(M(S + s, S + s).real() == doctest::Approx(1 - 2 * pair.F(x)).epsilon(1e-14));
    CHECK(M(s, S + s).real() == doctest::Approx(pair.G(x) * pair.G(x)).epsilon(1e-14));
  }
  // ±1 on the boundary, decoupled.
  CHECK(M(S - 1, S - 1).real() == 1.0);
  CHECK(M(S - 1, 2 * S - 1) == cplx(0.0));
}

TEST_CASE("localizer: homotopy end points and affinity") {
  const auto rep = build_clifford(1);
  const auto op = ssh_model(0.5, 1.0);
  const auto ball = build_ball(1, 12.0);
  const double kappa = 1.0 / 12.0;
  const CMatrix L1 = homotopy_localizer(op, rep, ball, kappa, 1.0).dense();
  CHECK((L1 - build_localizer(op, rep, ball, kappa).dense()).norm() == 0.0);
  const CMatrix L0 = homotopy_localizer(op, rep, ball, kappa, 0.0).dense();
  CHECK((L0 - build_tapered_localizer(op, rep, ball, haagerup_profile(12.0)).dense()).norm() < 1e-14);
  // The Dirac part is affine in λ; the off-diagonal part is quadratic through G(λ)².
  const double lam = 0.3;
  const CMatrix Lm = homotopy_localizer(op, rep, ball, kappa, lam).dense();
  const Index half = Lm.rows() / 2;
  CHECK((Lm.topLeftCorner(half, half) - ((1 - lam) * L0 + lam * L1).topLeftCorner(half, half)).norm() < 1e-13);
  CHECK_THROWS(homotopy_localizer(op, rep, ball, kappa, 1.5));
}

TEST_CASE("localizer: homotopy keeps signature and gap for the shift") {
  const auto rep = build_clifford(1);
  const auto ball = build_ball(1, 36.0);
  for (double lam : {0.0, 0.5, 1.0}) {
    const auto L = homotopy_localizer(shift_model(1), rep, ball, 1.0 / 18.0, lam);
    CHECK(half_signature(localizer_inertia(L, 1e-8)) == 1);
    CHECK(min_abs_eigenvalue(L.matrix) > 0.5);
  }
}

TEST_CASE("localizer: flow path scales the off-diagonal block") {
  const auto rep = build_clifford(1);
  const auto ball = build_ball(1, 6.0);
  const auto op = shift_model(2);
  CHECK((flow_localizer(op, rep, ball, 0.25, 1.0).dense() - build_localizer(op, rep, ball, 0.25).dense()).norm() == 0.0);
  const CMatrix F0 = flow_localizer(op, rep, ball, 0.25, 0.0).dense();
  const Index half = F0.rows() / 2;
  CHECK(F0.topRightCorner(half, half).norm() == 0.0);
}

TEST_CASE("localizer: structured inertia path agrees with the dense path") {
  const auto rep = build_clifford(3);
  const auto L = build_localizer(chiral_3d_model(2.0), rep, build_ball(3, 3.0), 0.25);
  const auto dense = localizer_inertia(L, 0.0, L.dimension());
  const auto structured = localizer_inertia(L, 0.0, 0);
  CHECK(same_counts(dense, structured));
  CHECK(same_counts(localizer_inertia(L, 0.05, L.dimension()), localizer_inertia(L, 0.05, 0)));
}
