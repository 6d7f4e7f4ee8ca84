#include <doctest.h>

#include <array>

#include "specloc/models.hpp"
#include "specloc/symmetry.hpp"

using namespace specloc;

namespace {

struct Entry {
  int d, j, s_L, s_prime_L;
};

// (s_L, s'_L) for odd d and j ∈ {2, 4, 6, 8}, transcribed row by row.
constexpr std::array<Entry, 16> kTable{{
    {1, 2, -1, -1}, {1, 4, 1, -1}, {1, 6, -1, 1}, {1, 8, 1, 1},
    {3, 2, 1, -1},  {3, 4, -1, 1}, {3, 6, 1, 1},  {3, 8, -1, -1},
    {5, 2, -1, 1},  {5, 4, 1, 1},  {5, 6, -1, -1}, {5, 8, 1, -1},
    {7, 2, 1, 1},   {7, 4, -1, -1}, {7, 6, 1, -1}, {7, 8, -1, 1},
}};

InvariantKind kind_of(int s_L, int s_prime_L) {
  if (s_L == 1) return s_prime_L == 1 ? InvariantKind::Z : InvariantKind::TwoZ;
  return s_prime_L == 1 ? InvariantKind::Z2 : InvariantKind::Trivial;
}

SymmetryOperator synthetic_S(int nu, int j) {
  const SignPair a = operator_signs(j);
  RMatrix s0 = RMatrix::Identity(2, 2);
  if (a.s_prime == -1) s0 << 0, 1, -1, 0;
  return {kron(RMatrix(RMatrix::Identity(nu, nu)), s0), a.s, a.s_prime};
}

}  // namespace

TEST_CASE("symmetry: classify reproduces the 16-entry table") {
  for (const auto& e : kTable) {
    CAPTURE(e.d);
    CAPTURE(e.j);
    const auto c = classify_dj(e.d, e.j);
    CHECK(c.s_L == e.s_L);
    CHECK(c.s_prime_L == e.s_prime_L);
    CHECK(c.kind == kind_of(e.s_L, e.s_prime_L));
  }
}

TEST_CASE("symmetry: spot checks and input validation") {
  CHECK(classify(1, 1, 1, 1).kind == InvariantKind::Z);
  CHECK(classify(1, 1, -1, 1).kind == InvariantKind::Trivial);
  CHECK(classify(1, 1, -1, -1).kind == InvariantKind::Z2);
  CHECK_THROWS(classify(0, 1, 1, 1));
  CHECK_THROWS(operator_signs(3));
  CHECK(operator_signs(0) == operator_signs(8));
  CHECK(to_string(InvariantKind::TwoZ) == "2Z");
}

TEST_CASE("symmetry: R² = s'_L for every (d, j) with synthetic S") {
  for (const auto& e : kTable) {
    CAPTURE(e.d);
    CAPTURE(e.j);
    const auto rep = build_clifford(e.d);
    const auto sym = synthetic_S(rep.nu, e.j);
    const auto data = make_symmetry_data(rep, rep.nu * 2, sym);
    const RSparse R = build_R(data, 3);
    const RMatrix Rd(R);
    const Index n = Rd.rows();
    CHECK((Rd * Rd - double(e.s_prime_L) * RMatrix::Identity(n, n)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((Rd * Rd.transpose() - RMatrix::Identity(n, n)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(data.s_L() == e.s_L);
    CHECK(data.s_prime_L() == e.s_prime_L);
  }
}

TEST_CASE("symmetry: a real operator with S = 1 is symmetric and breaks under an odd perturbation") {
  const auto rep = build_clifford(1);
  const SymmetryOperator sym{RMatrix::Identity(1, 1), 1, 1};
  const auto data = make_symmetry_data(rep, 1, sym);
  const auto op = ssh_model(0.5, 1.0);
  CHECK(check_symmetry(data, op, rep).max() == 0.0);
  auto L = build_localizer(op, rep, build_ball(1, 10.0), 0.1);
  const RSparse R = build_R(data, L.site_count);
  CHECK(verify_symmetry(L, R, data.s_L()) == 0.0);
  const double eps = 1e-3;
  CSparse P(L.dimension(), L.dimension());
  P.insert(0, 1) = cplx(0.0, eps);
  P.insert(1, 0) = cplx(0.0, -eps);
  L.matrix += P;
  CHECK(verify_symmetry(L, R, data.s_L()) >= eps / 2);
}

TEST_CASE("symmetry: DIII chain residuals and Z2 sign") {
  const auto rep = build_clifford(1);
  const auto data = make_symmetry_data(rep, 2, diii_symmetry());
  CHECK(data.symmetry_class().kind == InvariantKind::Z2);
  const auto ball = build_ball(1, 12.0);
  int below = 0, above = 0;
  for (double m : {0.5, 2.0}) {
    const auto op = diii_chain_model(m, 1.0);
    CHECK(check_symmetry(data, op, rep).max() <= 1e-12);
    const auto L = build_localizer(op, rep, ball, 0.05);
    const RSparse R = build_R(data, L.site_count);
    CHECK(verify_symmetry(L, R, data.s_L()) <= 1e-12);
    CHECK(localizer_inertia(L, 1e-8).signature() == 0);
    const int first = z2_invariant(L, R, 1e-10, RootBranch::First);
    const int second = z2_invariant(L, R, 1e-10, RootBranch::Second);
    (m < 1.0 ? below : above) = first;
    // K₂ = R K₁ Rᵀ, so the branches differ by det R.
    const double detR = RMatrix(R).determinant();
    CHECK(std::abs(detR) == doctest::Approx(1.0));
    CHECK(second == (detR > 0 ? first : -first));
  }
  CHECK(below != above);
}

TEST_CASE("symmetry: Z2 of a 2×2 example") {
  LocalizerMatrix L;
  CMatrix s2(2, 2);
  s2 << 0, cplx(0, -1), cplx(0, 1), 0;
  L.matrix = s2.sparseView();
  RSparse R(2, 2);
  R.setIdentity();
  CHECK(verify_symmetry(L, R, -1) == 0.0);
  // K = iσ₂ = [[0, 1], [−1, 0]].
  CHECK(z2_invariant(L, R, 1e-12) == 1);
  CMatrix neg = -s2;
  L.matrix = neg.sparseView();
  CHECK(z2_invariant(L, R, 1e-12) == -1);
  RSparse bad(2, 2);
  bad.insert(0, 1) = 1.0;
  bad.insert(1, 0) = -1.0;
  CHECK_THROWS_AS(square_root_R(bad), std::invalid_argument);
}

TEST_CASE("symmetry: broken DIII symmetry is detected") {
  const auto rep = build_clifford(1);
  const auto data = make_symmetry_data(rep, 2, diii_symmetry());
  auto op = diii_chain_model(0.5, 1.0);
  CMatrix kick = CMatrix::Zero(2, 2);
  kick(0, 0) = cplx(0.0, 0.1);
  op.add_hopping({0}, kick);
  CHECK(check_symmetry(data, op, rep).operator_relation >= 0.1);
}

TEST_CASE("symmetry: chiral 3D model realifies with unchanged inertia") {
  const auto rep = build_clifford(3);
  const auto data = make_symmetry_data(rep, 4, chiral_3d_symmetry());
  CHECK(data.symmetry_class().kind == InvariantKind::Z);
  const auto op = chiral_3d_model(2.0);
  CHECK(check_symmetry(data, op, rep).max() <= 1e-12);
  const auto L = build_localizer(op, rep, build_ball(3, 2.0), 0.3);
  const RSparse R = build_R(data, L.site_count);
  CHECK(verify_symmetry(L, R, 1) <= 1e-12);
  const RSparse K = realify(L, R, 1e-12);
  const RMatrix Kd(K);
  CHECK((Kd - Kd.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(same_counts(inertia(Kd, 1e-8), inertia(L.dense(), 1e-8)));
}

TEST_CASE("symmetry: dimension mismatches are rejected") {
  const auto rep = build_clifford(3);
  CHECK_THROWS(make_symmetry_data(rep, 3, chiral_3d_symmetry()));
  CHECK_THROWS(make_symmetry_data(rep, 2, chiral_3d_symmetry()));
}
