#include <doctest.h>

#include <cmath>

#include "specloc/invariant.hpp"
#include "specloc/models.hpp"

using namespace specloc;

TEST_CASE("invariant: shift with automatic parameters") {
  const auto rep = build_clifford(1);
  const auto r = compute_invariant(shift_model(1), rep, InvariantOptions{});
  CHECK(r.kind == InvariantKind::Z);
  CHECK(r.value == 1);
  CHECK(r.verified());
  CHECK(r.dimension == 146);
  CHECK(r.conditions.kappa == doctest::Approx(1.0 / 18.0));
  CHECK(r.conditions.rho == doctest::Approx(36.0));
  REQUIRE(r.min_abs_eig.has_value());
  CHECK(*r.min_abs_eig >= 1.0 / std::sqrt(2.0));
}

TEST_CASE("invariant: n = 0 uses κ = g") {
  const auto rep = build_clifford(1);
  const auto r = compute_invariant(shift_model(0), rep, InvariantOptions{});
  CHECK(r.value == 0);
  CHECK(r.conditions.kappa == doctest::Approx(1.0));
  CHECK(r.conditions.rho == doctest::Approx(2.0));
  CHECK(r.verified());
}

TEST_CASE("invariant: SSH trivial and topological phases") {
  const auto rep = build_clifford(1);
  CHECK(compute_invariant(ssh_model(2.0, 1.0), rep, InvariantOptions{}).value == 0);
  CHECK(compute_invariant(ssh_model(0.5, 1.0), rep, InvariantOptions{}).value == -1);
}

TEST_CASE("invariant: no gap means no automatic parameters") {
  const auto rep = build_clifford(1);
  CHECK_THROWS_AS(compute_invariant(ssh_model(1.0, 1.0), rep, InvariantOptions{}), NotInvertibleError);
  InvariantOptions o;
  o.kappa = 1.0 / 18.0;
  o.rho = 20.0;
  const auto r = compute_invariant(defect_shift_model(20.0), rep, o);
  CHECK(r.value == 1);
  CHECK_FALSE(r.verified());
}

TEST_CASE("invariant: chiral 3D through realification, dense and structured") {
  const auto rep = build_clifford(3);
  InvariantOptions o;
  o.kappa = 0.25;
  o.rho = 3.0;
  o.symmetry = chiral_3d_symmetry();
  const auto dense = compute_invariant(chiral_3d_model(2.0), rep, o);
  CHECK(dense.realified);
  CHECK(dense.kind == InvariantKind::Z);
  o.dense_limit = 0;
  const auto structured = compute_invariant(chiral_3d_model(2.0), rep, o);
  CHECK(structured.value == dense.value);
  CHECK(same_counts(structured.inertia, dense.inertia));
  o.symmetry.reset();
  o.dense_limit = 3000;
  CHECK(compute_invariant(chiral_3d_model(2.0), rep, o).value == dense.value);
}

TEST_CASE("invariant: DIII dispatches to the Pfaffian") {
  const auto rep = build_clifford(1);
  InvariantOptions o;
  o.symmetry = diii_symmetry();
  o.kappa = 0.05;
  o.rho = 12.0;
  const auto a = compute_invariant(diii_chain_model(0.5, 1.0), rep, o);
  const auto b = compute_invariant(diii_chain_model(2.0, 1.0), rep, o);
  CHECK(a.kind == InvariantKind::Z2);
  CHECK(a.inertia.signature() == 0);
  CHECK(a.value * b.value == -1);
  REQUIRE(a.symmetry_residual.has_value());
  CHECK(*a.symmetry_residual <= 1e-10);
}

TEST_CASE("invariant: a wrong symmetry declaration is rejected") {
  const auto rep = build_clifford(1);
  InvariantOptions o;
  o.symmetry = diii_symmetry();
  o.kappa = 0.1;
  o.rho = 5.0;
  HoppingOperator op(1, 2);
  CMatrix a = CMatrix::Identity(2, 2);
  a(0, 1) = cplx(0.0, 0.3);
  op.add_hopping({0}, a);
  CHECK_THROWS_AS(compute_invariant(op, rep, o), std::invalid_argument);
}
