#include "specloc/invariant.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace specloc {

namespace {

Inertia real_inertia(const RSparse& K, const BlockPartition& part, double tol, Index dense_limit) {
  if (K.rows() <= dense_limit) return inertia(RMatrix(K), tol);
  if (tol == 0.0) return structured_inertia(K, part, 0.0);
  Inertia in;
  in.tol = tol;
  in.n_plus = structured_inertia(K, part, tol).n_plus;
  in.n_minus = structured_inertia(K, part, -tol).n_minus;
  in.n_zero = K.rows() - in.n_plus - in.n_minus;
  return in;
}

void require_zero_signature(const Inertia& in, InvariantKind kind) {
  if (in.signature() != 0)
    throw Error("symmetry class " + to_string(kind) + " forces Sig(L) = 0, got " + std::to_string(in.signature()));
}

}  // namespace

double resolve_kappa(const OperatorBounds& bounds, const std::optional<double>& kappa) {
  if (kappa) {
    if (!(*kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    return *kappa;
  }
  if (!bounds.norm_gap.invertible) throw NotInvertibleError("cannot derive kappa: operator has no gap");
  const double km = kappa_max(bounds);
  return std::isinf(km) ? bounds.norm_gap.gap_g : km;
}

double resolve_rho(const OperatorBounds& bounds, double kappa, const std::optional<double>& rho) {
  if (rho) {
    if (!(*rho > 0.0)) throw std::invalid_argument("rho must be positive");
    return *rho;
  }
  if (!bounds.norm_gap.invertible) throw NotInvertibleError("cannot derive rho: operator has no gap");
  return 2.0 * bounds.norm_gap.gap_g / kappa;
}

InvariantResult compute_invariant(const HoppingOperator& op, const CliffordRep& rep, const InvariantOptions& options) {
  return compute_invariant(op, rep, operator_bounds(op, rep, options.bounds), options);
}

InvariantResult compute_invariant(const HoppingOperator& op, const CliffordRep& rep, const OperatorBounds& bounds,
                                  const InvariantOptions& options) {
  const double kappa = resolve_kappa(bounds, options.kappa);
  const double rho = resolve_rho(bounds, kappa, options.rho);

  InvariantResult result;
  result.conditions = condition_report(bounds, kappa, rho);
  const LatticeBall ball = build_ball(op.dimension(), rho);
  const LocalizerMatrix L = build_localizer(op, rep, ball, kappa);
  result.dimension = L.dimension();

  const double tol = options.tol.value_or(
      result.conditions.verified() ? result.conditions.gap_g / (2.0 * std::numbers::sqrt2) : 0.0);

  if (!options.symmetry) {
    result.kind = InvariantKind::Z;
    result.inertia = localizer_inertia(L, tol, options.dense_limit);
    result.value = static_cast<long>(half_signature(result.inertia));
  } else {
    const RealSymmetryData data = make_symmetry_data(rep, op.fiber_dim(), *options.symmetry);
    const SymmetryClass cls = data.symmetry_class();
    result.symmetry_class = cls;
    result.kind = cls.kind;
    const SymmetryResiduals pre = check_symmetry(data, op, rep, op.translation_invariant() ? nullptr : &ball);
    if (pre.max() > options.symmetry_tol)
      throw std::invalid_argument("symmetry preconditions violated, residual " + std::to_string(pre.max()));
    const RSparse R = build_R(data, ball.size());
    const double resid = verify_symmetry(L, R, cls.s_L);
    result.symmetry_residual = resid;
    if (resid > options.symmetry_tol * std::max(1.0, L.matrix.norm()))
      throw std::invalid_argument("localizer violates the declared symmetry, residual " + std::to_string(resid));

    switch (cls.kind) {
      case InvariantKind::Z: {
        const RSparse K = realify(L, R, options.symmetry_tol);
        result.realified = true;
        result.inertia = real_inertia(K, L.site_partition(), tol, options.dense_limit);
        result.value = static_cast<long>(half_signature(result.inertia));
        break;
      }
      case InvariantKind::TwoZ: {
        result.inertia = localizer_inertia(L, tol, options.dense_limit);
        result.value = static_cast<long>(half_signature(result.inertia));
        break;
      }
      case InvariantKind::Z2: {
        result.inertia = localizer_inertia(L, tol, options.dense_limit);
        require_zero_signature(result.inertia, cls.kind);
        result.value = z2_invariant(L, R, options.symmetry_tol);
        break;
      }
      case InvariantKind::Trivial: {
        result.inertia = localizer_inertia(L, tol, options.dense_limit);
        require_zero_signature(result.inertia, cls.kind);
        result.value = 0;
        break;
      }
    }
  }
  if (result.dimension <= options.min_eig_max_dim) result.min_abs_eig = min_abs_eigenvalue(L.matrix);
  return result;
}

}  // namespace specloc
