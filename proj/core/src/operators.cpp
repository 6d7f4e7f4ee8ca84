#include "specloc/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace specloc {

HoppingOperator::HoppingOperator(int d, int N) : d_(d), N_(N) {
  if (d < 1) throw std::invalid_argument("HoppingOperator: dimension must be >= 1");
  if (N < 1) throw std::invalid_argument("HoppingOperator: fiber dimension must be >= 1");
}

void HoppingOperator::add_hopping(std::vector<int> r, const CMatrix& A) {
  if (site_fn_) throw std::logic_error("add_hopping after set_site_function");
  if (static_cast<int>(r.size()) != d_) throw std::invalid_argument("add_hopping: displacement has wrong dimension");
  if (A.rows() != N_ || A.cols() != N_) throw std::invalid_argument("add_hopping: coefficient must be N x N");
  for (auto& h : hoppings_) {
    if (h.r == r) {
      h.coefficient += A;
      return;
    }
  }
  hoppings_.push_back({std::move(r), A});
}

void HoppingOperator::set_site_function(SiteFunction f, std::vector<double> sup_norms) {
  if (sup_norms.size() != hoppings_.size())
    throw std::invalid_argument("set_site_function: one sup norm per hopping required");
  site_fn_ = std::move(f);
  sup_norms_ = std::move(sup_norms);
}

CMatrix HoppingOperator::coefficient(std::size_t h, std::span<const int> site) const {
  if (site_fn_) return site_fn_(h, site);
  return hoppings_[h].coefficient;
}

double HoppingOperator::sup_norm(std::size_t h) const {
  if (site_fn_) return sup_norms_[h];
  return operator_norm(hoppings_[h].coefficient);
}

double HoppingOperator::range() const {
  double best = 0.0;
  for (const auto& h : hoppings_) {
    double n2 = 0.0;
    for (int v : h.r) n2 += double(v) * double(v);
    best = std::max(best, std::sqrt(n2));
  }
  return best;
}

namespace {

void check_same_dim(const HoppingOperator& op, const LatticeBall& ball) {
  if (op.dimension() != ball.dimension()) throw std::invalid_argument("operator and ball dimensions differ");
}

std::vector<Eigen::Triplet<cplx, Index>> restriction_triplets(const HoppingOperator& op, const LatticeBall& ball) {
  check_same_dim(op, ball);
  const Index N = op.fiber_dim();
  const auto d = static_cast<std::size_t>(op.dimension());
  std::vector<Eigen::Triplet<cplx, Index>> trips;
  std::vector<int> target(d);
  for (std::size_t s = 0; s < ball.size(); ++s) {
    const auto m = ball.site(s);
    for (std::size_t h = 0; h < op.hoppings().size(); ++h) {
      const auto& r = op.hoppings()[h].r;
      for (std::size_t j = 0; j < d; ++j) target[j] = m[j] - r[j];
      const auto t = ball.index_of(target);
      if (!t) continue;
      const CMatrix A = op.coefficient(h, m);
      for (Index a = 0; a < N; ++a)
        for (Index b = 0; b < N; ++b)
          if (A(a, b) != cplx(0.0))
            trips.emplace_back(static_cast<Index>(s) * N + a, static_cast<Index>(*t) * N + b, A(a, b));
    }
  }
  return trips;
}

double l1_norm(const std::vector<int>& r) {
  double s = 0.0;
  for (int v : r) s += std::abs(double(v));
  return s;
}

double l2_norm(const std::vector<int>& r) {
  double s = 0.0;
  for (int v : r) s += double(v) * double(v);
  return std::sqrt(s);
}

void require_translation_invariant(const HoppingOperator& op, const char* what) {
  if (!op.translation_invariant())
    throw std::invalid_argument(std::string(what) + ": operator is site-dependent");
}

struct SingularRange {
  double lo;
  double hi;
};

SingularRange singular_range(const CMatrix& m) {
  if (m.rows() == 1) {
    const double a = std::abs(m(0, 0));
    return {a, a};
  }
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  return {s(s.size() - 1), s(0)};
}

// Grid scan over the Brillouin zone for min of lo(k) and max of hi(k),
// followed by coordinate-wise golden-section polishing around the best
// grid points. f must be Lipschitz with constant lip in the ∞-norm of k.
struct ZoneExtrema {
  double lo = 0.0;
  double hi = 0.0;
  double slack = 0.0;
};

template <typename F>
ZoneExtrema zone_extrema(int d, double lip, F&& f) {
  constexpr std::size_t kMaxPoints = std::size_t{1} << 18;
  constexpr double kChangeTol = 1e-6;
  const double two_pi = 2.0 * std::numbers::pi;
  const auto du = static_cast<std::size_t>(d);

  std::vector<double> k_lo(du), k_hi(du), k(du);
  double lo = 0.0, hi = 0.0, h = 0.0;
  double prev_lo = std::numeric_limits<double>::quiet_NaN(), prev_hi = prev_lo;
  for (std::size_t n = 64;; n *= 2) {
    std::size_t total = 1;
    for (int j = 0; j < d; ++j) total *= n;
    h = two_pi / double(n);
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    std::vector<std::size_t> idx(du, 0);
    for (std::size_t p = 0; p < total; ++p) {
      for (std::size_t j = 0; j < du; ++j) k[j] = h * double(idx[j]);
      const SingularRange v = f(k);
      if (v.lo < lo) {
        lo = v.lo;
        k_lo = k;
      }
      if (v.hi > hi) {
        hi = v.hi;
        k_hi = k;
      }
      for (std::size_t j = du; j-- > 0;) {
        if (++idx[j] < n) break;
        idx[j] = 0;
      }
    }
    const bool converged = std::abs(lo - prev_lo) < kChangeTol && std::abs(hi - prev_hi) < kChangeTol;
    prev_lo = lo;
    prev_hi = hi;
    if (converged || total * (std::size_t{1} << du) > kMaxPoints) break;
  }

  // Polish: golden-section along each axis within ±h of the grid optimum.
  auto polish = [&](std::vector<double> x, bool maximize, double best) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    auto value = [&](const std::vector<double>& y) {
      const SingularRange v = f(y);
      return maximize ? v.hi : -v.lo;
    };
    double fbest = maximize ? best : -best;
    for (int round = 0; round < 3; ++round) {
      for (std::size_t j = 0; j < du; ++j) {
        double a = x[j] - h, b = x[j] + h;
        std::vector<double> y = x;
        double c = b - phi * (b - a), e = a + phi * (b - a);
        y[j] = c;
        double fc = value(y);
        y[j] = e;
        double fe = value(y);
        for (int it = 0; it < 60 && b - a > 1e-13; ++it) {
          if (fc > fe) {
            b = e;
            e = c;
            fe = fc;
            c = b - phi * (b - a);
            y[j] = c;
            fc = value(y);
          } else {
            a = c;
            c = e;
            fc = fe;
            e = a + phi * (b - a);
            y[j] = e;
            fe = value(y);
          }
        }
        const double xm = fc > fe ? c : e;
        const double fm = std::max(fc, fe);
        if (fm > fbest) {
          fbest = fm;
          x[j] = xm;
        }
      }
    }
    return maximize ? fbest : -fbest;
  };
  ZoneExtrema out;
  out.hi = polish(k_hi, true, hi);
  out.lo = polish(k_lo, false, lo);
  out.slack = lip * h / 2.0;
  return out;
}

std::size_t checked_box_size(int d, int side, int N) {
  constexpr std::size_t kMaxDim = 6000;
  std::size_t sites = 1;
  for (int j = 0; j < d; ++j) {
    sites *= static_cast<std::size_t>(side);
    if (sites * static_cast<std::size_t>(N) > kMaxDim)
      throw std::invalid_argument("norm_and_gap: truncation box too large for dense SVD");
  }
  return sites;
}

NormGap truncation_norm_gap(const HoppingOperator& op, double rho_probe) {
  if (!(rho_probe > 0.0)) throw std::invalid_argument("norm_and_gap: rho_probe must be positive");
  const int d = op.dimension();
  const int P = static_cast<int>(std::ceil(rho_probe));
  const int side = 2 * P;
  const std::size_t sites = checked_box_size(d, side, op.fiber_dim());
  const Index N = op.fiber_dim();
  const auto du = static_cast<std::size_t>(d);
  CMatrix M = CMatrix::Zero(static_cast<Index>(sites) * N, static_cast<Index>(sites) * N);
  std::vector<int> x(du), y(du);
  auto encode = [&](const std::vector<int>& v) {
    std::size_t c = 0;
    for (int t : v) c = c * static_cast<std::size_t>(side) + static_cast<std::size_t>(t + P);
    return c;
  };
  for (std::size_t s = 0; s < sites; ++s) {
    std::size_t c = s;
    for (std::size_t j = du; j-- > 0;) {
      x[j] = static_cast<int>(c % static_cast<std::size_t>(side)) - P;
      c /= static_cast<std::size_t>(side);
    }
    for (std::size_t h = 0; h < op.hoppings().size(); ++h) {
      const auto& r = op.hoppings()[h].r;
      for (std::size_t j = 0; j < du; ++j) {
        int t = (x[j] - r[j] + P) % side;
        if (t < 0) t += side;
        y[j] = t - P;
      }
      M.block(static_cast<Index>(s) * N, static_cast<Index>(encode(y)) * N, N, N) += op.coefficient(h, x);
    }
  }
  Eigen::BDCSVD<CMatrix> svd(M);
  const auto& sv = svd.singularValues();
  NormGap out;
  out.norm_A = sv(0);
  out.gap_g = sv(sv.size() - 1);
  out.estimate = true;
  out.norm_upper = out.norm_A;
  out.gap_lower = out.gap_g;
  out.invertible = out.gap_g > 1e-10 * out.norm_A;
  return out;
}

bool commutes_with_clifford(const HoppingOperator& op, const CliffordRep& rep) {
  const Index m = op.fiber_dim() / rep.nu;
  std::vector<CMatrix> gt;
  for (const auto& g : rep.gammas) gt.push_back(kron(g, CMatrix::Identity(m, m)));
  for (const auto& h : op.hoppings()) {
    const double scale = std::max(1.0, operator_norm(h.coefficient));
    for (const auto& g : gt)
      if (operator_norm(CMatrix(g * h.coefficient - h.coefficient * g)) > 1e-12 * scale) return false;
  }
  return true;
}

constexpr double kRelSlack = 1e-12;

}  // namespace

CMatrix restrict(const HoppingOperator& op, const LatticeBall& ball) { return CMatrix(restrict_sparse(op, ball)); }

CSparse restrict_sparse(const HoppingOperator& op, const LatticeBall& ball) {
  const auto trips = restriction_triplets(op, ball);
  const Index n = static_cast<Index>(ball.size()) * op.fiber_dim();
  CSparse out(n, n);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

HoppingOperator commutator_with_position(const HoppingOperator& op, int axis) {
  if (axis < 0 || axis >= op.dimension()) throw std::invalid_argument("commutator_with_position: axis out of range");
  HoppingOperator out(op.dimension(), op.fiber_dim());
  std::vector<std::size_t> source;
  std::vector<double> sups;
  for (std::size_t h = 0; h < op.hoppings().size(); ++h) {
    const auto& hop = op.hoppings()[h];
    const int w = hop.r[static_cast<std::size_t>(axis)];
    if (w == 0) continue;
    out.add_hopping(hop.r, double(w) * hop.coefficient);
    source.push_back(h);
    sups.push_back(std::abs(double(w)) * op.sup_norm(h));
  }
  if (!op.translation_invariant()) {
    out.set_site_function(
        [op, source, axis](std::size_t h, std::span<const int> n) {
          const std::size_t src = source[h];
          return CMatrix(double(op.hoppings()[src].r[static_cast<std::size_t>(axis)]) * op.coefficient(src, n));
        },
        std::move(sups));
  }
  return out;
}

HoppingOperator adjoint(const HoppingOperator& op) {
  HoppingOperator out(op.dimension(), op.fiber_dim());
  std::vector<double> sups;
  for (std::size_t h = 0; h < op.hoppings().size(); ++h) {
    std::vector<int> r = op.hoppings()[h].r;
    for (auto& v : r) v = -v;
    out.add_hopping(std::move(r), op.hoppings()[h].coefficient.adjoint());
    sups.push_back(op.sup_norm(h));
  }
  if (!op.translation_invariant()) {
    out.set_site_function(
        [op](std::size_t h, std::span<const int> n) {
          const auto& r = op.hoppings()[h].r;
          std::vector<int> shifted(n.begin(), n.end());
          for (std::size_t j = 0; j < shifted.size(); ++j) shifted[j] += r[j];
          return CMatrix(op.coefficient(h, shifted).adjoint());
        },
        std::move(sups));
  }
  return out;
}

CMatrix symbol(const HoppingOperator& op, std::span<const double> k) {
  require_translation_invariant(op, "symbol");
  if (static_cast<int>(k.size()) != op.dimension()) throw std::invalid_argument("symbol: k has wrong dimension");
  CMatrix out = CMatrix::Zero(op.fiber_dim(), op.fiber_dim());
  for (const auto& h : op.hoppings()) {
    double phase = 0.0;
    for (std::size_t j = 0; j < k.size(); ++j) phase += k[j] * double(h.r[j]);
    out += std::polar(1.0, -phase) * h.coefficient;
  }
  return out;
}

CMatrix symbol_derivative(const HoppingOperator& op, std::span<const double> k, int axis) {
  require_translation_invariant(op, "symbol_derivative");
  if (axis < 0 || axis >= op.dimension()) throw std::invalid_argument("symbol_derivative: axis out of range");
  CMatrix out = CMatrix::Zero(op.fiber_dim(), op.fiber_dim());
  for (const auto& h : op.hoppings()) {
    double phase = 0.0;
    for (std::size_t j = 0; j < k.size(); ++j) phase += k[j] * double(h.r[j]);
    out += cplx(0.0, -double(h.r[static_cast<std::size_t>(axis)])) * std::polar(1.0, -phase) * h.coefficient;
  }
  return out;
}

std::string to_string(BoundMode mode) {
  switch (mode) {
    case BoundMode::Exact: return "exact";
    case BoundMode::UpperBound: return "upper-bound";
    default: return "estimate";
  }
}

CommutatorNorm dirac_commutator_norm(const HoppingOperator& op, const CliffordRep& rep, CommutatorMode mode) {
  if (op.dimension() != rep.d) throw std::invalid_argument("dirac_commutator_norm: dimension mismatch");
  if (op.fiber_dim() % rep.nu != 0)
    throw std::invalid_argument("dirac_commutator_norm: fiber dimension must be a multiple of nu");
  if (!commutes_with_clifford(op, rep))
    throw std::invalid_argument("dirac_commutator_norm: coefficients do not commute with the Clifford action");

  double upper = 0.0;
  for (std::size_t h = 0; h < op.hoppings().size(); ++h) upper += l2_norm(op.hoppings()[h].r) * op.sup_norm(h);

  if (mode == CommutatorMode::UpperBound) return {upper, BoundMode::UpperBound, upper};
  require_translation_invariant(op, "dirac_commutator_norm (exact-symbol)");
  if (op.hoppings().empty()) return {0.0, BoundMode::Exact, 0.0};

  const Index m = op.fiber_dim() / rep.nu;
  std::vector<CMatrix> gt;
  for (const auto& g : rep.gammas) gt.push_back(kron(g, CMatrix::Identity(m, m)));
  // Commutator symbol Σ_r (Σ_j r_j Γ̃_j) A_r e^{-ik·r}; precompute the k-independent factors.
  std::vector<CMatrix> weighted;
  double lip = 0.0;
  for (const auto& h : op.hoppings()) {
    CMatrix g = CMatrix::Zero(op.fiber_dim(), op.fiber_dim());
    for (std::size_t j = 0; j < gt.size(); ++j) g += double(h.r[j]) * gt[j];
    weighted.push_back(g * h.coefficient);
    lip += operator_norm(weighted.back()) * l1_norm(h.r);
  }
  const auto& hops = op.hoppings();
  const auto ext = zone_extrema(op.dimension(), lip, [&](const std::vector<double>& k) {
    CMatrix s = CMatrix::Zero(op.fiber_dim(), op.fiber_dim());
    for (std::size_t i = 0; i < hops.size(); ++i) {
      double phase = 0.0;
      for (std::size_t j = 0; j < k.size(); ++j) phase += k[j] * double(hops[i].r[j]);
      s += std::polar(1.0, -phase) * weighted[i];
    }
    const double top = singular_range(s).hi;
    return SingularRange{top, top};
  });
  return {ext.hi, BoundMode::Exact, std::min(upper, ext.hi + ext.slack)};
}

NormGap norm_and_gap(const HoppingOperator& op, const NormGapMode& mode) {
  if (const auto* t = std::get_if<TruncationMode>(&mode)) return truncation_norm_gap(op, t->rho_probe);
  require_translation_invariant(op, "norm_and_gap (symbol)");
  NormGap out;
  if (op.hoppings().empty()) return out;
  double lip = 0.0;
  for (const auto& h : op.hoppings()) lip += operator_norm(h.coefficient) * l1_norm(h.r);
  const auto ext = zone_extrema(op.dimension(), lip, [&](const std::vector<double>& k) {
    return singular_range(symbol(op, k));
  });
  out.norm_A = ext.hi;
  out.gap_g = ext.lo;
  out.norm_upper = ext.hi + ext.slack;
  out.gap_lower = std::max(0.0, ext.lo - ext.slack);
  out.invertible = out.gap_g > 1e-10 * out.norm_A;
  if (!out.invertible) out.gap_g = 0.0;
  return out;
}

OperatorBounds operator_bounds(const HoppingOperator& op, const CliffordRep& rep, const BoundsOptions& options) {
  OperatorBounds b;
  const NormGapMode nm = options.norm_mode.value_or(
      op.translation_invariant() ? NormGapMode{SymbolMode{}} : NormGapMode{TruncationMode{}});
  b.norm_gap = norm_and_gap(op, nm);
  const CommutatorMode cm = options.comm_mode.value_or(
      op.translation_invariant() ? CommutatorMode::ExactSymbol : CommutatorMode::UpperBound);
  b.comm = dirac_commutator_norm(op, rep, cm);
  return b;
}

double kappa_max(const OperatorBounds& b) {
  if (!b.norm_gap.invertible) return 0.0;
  if (b.comm.value == 0.0) return std::numeric_limits<double>::infinity();
  const double g = b.norm_gap.gap_g;
  return g * g * g / (18.0 * b.norm_gap.norm_A * b.comm.value);
}

ConditionReport condition_report(const OperatorBounds& b, double kappa, double rho) {
  if (!(kappa > 0.0)) throw std::invalid_argument("condition_report: kappa must be positive");
  if (!(rho > 0.0)) throw std::invalid_argument("condition_report: rho must be positive");
  ConditionReport r;
  r.norm_A = b.norm_gap.norm_A;
  r.gap_g = b.norm_gap.gap_g;
  r.comm_norm = b.comm.value;
  r.kappa = kappa;
  r.rho = rho;
  r.invertible = b.norm_gap.invertible;
  r.gap_estimate = b.norm_gap.estimate;
  r.bound_mode = b.norm_gap.estimate ? BoundMode::Estimate : b.comm.mode;
  r.kappa_max = kappa_max(b);
  r.rho_min = 2.0 * r.gap_g / kappa;
  if (r.invertible) {
    const double g = r.gap_g;
    r.cond1_ok = r.comm_norm <= g * g * g / (18.0 * r.norm_A * kappa) * (1.0 + kRelSlack);
    r.cond2_ok = r.rho_min <= rho * (1.0 + kRelSlack);
  }
  return r;
}

ConditionReport condition_report(const HoppingOperator& op, const CliffordRep& rep, double kappa, double rho) {
  const OperatorBounds b = operator_bounds(op, rep);
  if (!b.norm_gap.invertible) throw NotInvertibleError("condition_report: operator is not invertible (gap 0)");
  return condition_report(b, kappa, rho);
}

}  // namespace specloc
