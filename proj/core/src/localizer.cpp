#include "specloc/localizer.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace specloc {

namespace {

// f with f′(x) = max{0, 1 − |x|}, f(−∞) = 0.
double haagerup_f(double x) {
  if (x <= -1.0) return 0.0;
  if (x <= 0.0) return 0.5 * (1.0 + x) * (1.0 + x);
  if (x <= 1.0) return 1.0 - 0.5 * (1.0 - x) * (1.0 - x);
  return 1.0;
}

double haagerup_df(double x) { return std::max(0.0, 1.0 - std::abs(x)); }

using Triplet = Eigen::Triplet<cplx, Index>;

void check_compatible(const HoppingOperator& op, const CliffordRep& rep, const LatticeBall& ball) {
  if (op.dimension() != rep.d || ball.dimension() != rep.d)
    throw std::invalid_argument("localizer: operator, Clifford and ball dimensions must agree");
  if (op.fiber_dim() % rep.nu != 0)
    throw std::invalid_argument("localizer: fiber dimension must be a multiple of nu");
}

// [[c(n)·D_n, G A G], [G A* G, −c(n)·D_n]] where c and G are per-site scalars.
template <typename DiagScale, typename OffScale>
LocalizerMatrix assemble(const HoppingOperator& op, const CliffordRep& rep, const LatticeBall& ball,
                         DiagScale&& c, OffScale&& gfun, double off_scale = 1.0) {
  check_compatible(op, rep, ball);
  const Index N = op.fiber_dim();
  const Index m = N / rep.nu;
  const Index S = static_cast<Index>(ball.size());
  const Index half = N * S;
  const auto du = static_cast<std::size_t>(op.dimension());

  std::vector<double> gval(ball.size());
  for (std::size_t s = 0; s < ball.size(); ++s) gval[s] = gfun(s);

  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(2 * N * S * (rep.nu + 2 * static_cast<Index>(op.hoppings().size()))));
  for (std::size_t s = 0; s < ball.size(); ++s) {
    const double cs = c(s);
    if (cs == 0.0) continue;
    const CMatrix Dn = dirac_block(rep, ball.site(s));
    const Index base = static_cast<Index>(s) * N;
    for (Index a = 0; a < rep.nu; ++a)
      for (Index b = 0; b < rep.nu; ++b) {
        const cplx v = cs * Dn(a, b);
        if (v == cplx(0.0)) continue;
        for (Index mu = 0; mu < m; ++mu) {
          trips.emplace_back(base + a * m + mu, base + b * m + mu, v);
          trips.emplace_back(half + base + a * m + mu, half + base + b * m + mu, -v);
        }
      }
  }
  std::vector<int> target(du);
  for (std::size_t s = 0; s < ball.size(); ++s) {
    const auto x = ball.site(s);
    for (std::size_t h = 0; h < op.hoppings().size(); ++h) {
      const auto& r = op.hoppings()[h].r;
      for (std::size_t j = 0; j < du; ++j) target[j] = x[j] - r[j];
      const auto t = ball.index_of(target);
      if (!t) continue;
      const double w = off_scale * gval[s] * gval[*t];
      if (w == 0.0) continue;
      const CMatrix A = op.coefficient(h, x);
      const Index row = static_cast<Index>(s) * N, col = static_cast<Index>(*t) * N;
      for (Index a = 0; a < N; ++a)
        for (Index b = 0; b < N; ++b) {
          const cplx v = w * A(a, b);
          if (v == cplx(0.0)) continue;
          trips.emplace_back(row + a, half + col + b, v);
          trips.emplace_back(half + col + b, row + a, std::conj(v));
        }
    }
  }
  LocalizerMatrix L;
  L.matrix = CSparse(2 * half, 2 * half);
  L.matrix.setFromTriplets(trips.begin(), trips.end());
  L.matrix.makeCompressed();
  L.d = op.dimension();
  L.fiber_dim = static_cast<int>(N);
  L.site_count = ball.size();
  L.rho = ball.radius();
  L.site_parity.resize(ball.size());
  for (std::size_t s = 0; s < ball.size(); ++s) {
    int p = 0;
    for (int v : ball.site(s)) p += std::abs(v);
    L.site_parity[s] = p % 2;
  }
  return L;
}

}  // namespace

BlockPartition LocalizerMatrix::site_partition() const {
  BlockPartition part;
  const Index N = fiber_dim;
  const Index half = N * static_cast<Index>(site_count);
  part.blocks.resize(site_count);
  part.rank = site_parity;
  for (std::size_t s = 0; s < site_count; ++s) {
    auto& b = part.blocks[s];
    for (Index a = 0; a < N; ++a) b.push_back(static_cast<Index>(s) * N + a);
    for (Index a = 0; a < N; ++a) b.push_back(half + static_cast<Index>(s) * N + a);
  }
  return part;
}

double TaperingPair::G(double x) const {
  const double y = x / rho;
  return haagerup_f(4.0 * y + 3.0) - haagerup_f(4.0 * y - 3.0);
}

double TaperingPair::dG(double x) const {
  const double y = x / rho;
  return 4.0 * (haagerup_df(4.0 * y + 3.0) - haagerup_df(4.0 * y - 3.0)) / rho;
}

double TaperingPair::taper(double x) const {
  const double g = G(x);
  const double g2 = g * g;
  return std::sqrt(std::max(0.0, 1.0 - g2 * g2));
}

double TaperingPair::F(double x) const {
  const double sgn = x >= 0.0 ? 1.0 : -1.0;
  return 0.5 * (1.0 + sgn * taper(x));
}

TaperingPair haagerup_profile(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("haagerup_profile: rho must be positive");
  return TaperingPair{rho};
}

double derivative_transform_l1(const TaperingPair& pair) {
  const double rho = pair.rho;
  // G′ is piecewise linear with breakpoints at ±ρ, ±3ρ/4, ±ρ/2.
  const std::array<double, 7> knots{-rho, -0.75 * rho, -0.5 * rho, 0.0, 0.5 * rho, 0.75 * rho, rho};
  constexpr std::array<double, 8> gx{-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                     -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                     0.7966664774136267,  0.9602898564975363};
  constexpr std::array<double, 8> gw{0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                     0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                     0.2223810344533745, 0.1012285362903763};
  std::vector<double> xs, ws;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double a = knots[i], b = knots[i + 1];
    if (i == 2 || i == 3) continue;  // G′ vanishes on [−ρ/2, ρ/2]
    // Split each linear piece further so the oscillatory factor stays resolved.
    constexpr int sub = 16;
    for (int k = 0; k < sub; ++k) {
      const double lo = a + (b - a) * k / sub, hi = a + (b - a) * (k + 1) / sub;
      for (std::size_t q = 0; q < gx.size(); ++q) {
        xs.push_back(0.5 * (lo + hi) + 0.5 * (hi - lo) * gx[q]);
        ws.push_back(0.5 * (hi - lo) * gw[q]);
      }
    }
  }
  std::vector<double> gp(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) gp[i] = pair.dG(xs[i]);

  auto transform_abs = [&](double p) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) acc += ws[i] * gp[i] * std::polar(1.0, -p * xs[i]);
    return std::abs(acc) / (2.0 * std::numbers::pi);
  };
  // |Ĝ′(p)| is even in p. Trapezoid on [0, P], then the tail bound
  // |Ĝ′(p)| ≤ TV(G″)/(2π p²) with TV(G″) = 128/ρ².
  const double P = 400.0 / rho;
  const double dp = 0.02 / rho;
  const auto steps = static_cast<long>(std::llround(P / dp));
  double integral = 0.5 * transform_abs(0.0);
  for (long i = 1; i < steps; ++i) integral += transform_abs(dp * double(i));
  integral += 0.5 * transform_abs(P);
  integral *= dp;
  const double tail = 128.0 / (rho * rho) / (2.0 * std::numbers::pi) / P;
  return 2.0 * (integral + tail);
}

LocalizerMatrix build_localizer(const HoppingOperator& op, const CliffordRep& rep, const LatticeBall& ball,
                                double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("build_localizer: kappa must be positive");
  auto L = assemble(op, rep, ball, [&](std::size_t) { return kappa; }, [](std::size_t) { return 1.0; });
  L.kind = LocalizerKind::Linear;
  L.kappa = kappa;
  L.lambda = 1.0;
  return L;
}

LocalizerMatrix build_tapered_localizer(const HoppingOperator& op, const CliffordRep& rep, const LatticeBall& ball,
                                        const TaperingPair& pair) {
  // 2F(D_n) − 1 = s(|n|)·D_n/|n| on each site block; D_0 = 0.
  auto L = assemble(
      op, rep, ball,
      [&](std::size_t s) {
        const double r = ball.site_norm(s);
        return r == 0.0 ? 0.0 : pair.taper(r) / r;
      },
      [&](std::size_t s) { return pair.G(ball.site_norm(s)); });
  L.kind = LocalizerKind::Tapered;
  L.kappa = 1.0 / pair.rho;
  L.rho = pair.rho;
  L.lambda = 0.0;
  return L;
}

LocalizerMatrix homotopy_localizer(const HoppingOperator& op, const CliffordRep& rep, const LatticeBall& ball,
                                   double kappa, double lambda) {
  if (!(kappa > 0.0)) throw std::invalid_argument("homotopy_localizer: kappa must be positive");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("homotopy_localizer: lambda must lie in [0, 1]");
  const TaperingPair pair = haagerup_profile(ball.radius());
  const double kr = kappa * ball.radius();
  auto L = assemble(
      op, rep, ball,
      [&](std::size_t s) {
        const double r = ball.site_norm(s);
        const double tapered = r == 0.0 ? 0.0 : pair.taper(r) / r;
        return kappa * lambda + kr * (1.0 - lambda) * tapered;
      },
      [&](std::size_t s) { return lambda + (1.0 - lambda) * pair.G(ball.site_norm(s)); });
  L.kind = LocalizerKind::Homotopy;
  L.kappa = kappa;
  L.lambda = lambda;
  return L;
}

LocalizerMatrix flow_localizer(const HoppingOperator& op, const CliffordRep& rep, const LatticeBall& ball,
                               double kappa, double lambda) {
  if (!(kappa > 0.0)) throw std::invalid_argument("flow_localizer: kappa must be positive");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("flow_localizer: lambda must lie in [0, 1]");
  auto L = assemble(op, rep, ball, [&](std::size_t) { return kappa; }, [](std::size_t) { return 1.0; }, lambda);
  L.kind = LocalizerKind::Flow;
  L.kappa = kappa;
  L.lambda = lambda;
  return L;
}

GapCheck gap_check(const LocalizerMatrix& L, double g) {
  GapCheck out;
  out.min_abs_eig = min_abs_eigenvalue(L.matrix);
  out.vacuous = !(g > 0.0);
  out.satisfies_bound = !out.vacuous && out.min_abs_eig >= g / std::numbers::sqrt2 - 1e-9;
  return out;
}

Inertia localizer_inertia(const LocalizerMatrix& L, double tol, Index dense_limit) {
  if (tol < 0) throw std::invalid_argument("localizer_inertia: tolerance must be non-negative");
  if (L.dimension() <= dense_limit) return inertia(L.dense(), tol);
  const BlockPartition part = L.site_partition();
  if (tol == 0.0) {
    Inertia in = structured_inertia(L.matrix, part, 0.0);
    in.tol = 0.0;
    return in;
  }
  Inertia in;
  in.tol = tol;
  in.n_plus = structured_inertia(L.matrix, part, tol).n_plus;
  in.n_minus = structured_inertia(L.matrix, part, -tol).n_minus;
  in.n_zero = L.dimension() - in.n_plus - in.n_minus;
  return in;
}

}  // namespace specloc
