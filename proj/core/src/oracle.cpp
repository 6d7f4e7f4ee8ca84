#include "specloc/oracle.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

#include "specloc/lattice.hpp"

namespace specloc {

BlochSymbol::BlochSymbol(HoppingOperator op) : op_(std::move(op)) {
  if (!op_.translation_invariant()) throw std::invalid_argument("BlochSymbol: operator is site-dependent");
}

BlochSymbol BlochSymbol::conjugate() const {
  // conj(A)_r = conj(A_r), whose symbol is conj(A(−k)).
  HoppingOperator c(op_.dimension(), op_.fiber_dim());
  for (const auto& h : op_.hoppings()) c.add_hopping(h.r, h.coefficient.conjugate());
  return BlochSymbol(std::move(c));
}

namespace {

struct WindingPass {
  double total = 0.0;
  double max_step = 0.0;
  double min_abs = std::numeric_limits<double>::infinity();
};

WindingPass winding_pass(const BlochSymbol& symbol, int grid) {
  WindingPass out;
  const double h = 2.0 * std::numbers::pi / grid;
  std::array<double, 1> k{0.0};
  cplx prev = symbol(k).determinant();
  const cplx first = prev;
  out.min_abs = std::abs(prev);
  for (int i = 1; i <= grid; ++i) {
    k[0] = h * i;
    const cplx cur = i == grid ? first : symbol(k).determinant();
    out.min_abs = std::min(out.min_abs, std::abs(cur));
    const double step = std::arg(cur / prev);
    out.max_step = std::max(out.max_step, std::abs(step));
    out.total += step;
    prev = cur;
  }
  return out;
}

double chern_pass(const BlochSymbol& symbol, int grid) {
  const double h = 2.0 * std::numbers::pi / grid;
  double acc = 0.0;
  std::array<double, 3> k{};
  for (int a = 0; a < grid; ++a)
    for (int b = 0; b < grid; ++b)
      for (int c = 0; c < grid; ++c) {
        k = {h * a, h * b, h * c};
        const CMatrix A = symbol(k);
        Eigen::PartialPivLU<CMatrix> lu(A);
        const CMatrix B1 = lu.solve(symbol.derivative(k, 0));
        const CMatrix B2 = lu.solve(symbol.derivative(k, 1));
        const CMatrix B3 = lu.solve(symbol.derivative(k, 2));
        // Σ_σ sgn σ Tr(B_σ1 B_σ2 B_σ3) = 3 [Tr(B1B2B3) − Tr(B1B3B2)] by cyclicity.
        const cplx t = 3.0 * ((B1 * B2 * B3).trace() - (B1 * B3 * B2).trace());
        acc += t.real();
      }
  const double volume_avg = acc / (double(grid) * grid * grid);
  const double integral = volume_avg * std::pow(2.0 * std::numbers::pi, 3);
  return -integral / (24.0 * std::numbers::pi * std::numbers::pi);
}

}  // namespace

WindingResult winding_number_d1(const BlochSymbol& symbol, int grid) {
  if (symbol.dimension() != 1) throw std::invalid_argument("winding_number_d1: symbol must be one-dimensional");
  if (grid < 4) throw std::invalid_argument("winding_number_d1: grid must be >= 4");
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int g = grid; g <= (1 << 20); g *= 2) {
    const WindingPass p = winding_pass(symbol, g);
    if (p.min_abs < 1e-12) throw NotInvertibleError("winding_number_d1: det A(k) vanishes on the grid");
    const double w = p.total / (2.0 * std::numbers::pi);
    if (p.max_step < std::numbers::pi / 4 && std::lround(w) == std::lround(prev))
      return {std::lround(w), g, p.min_abs};
    prev = w;
  }
  throw ConvergenceError("winding_number_d1: grid refinement did not converge");
}

ChernResult odd_chern_d3(const BlochSymbol& symbol, int grid, int max_grid) {
  if (symbol.dimension() != 3) throw std::invalid_argument("odd_chern_d3: symbol must be three-dimensional");
  if (grid < 2 || max_grid < grid) throw std::invalid_argument("odd_chern_d3: invalid grid range");
  ChernResult out;
  for (int g = grid; g <= max_grid; g *= 2) {
    const double v = chern_pass(symbol, g);
    out.history.emplace_back(g, v);
    out.raw = v;
    out.grid = g;
    out.value = std::lround(v);
    out.residual = std::abs(v - double(out.value));
    if (out.history.size() >= 2) {
      const double change = std::abs(v - out.history[out.history.size() - 2].second);
      if (change < 1e-3 && out.residual < 1e-3) return out;
    }
  }
  if (out.residual > 0.1)
    throw ConvergenceError("odd_chern_d3: not converged, residual " + std::to_string(out.residual) + "; refine grid");
  return out;
}

HoppingOperator clifford_fiber_reduction(const HoppingOperator& op, int nu, double tol) {
  if (nu < 1 || op.fiber_dim() % nu != 0)
    throw std::invalid_argument("clifford_fiber_reduction: fiber dimension must be a multiple of nu");
  if (!op.translation_invariant()) throw std::invalid_argument("clifford_fiber_reduction: operator is site-dependent");
  const Index m = op.fiber_dim() / nu;
  HoppingOperator out(op.dimension(), static_cast<int>(m));
  for (const auto& h : op.hoppings()) {
    const CMatrix a = h.coefficient.topLeftCorner(m, m);
    const CMatrix expected = kron(CMatrix(CMatrix::Identity(nu, nu)), a);
    if ((h.coefficient - expected).cwiseAbs().maxCoeff() > tol * std::max(1.0, h.coefficient.cwiseAbs().maxCoeff()))
      throw std::invalid_argument("clifford_fiber_reduction: coefficient is not of the form 1_nu (x) a");
    out.add_hopping(h.r, a);
  }
  return out;
}

std::vector<std::pair<double, double>> shift_localizer_spectrum(int n, double kappa, double lambda, int k_min,
                                                                int k_max) {
  if (!(kappa > 0.0)) throw std::invalid_argument("shift_localizer_spectrum: kappa must be positive");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("shift_localizer_spectrum: lambda outside [0, 1]");
  std::vector<std::pair<double, double>> out;
  for (int k = k_min; k <= k_max; ++k) {
    // Site k of the upper grading couples to site k + n of the lower one.
    const double c = -kappa * n / 2.0;
    const double r = std::hypot(kappa * n / 2.0 + kappa * k, lambda);
    out.emplace_back(c - r, c + r);
  }
  return out;
}

std::vector<double> shift_crossing_locations(int n, double kappa) {
  std::vector<double> out;
  const int an = std::abs(n);
  for (int k = 0; k <= an; ++k) {
    const double q = double(an) * an - double(an - 2 * k) * (an - 2 * k);
    const double lam = kappa / 2.0 * std::sqrt(q);
    if (lam <= 1.0) out.push_back(lam);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FlowResult spectral_flow(const HermitianPath& path, int steps, double tol, double resolution) {
  if (steps < 1) throw std::invalid_argument("spectral_flow: steps must be >= 1");
  std::map<double, Inertia> cache;
  auto sig_at = [&](double lam) -> const Inertia& {
    auto it = cache.find(lam);
    if (it == cache.end()) it = cache.emplace(lam, inertia(path(lam), tol)).first;
    return it->second;
  };

  FlowResult out;
  const Inertia& start = sig_at(0.0);
  const Inertia& end = sig_at(1.0);
  if (end.n_zero > 0) throw NotInvertibleError("spectral_flow: end point is not invertible");
  out.singular_start = start.n_zero > 0;
  out.sig_start = start.signature();
  out.sig_end = end.signature();
  const Index diff = out.sig_end - out.sig_start;
  if (diff % 2 != 0) throw OddSignatureError("spectral_flow: odd signature difference " + std::to_string(diff));
  out.flow = static_cast<long>(diff / 2);

  // Recursive bisection of intervals whose signature changes.
  std::function<void(double, double)> locate = [&](double a, double b) {
    const Index sa = sig_at(a).signature(), sb = sig_at(b).signature();
    if (sa == sb) return;
    if (b - a <= resolution) {
      out.crossings.push_back({0.5 * (a + b), a, b, static_cast<long>(sb - sa)});
      return;
    }
    const double m = 0.5 * (a + b);
    locate(a, m);
    locate(m, b);
  };
  for (int i = 0; i < steps; ++i) locate(double(i) / steps, double(i + 1) / steps);
  return out;
}

double eta_partial_sum(std::span<const double> eigs, double s) {
  double acc = 0.0;
  for (double l : eigs) {
    if (l == 0.0) throw NotInvertibleError("eta_partial_sum: zero eigenvalue");
    const double term = s == 0.0 ? 1.0 : std::pow(std::abs(l), -s);
    acc += l > 0 ? term : -term;
  }
  return acc;
}

long compact_perturbation_index(const HoppingOperator& op, double window, double probe) {
  if (!(window > 0.0) || !(probe > 0.0)) throw std::invalid_argument("compact_perturbation_index: bad window");
  const LatticeBall shell = build_ball(op.dimension(), window + probe);
  const Index N = op.fiber_dim();
  const bool has_diagonal = std::any_of(op.hoppings().begin(), op.hoppings().end(), [](const Hopping& h) {
    return std::all_of(h.r.begin(), h.r.end(), [](int v) { return v == 0; });
  });
  if (!has_diagonal) throw std::invalid_argument("compact_perturbation_index: operator has no on-site term");
  for (std::size_t s = 0; s < shell.size(); ++s) {
    if (shell.site_norm(s) <= window) continue;
    for (std::size_t h = 0; h < op.hoppings().size(); ++h) {
      const bool diagonal = std::all_of(op.hoppings()[h].r.begin(), op.hoppings()[h].r.end(), [](int v) { return v == 0; });
      const CMatrix expected = diagonal ? CMatrix(CMatrix::Identity(N, N)) : CMatrix(CMatrix::Zero(N, N));
      if ((op.coefficient(h, shell.site(s)) - expected).cwiseAbs().maxCoeff() > 0.0)
        throw std::invalid_argument("compact_perturbation_index: operator is not the identity outside the window");
    }
  }
  return 0;
}

}  // namespace specloc
