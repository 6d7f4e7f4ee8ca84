#include "specloc/models.hpp"

#include <array>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

namespace specloc {

namespace {

const cplx I(0.0, 1.0);

CMatrix scalar(cplx v) { return CMatrix::Constant(1, 1, v); }

std::array<CMatrix, 3> pauli() {
  CMatrix s1(2, 2), s2(2, 2), s3(2, 2);
  s1 << 0, 1, 1, 0;
  s2 << 0, -I, I, 0;
  s3 << 1, 0, 0, -1;
  return {s1, s2, s3};
}

RMatrix i_sigma2() {
  RMatrix s(2, 2);
  s << 0, 1, -1, 0;
  return s;
}

int window_of(double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("defect model: rho must be positive");
  return static_cast<int>(std::floor(2.0 * rho));
}

// Deterministic per-(seed, site, hop) uniform factor in [1 − w, 1 + w].
double disorder_factor(std::uint64_t seed, std::span<const int> site, std::size_t hop, double w) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                                   static_cast<std::uint32_t>(hop)};
  for (int x : site) {
    const auto v = static_cast<std::uint64_t>(static_cast<std::int64_t>(x));
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  std::mt19937_64 gen(seq);
  std::uniform_real_distribution<double> dist(1.0 - w, 1.0 + w);
  return dist(gen);
}

double param(const std::map<std::string, double>& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

void check_params(const std::string& model, const std::map<std::string, double>& p,
                  std::initializer_list<const char*> allowed) {
  std::set<std::string> ok;
  for (const char* a : allowed) ok.insert(a);
  for (const auto& [k, v] : p) {
    if (!ok.count(k)) throw std::invalid_argument("model '" + model + "' has no parameter '" + k + "'");
    if (!std::isfinite(v)) throw std::invalid_argument("model '" + model + "': parameter '" + k + "' is not finite");
  }
}

int integer_param(const std::map<std::string, double>& p, const std::string& key, int fallback) {
  const double v = param(p, key, fallback);
  if (v != std::round(v)) throw std::invalid_argument("parameter '" + key + "' must be an integer");
  return static_cast<int>(v);
}

}  // namespace

HoppingOperator shift_model(int n) {
  HoppingOperator op(1, 1);
  op.add_hopping({-n}, scalar(1.0));
  return op;
}

HoppingOperator defect_shift_model(double rho) {
  const int W = window_of(rho);
  HoppingOperator op(1, 1);
  op.add_hopping({-1}, scalar(1.0));
  op.add_hopping({0}, scalar(1.0));
  op.set_site_function(
      [W](std::size_t h, std::span<const int> n) {
        const int x = n[0];
        if (h == 0) return scalar(x >= -W && x <= W - 1 ? 1.0 : 0.0);
        return scalar(x < -W || x > W ? 1.0 : 0.0);
      },
      {1.0, 1.0});
  return op;
}

HoppingOperator cyclic_defect_shift_model(double rho) {
  const int W = window_of(rho);
  HoppingOperator op(1, 1);
  op.add_hopping({-1}, scalar(1.0));
  op.add_hopping({0}, scalar(1.0));
  op.add_hopping({2 * W}, scalar(1.0));
  op.set_site_function(
      [W](std::size_t h, std::span<const int> n) {
        const int x = n[0];
        if (h == 0) return scalar(x >= -W && x <= W - 1 ? 1.0 : 0.0);
        if (h == 1) return scalar(x < -W || x > W ? 1.0 : 0.0);
        return scalar(x == W ? 1.0 : 0.0);
      },
      {1.0, 1.0, 1.0});
  return op;
}

HoppingOperator with_uniform_disorder(const HoppingOperator& op, double w, std::uint64_t seed) {
  if (w < 0.0 || w >= 1.0) throw std::invalid_argument("disorder strength must lie in [0, 1)");
  if (!op.translation_invariant()) throw std::invalid_argument("disorder: operator is already site-dependent");
  if (w == 0.0) return op;
  HoppingOperator out = op;
  std::vector<CMatrix> base;
  std::vector<double> sup;
  for (const auto& h : op.hoppings()) {
    base.push_back(h.coefficient);
    sup.push_back(operator_norm(h.coefficient) * (1.0 + w));
  }
  out.set_site_function(
      [base, seed, w](std::size_t h, std::span<const int> n) {
        return CMatrix(base[h] * disorder_factor(seed, n, h, w));
      },
      std::move(sup));
  return out;
}

HoppingOperator ssh_model(double m, double t, double disorder_w, std::uint64_t seed) {
  if (disorder_w < 0.0 || disorder_w >= 1.0) throw std::invalid_argument("ssh_model: disorder must lie in [0, 1)");
  HoppingOperator op(1, 1);
  op.add_hopping({0}, scalar(m));
  op.add_hopping({1}, scalar(t));
  return with_uniform_disorder(op, disorder_w, seed);
}

HoppingOperator chiral_3d_model(double m) {
  const auto s = pauli();
  const CMatrix id2 = CMatrix::Identity(2, 2);
  HoppingOperator op(3, 4);
  op.add_hopping({0, 0, 0}, kron(id2, CMatrix(I * m * id2)));
  for (int j = 0; j < 3; ++j) {
    std::vector<int> plus(3, 0), minus(3, 0);
    plus[static_cast<std::size_t>(j)] = 1;
    minus[static_cast<std::size_t>(j)] = -1;
    // sin k = (e^{ik} − e^{−ik})/2i and cos k = (e^{ik} + e^{−ik})/2 against e^{−ik·r}.
    op.add_hopping(plus, kron(id2, CMatrix(0.5 * I * s[static_cast<std::size_t>(j)] + 0.5 * I * id2)));
    op.add_hopping(minus, kron(id2, CMatrix(-0.5 * I * s[static_cast<std::size_t>(j)] + 0.5 * I * id2)));
  }
  return op;
}

SymmetryOperator chiral_3d_symmetry() {
  return {kron(RMatrix(RMatrix::Identity(2, 2)), i_sigma2()), -1, -1};
}

HoppingOperator diii_chain_model(double m, double t, double coupling) {
  const auto s = pauli();
  CMatrix up(2, 2), down(2, 2);
  up << 1, 0, 0, 0;
  down << 0, 0, 0, 1;
  HoppingOperator op(1, 2);
  op.add_hopping({0}, CMatrix(m * CMatrix::Identity(2, 2)));
  op.add_hopping({1}, CMatrix(t * up + coupling * s[0]));
  op.add_hopping({-1}, CMatrix(t * down - coupling * s[0]));
  return op;
}

SymmetryOperator diii_symmetry() { return {i_sigma2(), -1, -1}; }

std::vector<std::string> model_names() {
  return {"shift", "defect-shift", "cyclic-defect-shift", "ssh", "chiral3d", "diii", "identity"};
}

Model make_model(const std::string& name, const std::map<std::string, double>& p) {
  Model model{name, p, HoppingOperator(1, 1), std::nullopt};
  if (name == "shift") {
    check_params(name, p, {"n"});
    model.op = shift_model(integer_param(p, "n", 1));
  } else if (name == "defect-shift") {
    check_params(name, p, {"rho"});
    model.op = defect_shift_model(param(p, "rho", 20.0));
  } else if (name == "cyclic-defect-shift") {
    check_params(name, p, {"rho"});
    model.op = cyclic_defect_shift_model(param(p, "rho", 20.0));
  } else if (name == "ssh") {
    check_params(name, p, {"m", "t", "w", "seed"});
    const double seed = param(p, "seed", 0.0);
    if (seed < 0 || seed != std::round(seed)) throw std::invalid_argument("ssh: seed must be a non-negative integer");
    model.op = ssh_model(param(p, "m", 0.5), param(p, "t", 1.0), param(p, "w", 0.0), static_cast<std::uint64_t>(seed));
  } else if (name == "chiral3d") {
    check_params(name, p, {"m"});
    model.op = chiral_3d_model(param(p, "m", 2.0));
    model.symmetry = chiral_3d_symmetry();
  } else if (name == "diii") {
    check_params(name, p, {"m", "t", "c"});
    model.op = diii_chain_model(param(p, "m", 0.5), param(p, "t", 1.0), param(p, "c", 0.25));
    model.symmetry = diii_symmetry();
  } else if (name == "identity") {
    check_params(name, p, {"d", "N"});
    const int d = integer_param(p, "d", 1);
    const int N = integer_param(p, "N", 1);
    HoppingOperator op(d, N);
    op.add_hopping(std::vector<int>(static_cast<std::size_t>(d), 0), CMatrix::Identity(N, N));
    model.op = std::move(op);
  } else {
    throw std::invalid_argument("unknown model '" + name + "'");
  }
  return model;
}

}  // namespace specloc
