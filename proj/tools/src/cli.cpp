#include "specloc_cli/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI/CLI.hpp>

#include "output.hpp"
#include "specloc/specloc.hpp"

namespace specloc::cli {

namespace {

using Clock = std::chrono::steady_clock;

double parse_number(const std::string& text, const std::string& what) {
  // Accepts plain numbers and a single ratio "a/b".
  const auto slash = text.find('/');
  if (slash != std::string::npos)
    return parse_number(text.substr(0, slash), what) / parse_number(text.substr(slash + 1), what);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": '" + text + "' is not a number");
  }
  if (used != text.size()) throw std::invalid_argument(what + ": '" + text + "' is not a number");
  return v;
}

std::optional<double> parse_auto(const std::string& text, const std::string& what) {
  if (text == "auto") return std::nullopt;
  const double v = parse_number(text, what);
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(what + " must be positive or 'auto'");
  return v;
}

std::pair<std::string, double> parse_assignment(const std::string& text, const std::string& what) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw std::invalid_argument(what + ": expected name=value, got '" + text + "'");
  return {text.substr(0, eq), parse_number(text.substr(eq + 1), what)};
}

// Runs f(0..n-1) on up to `jobs` threads; exceptions stay inside f.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& f) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) f(i);
    });
}

struct Options {
  std::string model;
  std::string model_file;
  std::vector<std::string> params;
  std::string kappa = "auto";
  std::string rho = "auto";
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  bool allow_unverified = false;
  std::string out;
  std::string format = "csv";
  long max_dim = 6000;

  // sweep
  std::vector<std::string> grid;
  int jobs = 1;
  // oracle
  int k_grid = 0;
  int k_max_grid = 64;
  // flow
  int steps = 20;
  double resolution = 1e-7;
  // eta
  std::vector<std::string> s_values{"0", "1", "2"};
};

struct Context {
  Options opt;
  ModelSource source;
  std::optional<double> kappa;
  std::optional<double> rho;
};

void add_common(CLI::App* app, Options& o) {
  app->add_option("--model", o.model, "Built-in model: " + [] {
    std::string s;
    for (const auto& n : model_names()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }());
  app->add_option("--model-file", o.model_file, "JSON model definition");
  app->add_option("--param", o.params, "Model parameter name=value (repeatable)");
  app->add_option("--kappa", o.kappa, "kappa or 'auto'")->capture_default_str();
  app->add_option("--rho", o.rho, "Localizer radius or 'auto'")->capture_default_str();
  app->add_option("--tol", o.tol, "Zero threshold for inertia counts");
  app->add_option("--seed", o.seed, "Disorder seed (ssh and model files)");
  app->add_flag("--allow-unverified", o.allow_unverified, "Exit 0 even if the sufficient conditions fail");
  app->add_option("--out", o.out, "Output file (default: stdout)");
  app->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app->add_option("--max-dim", o.max_dim, "Largest dimension for dense eigenvalue work")->capture_default_str();
}

Context make_context(const Options& opt, std::ostream& err) {
  Context ctx{opt, {}, std::nullopt, std::nullopt};
  if (opt.model.empty() == opt.model_file.empty())
    throw std::invalid_argument("exactly one of --model and --model-file is required");
  ctx.source.name = opt.model;
  if (!opt.model_file.empty()) ctx.source.file = opt.model_file;
  for (const auto& p : opt.params) {
    auto [k, v] = parse_assignment(p, "--param");
    ctx.source.params[k] = v;
  }
  if (opt.seed) {
    if (ctx.source.file || ctx.source.name == "ssh") ctx.source.params["seed"] = static_cast<double>(*opt.seed);
    else err << "warning: --seed ignored, model '" << ctx.source.name << "' has no randomness\n";
  }
  ctx.kappa = parse_auto(opt.kappa, "--kappa");
  ctx.rho = parse_auto(opt.rho, "--rho");
  if (opt.tol && !(*opt.tol >= 0.0)) throw std::invalid_argument("--tol must be non-negative");
  return ctx;
}

nlohmann::ordered_json model_header(const Context& ctx) {
  nlohmann::ordered_json m;
  if (ctx.source.file) m["file"] = *ctx.source.file;
  else m["name"] = ctx.source.name;
  nlohmann::ordered_json p = nlohmann::ordered_json::object();
  for (const auto& [k, v] : ctx.source.params) p[k] = to_json(Cell(v));
  m["params"] = p;
  nlohmann::ordered_json h;
  h["model"] = m;
  h["kappa_source"] = ctx.kappa ? "given" : "auto";
  h["rho_source"] = ctx.rho ? "given" : "auto";
  return h;
}

Row condition_row(const ConditionReport& c) {
  return {{"norm_A", c.norm_A},
          {"gap_g", c.gap_g},
          {"comm_norm", c.comm_norm},
          {"kappa_max", c.kappa_max},
          {"rho_min", c.rho_min},
          {"invertible", c.invertible},
          {"cond1_ok", c.cond1_ok},
          {"cond2_ok", c.cond2_ok},
          {"verified", c.verified()},
          {"bound_mode", to_string(c.bound_mode)},
          {"gap_estimate", c.gap_estimate}};
}

template <class T>
Cell opt_cell(const std::optional<T>& v) {
  if (!v) return std::monostate{};
  return Cell(*v);
}

struct Evaluated {
  Record record;
  int code = kOk;
};

int classify_exception(std::exception_ptr e, std::string& message) {
  try {
    std::rethrow_exception(e);
  } catch (const NotInvertibleError& ex) {
    message = ex.what();
    return kNotInvertible;
  } catch (const std::invalid_argument& ex) {
    message = ex.what();
    return kConfig;
  } catch (const std::exception& ex) {
    message = ex.what();
    return kInternal;
  }
}

std::string status_name(int code) {
  switch (code) {
    case kOk: return "verified";
    case kUnverified: return "unverified";
    case kNotInvertible: return "not_invertible";
    case kConfig: return "config_error";
    default: return "error";
  }
}

// compute_invariant on one (model, κ, ρ); fills the record and the status code
// (4 for an unverified but completed run).
Evaluated evaluate_invariant(const Model& model, const CliffordRep& rep, const OperatorBounds& bounds,
                             std::optional<double> kappa, std::optional<double> rho, const Options& opt) {
  InvariantOptions io;
  io.kappa = kappa;
  io.rho = rho;
  io.tol = opt.tol;
  io.symmetry = model.symmetry;
  io.min_eig_max_dim = opt.max_dim;
  const InvariantResult r = compute_invariant(model.op, rep, bounds, io);
  Evaluated ev;
  ev.code = r.verified() ? kOk : kUnverified;
  Row& f = ev.record.fields;
  f = {{"kind", to_string(r.kind)},
       {"value", static_cast<long long>(r.value)},
       {"kappa", r.conditions.kappa},
       {"rho", r.conditions.rho},
       {"dimension", static_cast<long long>(r.dimension)},
       {"n_plus", static_cast<long long>(r.inertia.n_plus)},
       {"n_minus", static_cast<long long>(r.inertia.n_minus)},
       {"n_zero", static_cast<long long>(r.inertia.n_zero)},
       {"inertia_tol", r.inertia.tol},
       {"min_abs_eig", opt_cell(r.min_abs_eig)},
       {"symmetry_residual", opt_cell(r.symmetry_residual)},
       {"realified", r.realified},
       {"status", status_name(ev.code)}};
  ev.record.nested.push_back({"conditions", condition_row(r.conditions)});
  return ev;
}

void emit(const Options& opt, const Document& doc, std::ostream& out) {
  auto write = [&](std::ostream& os) {
    if (opt.format == "json") write_json(os, doc);
    else write_csv(os, doc.records);
  };
  if (opt.out.empty()) {
    write(out);
    return;
  }
  std::ofstream f(opt.out, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file '" + opt.out + "'");
  write(f);
  if (!f) throw std::runtime_error("failed writing '" + opt.out + "'");
}

int finish(int code, const Options& opt, std::ostream& err) {
  if (code == kUnverified) {
    err << "warning: unverified: sufficient conditions violated\n";
    if (opt.allow_unverified) return kOk;
  }
  return code;
}

// --- subcommands -----------------------------------------------------------

int cmd_invariant(const Context& ctx, std::ostream& out, std::ostream& err) {
  const Model model = resolve_model(ctx.source);
  const CliffordRep rep = build_clifford(model.op.dimension());
  const OperatorBounds bounds = operator_bounds(model.op, rep);
  Evaluated ev = evaluate_invariant(model, rep, bounds, ctx.kappa, ctx.rho, ctx.opt);
  Document doc{"invariant", model_header(ctx), {ev.record}};
  emit(ctx.opt, doc, out);
  if (!ctx.opt.out.empty()) {
    const auto& f = ev.record.fields;
    out << "value " << std::get<long long>(f[1].second) << " (" << std::get<std::string>(f[0].second) << "), "
        << status_name(ev.code) << '\n';
  }
  return finish(ev.code, ctx.opt, err);
}

int cmd_sweep(const Context& ctx, std::ostream& out, std::ostream& err) {
  if (ctx.opt.grid.empty()) throw std::invalid_argument("sweep needs at least one --grid");
  std::vector<GridAxis> axes;
  for (const auto& g : ctx.opt.grid) {
    axes.push_back(parse_grid_axis(g));
    for (std::size_t i = 0; i + 1 < axes.size(); ++i)
      if (axes[i].name == axes.back().name) throw std::invalid_argument("duplicate grid axis '" + axes.back().name + "'");
  }
  const auto points = grid_points(axes);

  // Distinct model parameter sets share one model and one bounds computation.
  struct Prepared {
    std::map<std::string, double> params;
    std::optional<Model> model;
    std::optional<CliffordRep> rep;
    std::optional<OperatorBounds> bounds;
    std::exception_ptr error;
  };
  std::vector<Prepared> models;
  std::vector<std::size_t> model_of(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::map<std::string, double> p = ctx.source.params;
    for (const auto& [k, v] : points[i])
      if (k != "kappa" && k != "rho") p[k] = v;
    auto it = std::find_if(models.begin(), models.end(), [&](const Prepared& m) { return m.params == p; });
    if (it == models.end()) {
      models.push_back({p, std::nullopt, std::nullopt, std::nullopt, nullptr});
      it = models.end() - 1;
    }
    model_of[i] = static_cast<std::size_t>(it - models.begin());
  }
  // Catch config errors (unknown parameter names) before any heavy work.
  {
    ModelSource probe = ctx.source;
    probe.params = models.front().params;
    (void)resolve_model(probe);
  }

  parallel_for(models.size(), ctx.opt.jobs, [&](std::size_t m) {
    try {
      ModelSource src = ctx.source;
      src.params = models[m].params;
      models[m].model = resolve_model(src);
      models[m].rep = build_clifford(models[m].model->op.dimension());
      models[m].bounds = operator_bounds(models[m].model->op, *models[m].rep);
    } catch (...) {
      models[m].error = std::current_exception();
    }
  });

  std::vector<Evaluated> rows(points.size());
  parallel_for(points.size(), ctx.opt.jobs, [&](std::size_t i) {
    const auto& pt = points[i];
    std::optional<double> kappa = ctx.kappa, rho = ctx.rho;
    if (auto it = pt.find("kappa"); it != pt.end()) kappa = it->second;
    if (auto it = pt.find("rho"); it != pt.end()) rho = it->second;
    const Prepared& pm = models[model_of[i]];
    std::string message;
    try {
      if (pm.error) std::rethrow_exception(pm.error);
      if (kappa && !(*kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
      if (rho && !(*rho > 0.0)) throw std::invalid_argument("rho must be positive");
      rows[i] = evaluate_invariant(*pm.model, *pm.rep, *pm.bounds, kappa, rho, ctx.opt);
    } catch (...) {
      rows[i].code = classify_exception(std::current_exception(), message);
      rows[i].record.fields = {{"kind", std::monostate{}},    {"value", std::monostate{}},
                               {"kappa", opt_cell(kappa)},    {"rho", opt_cell(rho)},
                               {"status", status_name(rows[i].code)}};
    }
    Row lead;
    for (const auto& ax : axes) lead.emplace_back(ax.name, pt.at(ax.name));
    auto& f = rows[i].record.fields;
    f.insert(f.begin(), lead.begin(), lead.end());
    f.emplace_back("error", message);
  });

  Document doc{"sweep", model_header(ctx), {}};
  nlohmann::ordered_json g = nlohmann::ordered_json::array();
  for (const auto& ax : axes) g.push_back({{"name", ax.name}, {"values", ax.values}});
  doc.header["grid"] = g;
  int code = kOk;
  auto rank = [](int c) { return c == kInternal ? 4 : c == kConfig ? 3 : c == kNotInvertible ? 2 : c == kUnverified ? 1 : 0; };
  std::size_t failed = 0;
  for (auto& r : rows) {
    doc.records.push_back(std::move(r.record));
    if (rank(r.code) > rank(code)) code = r.code;
    failed += r.code != kOk && r.code != kUnverified;
  }
  emit(ctx.opt, doc, out);
  if (failed) err << "warning: " << failed << " of " << rows.size() << " grid points failed\n";
  if (!ctx.opt.out.empty()) out << rows.size() << " rows written to " << ctx.opt.out << '\n';
  return finish(code, ctx.opt, err);
}

int cmd_oracle(const Context& ctx, std::ostream& out, std::ostream&) {
  const Model model = resolve_model(ctx.source);
  const int d = model.op.dimension();
  Record rec;
  if (d == 1) {
    const WindingResult w = winding_number_d1(BlochSymbol(model.op), ctx.opt.k_grid > 0 ? ctx.opt.k_grid : 64);
    rec.fields = {{"oracle", std::string("winding")},
                  {"value", static_cast<long long>(w.value)},
                  {"grid", static_cast<long long>(w.grid)},
                  {"min_abs_det", w.min_abs_det}};
  } else if (d == 3) {
    const CliffordRep rep = build_clifford(3);
    const HoppingOperator a = clifford_fiber_reduction(model.op, rep.nu);
    const ChernResult c = odd_chern_d3(BlochSymbol(a), ctx.opt.k_grid > 0 ? ctx.opt.k_grid : 16, ctx.opt.k_max_grid);
    rec.fields = {{"oracle", std::string("odd_chern")},
                  {"value", static_cast<long long>(c.value)},
                  {"raw", c.raw},
                  {"residual", c.residual},
                  {"grid", static_cast<long long>(c.grid)},
                  {"reduced_fiber_dim", static_cast<long long>(a.fiber_dim())}};
    nlohmann::ordered_json hist = nlohmann::ordered_json::array();
    for (const auto& [n, v] : c.history) hist.push_back({{"grid", n}, {"raw", v}});
    rec.extra["history"] = hist;
  } else {
    throw std::invalid_argument("oracle supports d = 1 and d = 3, model has d = " + std::to_string(d));
  }
  Document doc{"oracle", model_header(ctx), {rec}};
  emit(ctx.opt, doc, out);
  if (!ctx.opt.out.empty()) out << "value " << std::get<long long>(rec.fields[1].second) << '\n';
  return kOk;
}

struct Resolved {
  Model model;
  CliffordRep rep;
  OperatorBounds bounds;
  ConditionReport report;
  LatticeBall ball;
};

Resolved resolve_all(const Context& ctx) {
  Model model = resolve_model(ctx.source);
  CliffordRep rep = build_clifford(model.op.dimension());
  OperatorBounds bounds = operator_bounds(model.op, rep);
  const double kappa = resolve_kappa(bounds, ctx.kappa);
  const double rho = resolve_rho(bounds, kappa, ctx.rho);
  ConditionReport report = condition_report(bounds, kappa, rho);
  LatticeBall ball = build_ball(model.op.dimension(), rho);
  return {std::move(model), std::move(rep), bounds, report, std::move(ball)};
}

void check_dense_size(Index dim, const Options& opt) {
  if (dim > opt.max_dim)
    throw std::invalid_argument("localizer dimension " + std::to_string(dim) + " exceeds --max-dim " +
                                std::to_string(opt.max_dim));
}

int cmd_flow(const Context& ctx, std::ostream& out, std::ostream& err) {
  if (ctx.opt.steps < 1) throw std::invalid_argument("--steps must be positive");
  const Resolved r = resolve_all(ctx);
  const double kappa = r.report.kappa;
  const Index dim = 2 * static_cast<Index>(r.ball.size()) * r.model.op.fiber_dim();
  check_dense_size(dim, ctx.opt);
  const HermitianPath path = [&](double lambda) {
    return flow_localizer(r.model.op, r.rep, r.ball, kappa, lambda).dense();
  };
  const FlowResult f = spectral_flow(path, ctx.opt.steps, ctx.opt.tol.value_or(1e-10), ctx.opt.resolution);

  Document doc{"flow", model_header(ctx), {}};
  for (const auto& c : f.crossings) {
    Record rec;
    rec.fields = {{"record", std::string("crossing")},
                  {"lambda", c.lambda},
                  {"lambda_lo", c.lambda_lo},
                  {"lambda_hi", c.lambda_hi},
                  {"delta_signature", static_cast<long long>(c.delta_signature)}};
    doc.records.push_back(std::move(rec));
  }
  Record total;
  total.fields = {{"record", std::string("total")},
                  {"flow", static_cast<long long>(f.flow)},
                  {"sig_start", static_cast<long long>(f.sig_start)},
                  {"sig_end", static_cast<long long>(f.sig_end)},
                  {"half_sig_difference", static_cast<long long>((f.sig_end - f.sig_start) / 2)},
                  {"singular_start", f.singular_start},
                  {"kappa", kappa},
                  {"rho", r.report.rho},
                  {"dimension", static_cast<long long>(dim)},
                  {"steps", static_cast<long long>(ctx.opt.steps)}};
  total.nested.push_back({"conditions", condition_row(r.report)});
  doc.records.push_back(std::move(total));
  emit(ctx.opt, doc, out);
  if (!ctx.opt.out.empty()) out << "flow " << f.flow << ", " << f.crossings.size() << " crossing(s)\n";
  return finish(r.report.verified() ? kOk : kUnverified, ctx.opt, err);
}

int cmd_eta(const Context& ctx, std::ostream& out, std::ostream& err) {
  std::vector<double> s_values;
  for (const auto& s : ctx.opt.s_values) {
    s_values.push_back(parse_number(s, "--s"));
    if (s_values.back() < 0.0) throw std::invalid_argument("--s values must be non-negative");
  }
  const Resolved r = resolve_all(ctx);
  const LocalizerMatrix L = build_localizer(r.model.op, r.rep, r.ball, r.report.kappa);
  check_dense_size(L.dimension(), ctx.opt);
  const RVector ev = hermitian_eigenvalues(L.dense());
  std::vector<double> eigs(ev.data(), ev.data() + ev.size());
  const double min_abs = std::abs(*std::min_element(eigs.begin(), eigs.end(), [](double a, double b) {
    return std::abs(a) < std::abs(b);
  }));
  const double tol = ctx.opt.tol.value_or(0.0);
  long long sig = 0;
  for (double e : eigs) sig += e > tol ? 1 : e < -tol ? -1 : 0;

  Document doc{"eta", model_header(ctx), {}};
  for (double s : s_values) {
    Record rec;
    rec.fields = {{"s", s},
                  {"eta", eta_partial_sum(eigs, s)},
                  {"signature", sig},
                  {"min_abs_eig", min_abs},
                  {"kappa", r.report.kappa},
                  {"rho", r.report.rho},
                  {"dimension", static_cast<long long>(L.dimension())}};
    rec.nested.push_back({"conditions", condition_row(r.report)});
    doc.records.push_back(std::move(rec));
  }
  emit(ctx.opt, doc, out);
  if (!ctx.opt.out.empty()) out << "signature " << sig << '\n';
  return finish(r.report.verified() ? kOk : kUnverified, ctx.opt, err);
}

int cmd_verify(const Context& ctx, std::ostream& out, std::ostream& err) {
  const Resolved r = resolve_all(ctx);
  Document doc{"verify", model_header(ctx), {}};
  bool hard_fail = false;
  auto check = [&](const std::string& name, Cell value, Cell threshold, bool ok, bool hard) {
    Record rec;
    rec.fields = {{"check", name}, {"value", std::move(value)}, {"threshold", std::move(threshold)}, {"ok", ok}};
    doc.records.push_back(std::move(rec));
    hard_fail = hard_fail || (hard && !ok);
  };

  check("clifford", std::monostate{}, 1e-12, verify_clifford(r.rep, 1e-12), true);
  const ConditionReport& c = r.report;
  check("invertible", c.gap_g, std::monostate{}, c.invertible, false);
  const double cond1_bound = c.norm_A > 0 && c.kappa > 0 ? std::pow(c.gap_g, 3) / (18.0 * c.norm_A * c.kappa) : 0.0;
  check("cond1 comm_norm <= g^3/(18 |A| kappa)", c.comm_norm, cond1_bound, c.cond1_ok, false);
  check("cond2 2g/kappa <= rho", 2.0 * c.gap_g / c.kappa, c.rho, c.cond2_ok, false);

  const LocalizerMatrix L = build_localizer(r.model.op, r.rep, r.ball, c.kappa);
  if (r.model.symmetry) {
    const RealSymmetryData data = make_symmetry_data(r.rep, r.model.op.fiber_dim(), *r.model.symmetry);
    const SymmetryResiduals res =
        check_symmetry(data, r.model.op, r.rep, r.model.op.translation_invariant() ? nullptr : &r.ball);
    check("symmetry operator relations", res.max(), 1e-10, res.max() <= 1e-10, true);
    const double lres = verify_symmetry(L, build_R(data, r.ball.size()), data.s_L());
    const double scale = std::max(1.0, L.matrix.norm());
    check("localizer symmetry", lres, 1e-10 * scale, lres <= 1e-10 * scale, true);
    check("symmetry class " + to_string(data.symmetry_class().kind), std::monostate{}, std::monostate{}, true, false);
  }
  if (L.dimension() <= ctx.opt.max_dim) {
    const GapCheck gc = gap_check(L, c.gap_g);
    // The bound is only guaranteed when the conditions hold.
    check("localizer gap >= g/sqrt2", gc.min_abs_eig, c.gap_g / std::sqrt(2.0), gc.satisfies_bound,
          c.verified());
  } else {
    err << "note: gap check skipped, dimension " << L.dimension() << " exceeds --max-dim\n";
  }
  for (auto& rec : doc.records) rec.fields.emplace_back("kappa", c.kappa), rec.fields.emplace_back("rho", c.rho);
  emit(ctx.opt, doc, out);
  if (hard_fail) {
    err << "error: verification failed\n";
    return kInternal;
  }
  return finish(c.verified() ? kOk : kUnverified, ctx.opt, err);
}

}  // namespace

GridAxis parse_grid_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
    throw std::invalid_argument("--grid: expected name=values, got '" + spec + "'");
  GridAxis axis{spec.substr(0, eq), {}};
  const std::string body = spec.substr(eq + 1);
  if (body.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(body);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw std::invalid_argument("--grid: range must be start:stop:count");
    const double a = parse_number(parts[0], "--grid"), b = parse_number(parts[1], "--grid");
    const double cnt = parse_number(parts[2], "--grid");
    if (cnt < 1 || cnt != std::floor(cnt)) throw std::invalid_argument("--grid: count must be a positive integer");
    const int n = static_cast<int>(cnt);
    if (n == 1 && a != b) throw std::invalid_argument("--grid: count 1 needs start == stop");
    for (int i = 0; i < n; ++i) axis.values.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  } else {
    std::stringstream ss(body);
    for (std::string p; std::getline(ss, p, ',');) axis.values.push_back(parse_number(p, "--grid"));
  }
  if (axis.values.empty()) throw std::invalid_argument("--grid: no values for '" + axis.name + "'");
  return axis;
}

std::vector<std::map<std::string, double>> grid_points(const std::vector<GridAxis>& axes) {
  std::vector<std::map<std::string, double>> pts{{}};
  for (const auto& ax : axes) {
    std::vector<std::map<std::string, double>> next;
    for (const auto& p : pts)
      for (double v : ax.values) {
        auto q = p;
        q[ax.name] = v;
        next.push_back(std::move(q));
      }
    pts = std::move(next);
  }
  return pts;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Index pairings of lattice operators via the spectral localizer", "specloc"};
  app.require_subcommand(1);
  Options o;
  auto* inv = app.add_subcommand("invariant", "Half-signature of the localizer (or symmetry invariant)");
  auto* sweep = app.add_subcommand("sweep", "Invariant over a parameter grid");
  auto* oracle = app.add_subcommand("oracle", "Winding (d=1) or odd Chern number (d=3) of the symbol");
  auto* flow = app.add_subcommand("flow", "Spectral flow of kappa*Dhat + lambda*H on [0, 1]");
  auto* eta = app.add_subcommand("eta", "Eta partial sums of the localizer spectrum");
  auto* verify = app.add_subcommand("verify", "Clifford, condition, symmetry and gap checks");
  for (auto* sc : {inv, sweep, oracle, flow, eta, verify}) add_common(sc, o);
  sweep->add_option("--grid", o.grid, "name=v1,v2,... or name=start:stop:count (repeatable)");
  sweep->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  oracle->add_option("--k-grid", o.k_grid, "Initial k-grid per axis");
  oracle->add_option("--k-max-grid", o.k_max_grid, "Largest k-grid per axis (d=3)")->capture_default_str();
  flow->add_option("--steps", o.steps, "Uniform lambda steps before bisection")->capture_default_str();
  flow->add_option("--resolution", o.resolution, "Bisection width")->capture_default_str();
  eta->add_option("--s", o.s_values, "Exponents s (repeatable or comma separated)")->delimiter(',');

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfig;
  }

  const auto t0 = Clock::now();
  int code = kOk;
  try {
    const Context ctx = make_context(o, err);
    if (inv->parsed()) code = cmd_invariant(ctx, out, err);
    else if (sweep->parsed()) code = cmd_sweep(ctx, out, err);
    else if (oracle->parsed()) code = cmd_oracle(ctx, out, err);
    else if (flow->parsed()) code = cmd_flow(ctx, out, err);
    else if (eta->parsed()) code = cmd_eta(ctx, out, err);
    else code = cmd_verify(ctx, out, err);
  } catch (...) {
    std::string message;
    code = classify_exception(std::current_exception(), message);
    err << "error: " << message << '\n';
  }
  // Timing stays off the output file so results are byte-reproducible.
  err << "wall time " << std::chrono::duration<double>(Clock::now() - t0).count() << " s\n";
  return code;
}

}  // namespace specloc::cli
