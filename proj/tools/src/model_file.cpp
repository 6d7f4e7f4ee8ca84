#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "specloc_cli/cli.hpp"

namespace specloc::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument("model file: " + what); }

const json& field(const json& obj, const char* key) {
  if (!obj.contains(key)) fail(std::string("missing field '") + key + "'");
  return obj.at(key);
}

int integer(const json& v, const std::string& what) {
  if (!v.is_number_integer()) fail(what + " must be an integer");
  return v.get<int>();
}

int sign(const json& v, const std::string& what) {
  const int s = integer(v, what);
  if (s != 1 && s != -1) fail(what + " must be +1 or -1");
  return s;
}

RMatrix real_matrix(const json& v, int n, const std::string& what) {
  if (!v.is_array() || static_cast<int>(v.size()) != n) fail(what + " must have " + std::to_string(n) + " rows");
  RMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      fail(what + " row " + std::to_string(i) + " must have " + std::to_string(n) + " entries");
    for (int j = 0; j < n; ++j) {
      const json& x = row[static_cast<std::size_t>(j)];
      if (!x.is_number()) fail(what + " entries must be numbers");
      m(i, j) = x.get<double>();
    }
  }
  return m;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [k, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) fail("unknown field '" + k + "' in " + where);
  }
}

}  // namespace

Model parse_model_file(const std::string& text, const std::map<std::string, double>& overrides) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("top level must be an object");
  check_keys(doc, {"d", "N", "hoppings", "disorder", "symmetry", "name"}, "model");
  for (const auto& [k, _] : overrides)
    if (k != "w" && k != "seed") fail("parameter '" + k + "' cannot override a model file (only w, seed)");

  const int d = integer(field(doc, "d"), "d");
  const int N = integer(field(doc, "N"), "N");
  if (d < 1 || d % 2 == 0 || d > 7) fail("d must be odd, 1..7");
  if (N < 1) fail("N must be positive");

  HoppingOperator op(d, N);
  const json& hops = field(doc, "hoppings");
  if (!hops.is_array() || hops.empty()) fail("hoppings must be a non-empty array");
  for (std::size_t h = 0; h < hops.size(); ++h) {
    const std::string where = "hoppings[" + std::to_string(h) + "]";
    check_keys(hops[h], {"r", "re", "im"}, where);
    const json& r = field(hops[h], "r");
    if (!r.is_array() || static_cast<int>(r.size()) != d) fail(where + ".r must have d entries");
    std::vector<int> disp;
    for (const auto& x : r) disp.push_back(integer(x, where + ".r"));
    const RMatrix re = real_matrix(field(hops[h], "re"), N, where + ".re");
    const RMatrix im = hops[h].contains("im") ? real_matrix(hops[h]["im"], N, where + ".im") : RMatrix::Zero(N, N);
    CMatrix A(N, N);
    A.real() = re;
    A.imag() = im;
    op.add_hopping(std::move(disp), A);
  }

  double w = 0.0;
  std::uint64_t seed = 0;
  if (doc.contains("disorder")) {
    const json& dis = doc["disorder"];
    check_keys(dis, {"type", "w", "seed"}, "disorder");
    const json& type = field(dis, "type");
    if (!type.is_string() || type.get<std::string>() != "uniform") fail("disorder.type must be \"uniform\"");
    const json& jw = field(dis, "w");
    if (!jw.is_number()) fail("disorder.w must be a number");
    w = jw.get<double>();
    if (dis.contains("seed")) {
      if (!dis["seed"].is_number_unsigned()) fail("disorder.seed must be a non-negative integer");
      seed = dis["seed"].get<std::uint64_t>();
    }
  }
  if (auto it = overrides.find("w"); it != overrides.end()) w = it->second;
  if (auto it = overrides.find("seed"); it != overrides.end()) {
    if (it->second < 0 || it->second != std::floor(it->second)) fail("seed must be a non-negative integer");
    seed = static_cast<std::uint64_t>(it->second);
  }

  Model model{doc.value("name", std::string("file")), overrides, std::move(op), std::nullopt};
  if (w != 0.0) model.op = with_uniform_disorder(model.op, w, seed);

  if (doc.contains("symmetry")) {
    const json& sym = doc["symmetry"];
    check_keys(sym, {"S", "sA", "sAprime"}, "symmetry");
    SymmetryOperator s;
    s.S = real_matrix(field(sym, "S"), N, "symmetry.S");
    s.s_A = sign(field(sym, "sA"), "symmetry.sA");
    s.s_prime_A = sign(field(sym, "sAprime"), "symmetry.sAprime");
    model.symmetry = std::move(s);
  }
  return model;
}

Model load_model_file(const std::string& path, const std::map<std::string, double>& overrides) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open model file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model_file(ss.str(), overrides);
}

Model resolve_model(const ModelSource& src) {
  if (src.file) return load_model_file(*src.file, src.params);
  return make_model(src.name, src.params);
}

}  // namespace specloc::cli
