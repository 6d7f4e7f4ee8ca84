#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "specloc/invariant.hpp"
#include "specloc/oracle.hpp"
#include "specloc_cli/cli.hpp"

using namespace specloc;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "specloc");
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

json run_json(std::vector<std::string> args, int expected_code = 0) {
  args.push_back("--format");
  args.push_back("json");
  const Run r = run(args);
  REQUIRE_MESSAGE(r.code == expected_code, r.err);
  return json::parse(r.out);
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto p = std::filesystem::temp_directory_path() / ("specloc_cli_test_" + name);
  std::ofstream(p) << content;
  return p;
}

// SSH with A_0 = m, A_{+1} = t as a model file.
std::string ssh_file(double m, double t, const std::string& extra = "") {
  std::ostringstream s;
  s << R"({"d": 1, "N": 1, "hoppings": [{"r": [0], "re": [[)" << m << R"(]]}, {"r": [1], "re": [[)" << t
    << "]]}]" << extra << "}";
  return s.str();
}

}  // namespace

TEST_CASE("cli: shift n=1 with auto parameters is verified with value 1") {
  const json j = run_json({"invariant", "--model", "shift", "--param", "n=1"});
  CHECK(j["schema_version"] == 1);
  CHECK(j["kappa_source"] == "auto");
  CHECK(j["rho_source"] == "auto");
  const json& rec = j["records"][0];
  CHECK(rec["value"] == 1);
  CHECK(rec["kind"] == "Z");
  CHECK(rec["status"] == "verified");
  CHECK(rec["conditions"]["cond1_ok"] == true);
  CHECK(rec["conditions"]["cond2_ok"] == true);
  CHECK(rec["rho"].get<double>() == doctest::Approx(rec["conditions"]["rho_min"].get<double>()));
}

TEST_CASE("cli: defect shift is computed but marked unverified") {
  const std::vector<std::string> args{"invariant", "--model", "defect-shift", "--param", "rho=20",
                                      "--kappa",   "1/18",    "--rho",        "20"};
  const Run r = run(args);
  CHECK(r.code == cli::kUnverified);
  CHECK(r.err.find("unverified") != std::string::npos);
  std::vector<std::string> allow = args;
  allow.push_back("--allow-unverified");
  const json j = run_json(allow);
  CHECK(j["records"][0]["value"] == 1);
  CHECK(j["records"][0]["status"] == "unverified");
  CHECK(j["records"][0]["conditions"]["verified"] == false);
}

TEST_CASE("cli: ssh values agree with the winding oracle") {
  for (double m : {2.0, 0.5}) {
    const long w = winding_number_d1(BlochSymbol(ssh_model(m, 1.0))).value;
    const json inv = run_json({"invariant", "--model", "ssh", "--param", "m=" + std::to_string(m), "--param", "t=1"});
    CHECK(inv["records"][0]["value"] == w);
    const json orc = run_json({"oracle", "--model", "ssh", "--param", "m=" + std::to_string(m)});
    CHECK(orc["records"][0]["value"] == w);
    CHECK(orc["records"][0]["oracle"] == "winding");
  }
}

TEST_CASE("cli: gapless operator with auto parameters exits as not invertible") {
  const Run r = run({"invariant", "--model", "ssh", "--param", "m=1", "--param", "t=1"});
  CHECK(r.code == cli::kNotInvertible);
}

TEST_CASE("cli: output is byte-identical across runs and worker counts") {
  const std::vector<std::string> base{"sweep", "--model", "shift", "--param", "n=1", "--kappa", "1/18",
                                      "--grid", "rho=36,45,54"};
  auto with = [&](std::vector<std::string> extra) {
    auto a = base;
    a.insert(a.end(), extra.begin(), extra.end());
    return run(a);
  };
  const Run a = with({"--jobs", "1"});
  const Run b = with({"--jobs", "3"});
  const Run c = with({"--jobs", "1"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  const Run ja = with({"--format", "json"});
  const Run jb = with({"--format", "json", "--jobs", "2"});
  CHECK(ja.out == jb.out);
  CHECK(ja.out.find("wall") == std::string::npos);

  const json j = json::parse(ja.out);
  REQUIRE(j["records"].size() == 3);
  const double rhos[] = {36, 45, 54};
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(j["records"][i]["rho"] == rhos[i]);
    CHECK(j["records"][i]["value"] == 1);
  }
}

TEST_CASE("cli: sweep over a model parameter keeps grid order") {
  const json j = run_json({"sweep", "--model", "ssh", "--grid", "m=0.5,2", "--grid", "t=1,1.5"});
  REQUIRE(j["records"].size() == 4);
  const double ms[] = {0.5, 0.5, 2, 2}, ts[] = {1, 1.5, 1, 1.5};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& rec = j["records"][i];
    CHECK(rec["m"] == ms[i]);
    CHECK(rec["t"] == ts[i]);
    CHECK(rec["value"] == winding_number_d1(BlochSymbol(ssh_model(ms[i], ts[i]))).value);
  }
}

TEST_CASE("cli: sweep rows that fail keep their place") {
  const Run r = run({"sweep", "--model", "ssh", "--grid", "m=0.5,1,2", "--format", "json"});
  CHECK(r.code == cli::kNotInvertible);
  const json j = json::parse(r.out);
  REQUIRE(j["records"].size() == 3);
  CHECK(j["records"][0]["status"] == "verified");
  CHECK(j["records"][1]["status"] == "not_invertible");
  CHECK(j["records"][1]["value"].is_null());
  CHECK(j["records"][2]["status"] == "verified");
}

TEST_CASE("cli: model file matches the built-in model") {
  const auto path = temp_file("ssh.json", ssh_file(0.5, 1.0));
  const json f = run_json({"invariant", "--model-file", path.string()});
  const json b = run_json({"invariant", "--model", "ssh", "--param", "m=0.5", "--param", "t=1"});
  CHECK(f["records"][0]["value"] == b["records"][0]["value"]);
  CHECK(f["records"][0]["kappa"] == b["records"][0]["kappa"]);
  CHECK(f["model"]["file"] == path.string());
  std::filesystem::remove(path);
}

TEST_CASE("cli: model file disorder and symmetry") {
  const std::string file = R"({"d": 1, "N": 2,
    "hoppings": [
      {"r": [0], "re": [[0.5, 0], [0, 0.5]]},
      {"r": [1], "re": [[1, 0.25], [0.25, 0]]},
      {"r": [-1], "re": [[0, -0.25], [-0.25, 1]]}],
    "symmetry": {"S": [[0, 1], [-1, 0]], "sA": -1, "sAprime": -1}})";
  const Model m = cli::parse_model_file(file);
  REQUIRE(m.symmetry);
  CHECK(m.symmetry->s_A == -1);
  const Model ref = make_model("diii", {{"m", 0.5}, {"t", 1.0}, {"c", 0.25}});
  for (std::size_t h = 0; h < ref.op.hoppings().size(); ++h) {
    bool found = false;
    for (const auto& g : m.op.hoppings())
      if (g.r == ref.op.hoppings()[h].r) {
        found = true;
        CHECK((g.coefficient - ref.op.hoppings()[h].coefficient).norm() == 0.0);
      }
    CHECK(found);
  }

  const Model d = cli::parse_model_file(ssh_file(0.5, 1.0, R"(, "disorder": {"type": "uniform", "w": 0.2, "seed": 3})"));
  CHECK_FALSE(d.op.translation_invariant());
  const Model e = cli::parse_model_file(ssh_file(0.5, 1.0), {{"w", 0.2}, {"seed", 3}});
  const std::vector<int> site{4};
  for (std::size_t h = 0; h < 2; ++h) CHECK((d.op.coefficient(h, site) - e.op.coefficient(h, site)).norm() == 0.0);
}

TEST_CASE("cli: malformed configuration exits with code 2") {
  CHECK(run({"invariant", "--model", "nope"}).code == cli::kConfig);
  CHECK(run({"invariant"}).code == cli::kConfig);
  CHECK(run({"invariant", "--model", "shift", "--kappa", "fast"}).code == cli::kConfig);
  CHECK(run({"invariant", "--model", "shift", "--rho", "-1"}).code == cli::kConfig);
  CHECK(run({"invariant", "--model", "shift", "--param", "q=1"}).code == cli::kConfig);
  CHECK(run({"invariant", "--model", "shift", "--bogus"}).code == cli::kConfig);
  CHECK(run({"invariant", "--model", "shift", "--format", "xml"}).code == cli::kConfig);
  CHECK(run({"sweep", "--model", "shift"}).code == cli::kConfig);
  CHECK(run({"sweep", "--model", "shift", "--grid", "rho=1:2"}).code == cli::kConfig);
  CHECK(run({}).code == cli::kConfig);

  const auto bad = temp_file("bad.json", R"({"d": 2, "N": 1, "hoppings": []})");
  CHECK(run({"invariant", "--model-file", bad.string()}).code == cli::kConfig);
  std::filesystem::remove(bad);
  CHECK(run({"invariant", "--model-file", "/nonexistent/model.json"}).code == cli::kConfig);

  CHECK_THROWS_AS(cli::parse_model_file("{"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_model_file(ssh_file(1, 1, R"(, "extra": 1)")), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_model_file(ssh_file(1, 1, R"(, "disorder": {"type": "gauss", "w": 0.1})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_model_file(ssh_file(1, 1), {{"m", 2}}), std::invalid_argument);
}

TEST_CASE("cli: grid parsing and number formatting") {
  const auto a = cli::parse_grid_axis("rho=36:72:5");
  CHECK(a.name == "rho");
  CHECK(a.values == std::vector<double>{36, 45, 54, 63, 72});
  CHECK(cli::parse_grid_axis("m=0.5,1,2").values == std::vector<double>{0.5, 1, 2});
  CHECK(cli::parse_grid_axis("k=1/18").values[0] == 1.0 / 18.0);
  CHECK_THROWS_AS(cli::parse_grid_axis("rho"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_grid_axis("rho=1:2:0"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_grid_axis("rho=1,x"), std::invalid_argument);

  const auto pts = cli::grid_points({{"a", {1, 2}}, {"b", {3, 4, 5}}});
  REQUIRE(pts.size() == 6);
  CHECK(pts[1].at("a") == 1);
  CHECK(pts[1].at("b") == 4);
  CHECK(pts[3].at("a") == 2);

  CHECK(cli::format_double(0.1) == "0.10000000000000001");
  CHECK(cli::format_double(1.0) == "1");
  CHECK(cli::format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(std::stod(cli::format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("cli: csv has a header and one record per grid point") {
  const Run r = run({"sweep", "--model", "shift", "--param", "n=2", "--grid", "kappa=0.01,0.02"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0].rfind("kappa,kind,value,", 0) == 0);
  CHECK(lines[1].rfind("0.01,Z,2,", 0) == 0);
  CHECK(lines[2].rfind("0.02,Z,2,", 0) == 0);
}

TEST_CASE("cli: flow total equals half the signature change") {
  const json j = run_json({"flow", "--model", "shift", "--param", "n=2", "--kappa", "0.05", "--rho", "6",
                           "--allow-unverified"});
  const json& total = j["records"].back();
  CHECK(total["record"] == "total");
  CHECK(total["flow"] == total["half_sig_difference"]);
  long sum = 0;
  for (std::size_t i = 0; i + 1 < j["records"].size(); ++i) sum += j["records"][i]["delta_signature"].get<long>();
  CHECK(2 * total["flow"].get<long>() == sum);
}

TEST_CASE("cli: eta at s=0 is the signature and verify passes for shift") {
  const json e = run_json({"eta", "--model", "shift", "--param", "n=1", "--s", "0,1"});
  REQUIRE(e["records"].size() == 2);
  CHECK(e["records"][0]["eta"].get<double>() == e["records"][0]["signature"].get<double>());
  CHECK(e["records"][0]["signature"] == 2);

  const json v = run_json({"verify", "--model", "shift", "--param", "n=1"});
  for (const auto& rec : v["records"]) CHECK_MESSAGE(rec["ok"] == true, rec["check"]);

  const json s = run_json({"verify", "--model", "diii", "--kappa", "0.02", "--rho", "40", "--allow-unverified"});
  bool saw_symmetry = false;
  for (const auto& rec : s["records"])
    if (rec["check"] == "localizer symmetry") {
      saw_symmetry = true;
      CHECK(rec["ok"] == true);
    }
  CHECK(saw_symmetry);
}

TEST_CASE("cli: --out writes the record file and a summary") {
  const auto path = std::filesystem::temp_directory_path() / "specloc_cli_test_out.csv";
  const Run r = run({"invariant", "--model", "shift", "--param", "n=-2", "--out", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("value -2") != std::string::npos);
  std::ifstream in(path);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(row.rfind("Z,-2,", 0) == 0);
  std::filesystem::remove(path);
}
