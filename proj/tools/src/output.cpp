#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "specloc_cli/cli.hpp"

namespace specloc::cli {

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string csv_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& s) const { return csv_escape(s); }
  };
  return std::visit(Visitor{}, c);
}

Row flatten(const Record& r) {
  Row row = r.fields;
  for (const auto& [_, sub] : r.nested) row.insert(row.end(), sub.begin(), sub.end());
  return row;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::ordered_json to_json(const Cell& c) {
  struct Visitor {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(bool b) const { return b; }
    nlohmann::ordered_json operator()(long long v) const { return v; }
    nlohmann::ordered_json operator()(double v) const {
      if (!std::isfinite(v)) return format_double(v);
      return v;
    }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, c);
}

void write_csv(std::ostream& os, const std::vector<Record>& records) {
  if (records.empty()) return;
  // Union of columns in first-seen order; records may differ (flow totals).
  std::vector<std::string> cols;
  for (const auto& r : records)
    for (const auto& [k, _] : flatten(r))
      if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << csv_escape(cols[i]);
  os << '\n';
  for (const auto& r : records) {
    const Row row = flatten(r);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) os << ',';
      for (const auto& [k, v] : row)
        if (k == cols[i]) {
          os << csv_cell(v);
          break;
        }
    }
    os << '\n';
  }
}

void write_json(std::ostream& os, const Document& doc) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["command"] = doc.command;
  for (const auto& [k, v] : doc.header.items()) j[k] = v;
  nlohmann::ordered_json recs = nlohmann::ordered_json::array();
  for (const auto& r : doc.records) {
    nlohmann::ordered_json o = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.fields) o[k] = to_json(v);
    for (const auto& [name, sub] : r.nested) {
      nlohmann::ordered_json s = nlohmann::ordered_json::object();
      for (const auto& [k, v] : sub) s[k] = to_json(v);
      o[name] = s;
    }
    for (const auto& [k, v] : r.extra.items()) o[k] = v;
    recs.push_back(o);
  }
  j["records"] = recs;
  os << j.dump(2) << '\n';
}

}  // namespace specloc::cli
