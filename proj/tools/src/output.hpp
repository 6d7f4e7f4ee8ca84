#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace specloc::cli {

using Cell = std::variant<std::monostate, bool, long long, double, std::string>;
using Row = std::vector<std::pair<std::string, Cell>>;

/// One output record. `nested` fields appear flat in CSV and as named
/// sub-objects in JSON.
struct Record {
  Row fields;
  std::vector<std::pair<std::string, Row>> nested;
  /// JSON-only extras (histories, lists).
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

struct Document {
  std::string command;
  nlohmann::ordered_json header = nlohmann::ordered_json::object();
  std::vector<Record> records;
};

void write_csv(std::ostream& os, const std::vector<Record>& records);
void write_json(std::ostream& os, const Document& doc);

nlohmann::ordered_json to_json(const Cell& c);

}  // namespace specloc::cli
