#include "rulkit/parse.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "rulkit/error.hpp"
#include "rulkit/text.hpp"

namespace rulkit {

namespace {

double numeric_token(std::string_view tok, long line_no) {
  auto v = parse_double(tok);
  if (!v || !std::isfinite(*v)) {
    throw NonNumericToken("line " + std::to_string(line_no) + ": token '" +
                          std::string(tok) + "' is not numeric");
  }
  return *v;
}

int positive_int_token(std::string_view tok, const char* what, long line_no) {
  double v = numeric_token(tok, line_no);
  double rounded = std::nearbyint(v);
  if (v != rounded || rounded < 1.0 || rounded > 2e9) {
    throw NonNumericToken("line " + std::to_string(line_no) + ": " + what +
                          " '" + std::string(tok) + "' is not a positive integer");
  }
  return static_cast<int>(rounded);
}

}  // namespace

FleetData parse_cycles(std::istream& in) {
  std::map<int, std::vector<EngineCycle>> grouped;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() != static_cast<std::size_t>(kColumnsPerRow)) {
      throw WrongColumnCount("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(kColumnsPerRow) + " columns, found " +
                             std::to_string(tokens.size()));
    }
    EngineCycle row;
    row.unit_id = positive_int_token(tokens[0], "unit id", line_no);
    row.cycle = positive_int_token(tokens[1], "cycle", line_no);
    for (int i = 0; i < kNumSettings; ++i) {
      row.settings[i] = numeric_token(tokens[2 + i], line_no);
    }
    for (int i = 0; i < kNumSensors; ++i) {
      row.sensors[i] = numeric_token(tokens[2 + kNumSettings + i], line_no);
    }
    grouped[row.unit_id].push_back(row);
  }
  FleetData fleet;
  for (auto& [id, rows] : grouped) {
    fleet.add_unit(id, std::move(rows));
  }
  return fleet;
}

RulTable parse_rul(std::istream& in) {
  RulTable table;
  std::string line;
  long line_no = 0;
  int unit_id = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 1) {
      throw WrongColumnCount("line " + std::to_string(line_no) +
                             ": expected 1 value, found " + std::to_string(tokens.size()));
    }
    double v = numeric_token(tokens[0], line_no);
    if (v != std::nearbyint(v)) {
      throw NonNumericToken("line " + std::to_string(line_no) + ": RUL '" +
                            std::string(tokens[0]) + "' is not an integer");
    }
    if (v < 0) {
      throw NegativeValue("line " + std::to_string(line_no) + ": RUL " +
                          std::string(tokens[0]) + " is negative");
    }
    table[++unit_id] = static_cast<int>(v);
  }
  return table;
}

void write_cycles(const FleetData& fleet, std::ostream& out) {
  for (int id : fleet.unit_ids()) {
    for (const EngineCycle& row : fleet.unit(id)) {
      out << row.unit_id << ' ' << row.cycle;
      for (double s : row.settings) out << ' ' << format_double(s);
      for (double s : row.sensors) out << ' ' << format_double(s);
      out << '\n';
    }
  }
}

void write_rul(const RulTable& table, std::ostream& out) {
  for (const auto& [id, rul] : table) out << rul << '\n';
}

FleetData load_cycles_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open cycle file: " + path);
  return parse_cycles(in);
}

RulTable load_rul_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open RUL file: " + path);
  return parse_rul(in);
}

}  // namespace rulkit
