#pragma once

#include <iosfwd>
#include <string>

#include "rulkit/fleet.hpp"

namespace rulkit {

/// Parses the 26-column whitespace-delimited cycle format
/// (train_FDxxx.txt / test_FDxxx.txt). Blank lines are ignored; any run of
/// whitespace is one delimiter, so the dataset's trailing double space is
/// harmless. Throws WrongColumnCount, NonNumericToken or
/// NonContiguousCycles with a line number in the message.
FleetData parse_cycles(std::istream& in);

/// Parses the one-value-per-line RUL file; line i holds the true remaining
/// life of test unit i (1-based). Throws NonNumericToken or NegativeValue.
RulTable parse_rul(std::istream& in);

/// Writes the wire format back out, one row per cycle in (unit, cycle)
/// order. Values round-trip exactly through parse_cycles.
void write_cycles(const FleetData& fleet, std::ostream& out);

void write_rul(const RulTable& table, std::ostream& out);

FleetData load_cycles_file(const std::string& path);
RulTable load_rul_file(const std::string& path);

}  // namespace rulkit
