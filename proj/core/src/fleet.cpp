#include "rulkit/fleet.hpp"

#include <algorithm>
#include <string>

#include "rulkit/error.hpp"

namespace rulkit {

void FleetData::add_unit(int unit_id, std::vector<EngineCycle> cycles) {
  if (units_.count(unit_id) > 0) {
    throw NonContiguousCycles("unit " + std::to_string(unit_id) + " added twice");
  }
  std::sort(cycles.begin(), cycles.end(),
            [](const EngineCycle& a, const EngineCycle& b) { return a.cycle < b.cycle; });
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    if (cycles[i].cycle != static_cast<int>(i) + 1) {
      throw NonContiguousCycles("unit " + std::to_string(unit_id) +
                                ": expected cycle " + std::to_string(i + 1) +
                                ", found " + std::to_string(cycles[i].cycle));
    }
  }
  units_.emplace(unit_id, std::move(cycles));
}

const std::vector<EngineCycle>& FleetData::unit(int unit_id) const {
  auto it = units_.find(unit_id);
  if (it == units_.end()) {
    throw Error("unknown unit id " + std::to_string(unit_id));
  }
  return it->second;
}

std::vector<int> FleetData::unit_ids() const {
  std::vector<int> ids;
  ids.reserve(units_.size());
  for (const auto& [id, rows] : units_) ids.push_back(id);
  return ids;
}

std::size_t FleetData::row_count() const {
  std::size_t n = 0;
  for (const auto& [id, rows] : units_) n += rows.size();
  return n;
}

}  // namespace rulkit
