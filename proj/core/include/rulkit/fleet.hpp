#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <vector>

namespace rulkit {

inline constexpr int kNumSettings = 3;
inline constexpr int kNumSensors = 21;
// unit id + cycle + settings + sensors
inline constexpr int kColumnsPerRow = 2 + kNumSettings + kNumSensors;

/// One per-cycle snapshot of a single engine unit.
struct EngineCycle {
  int unit_id = 0;
  int cycle = 0;  // 1-based time step
  std::array<double, kNumSettings> settings{};
  std::array<double, kNumSensors> sensors{};

  bool operator==(const EngineCycle&) const = default;
};

/// Per-unit chronological cycle histories, keyed by unit id.
/// Within each unit, cycles are exactly 1..n; enforced on insertion.
class FleetData {
 public:
  /// Takes ownership of one unit's rows. Rows are sorted by cycle and the
  /// 1..n contiguity invariant is checked (throws NonContiguousCycles).
  void add_unit(int unit_id, std::vector<EngineCycle> cycles);

  bool has_unit(int unit_id) const { return units_.count(unit_id) > 0; }
  const std::vector<EngineCycle>& unit(int unit_id) const;
  std::vector<int> unit_ids() const;

  std::size_t unit_count() const { return units_.size(); }
  std::size_t row_count() const;
  bool empty() const { return units_.empty(); }

  bool operator==(const FleetData&) const = default;

 private:
  std::map<int, std::vector<EngineCycle>> units_;
};

/// True remaining cycles after the last observed cycle of each test unit.
using RulTable = std::map<int, int>;

}  // namespace rulkit
