#pragma once

#include <map>
#include <vector>

#include "rulkit/fleet.hpp"

namespace rulkit {

/// Clipping ceiling and failure horizon for the binary target.
struct LabelConfig {
  int maxlife = 130;  // RUL is capped here (piecewise-linear convention)
  int w1 = 30;        // label1 = 1 when RUL <= w1

  void validate() const;
};

/// Per-unit RUL series; entry [c-1] is the value at cycle c.
using RulSeries = std::map<int, std::vector<int>>;

/// Training units run to failure, so RUL at the last cycle is 0 and
/// rul(cycle) = max_cycle - cycle.
RulSeries compute_train_rul(const FleetData& fleet);

/// Test units are truncated; rul(cycle) = truth[unit] + (max_cycle - cycle).
/// Throws MissingRulEntry if a unit has no ground-truth entry.
RulSeries compute_test_rul(const FleetData& fleet, const RulTable& truth);

int clip_rul(int rul, const LabelConfig& cfg);

/// 1 when the unit fails within w1 cycles (rul <= w1), else 0.
int binarize(int rul, const LabelConfig& cfg);

}  // namespace rulkit
