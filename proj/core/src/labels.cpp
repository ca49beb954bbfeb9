#include "rulkit/labels.hpp"

#include <algorithm>
#include <string>

#include "rulkit/error.hpp"

namespace rulkit {

void LabelConfig::validate() const {
  if (maxlife <= 0) throw Error("maxlife must be positive");
  if (w1 <= 0) throw Error("w1 must be positive");
  if (w1 >= maxlife) throw Error("w1 must be smaller than maxlife");
}

namespace {

RulSeries rul_from_offsets(const FleetData& fleet, const RulTable& final_rul) {
  RulSeries out;
  for (int id : fleet.unit_ids()) {
    const auto& rows = fleet.unit(id);
    const int max_cycle = static_cast<int>(rows.size());
    auto it = final_rul.find(id);
    if (it == final_rul.end()) {
      throw MissingRulEntry("unit " + std::to_string(id) + " has no ground-truth RUL");
    }
    std::vector<int> series(rows.size());
    for (int c = 1; c <= max_cycle; ++c) {
      series[c - 1] = it->second + (max_cycle - c);
    }
    out.emplace(id, std::move(series));
  }
  return out;
}

}  // namespace

RulSeries compute_train_rul(const FleetData& fleet) {
  RulTable zeros;
  for (int id : fleet.unit_ids()) zeros[id] = 0;
  return rul_from_offsets(fleet, zeros);
}

RulSeries compute_test_rul(const FleetData& fleet, const RulTable& truth) {
  return rul_from_offsets(fleet, truth);
}

int clip_rul(int rul, const LabelConfig& cfg) {
  return std::min(rul, cfg.maxlife);
}

int binarize(int rul, const LabelConfig& cfg) {
  return rul <= cfg.w1 ? 1 : 0;
}

}  // namespace rulkit
