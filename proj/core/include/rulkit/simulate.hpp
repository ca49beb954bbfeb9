#pragma once

#include <cstdint>
#include <string>

#include "rulkit/fleet.hpp"

namespace rulkit::sim {

/// Synthetic turbofan fleet in the 26-column wire format. Each unit draws a
/// total life and a wear exponent; the non-constant sensor channels drift
/// monotonically with wear plus Gaussian noise, six channels stay constant
/// and one flickers below the feature-selection threshold, mirroring the
/// real data's channel mix.
struct SimConfig {
  int train_units = 100;
  int test_units = 100;
  std::uint64_t seed = 7;
  int min_life = 130;
  int max_life = 360;
  double noise_scale = 1.0;  // multiplies every channel's noise sigma
};

struct SimFleet {
  FleetData train;
  FleetData test;   // truncated histories
  RulTable truth;   // remaining life after each test unit's last cycle
};

SimFleet simulate_fleet(const SimConfig& cfg);

/// Writes train_<subset>.txt, test_<subset>.txt and RUL_<subset>.txt into
/// `dir`, including the dataset convention of a trailing space per line.
void write_fleet_files(const SimFleet& fleet, const std::string& dir,
                       const std::string& subset);

}  // namespace rulkit::sim
