#include "rulkit/simulate.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "rulkit/error.hpp"

namespace rulkit::sim {

namespace {

struct Channel {
  double base;
  double amp;    // total drift over a full life; sign gives direction
  double noise;  // per-cycle sigma
};

// Magnitudes loosely follow the real channels; amp 0 marks constant sensors
// (s1, s5, s10, s16, s18, s19) and s6 flickers without trending.
constexpr std::array<Channel, kNumSensors> kChannels{{
    {518.67, 0.0, 0.0},     // s1
    {642.0, 0.9, 0.13},     // s2
    {1585.0, 14.0, 1.7},    // s3
    {1400.0, 12.0, 1.5},    // s4
    {14.62, 0.0, 0.0},      // s5
    {21.61, 0.0, 0.0045},   // s6 (flicker only)
    {553.0, -1.6, 0.24},    // s7
    {2388.0, 0.20, 0.032},  // s8
    {9060.0, 32.0, 4.6},    // s9
    {1.30, 0.0, 0.0},       // s10
    {47.3, 0.75, 0.11},     // s11
    {522.0, -1.5, 0.22},    // s12
    {2388.0, 0.20, 0.032},  // s13
    {8130.0, 24.0, 3.8},    // s14
    {8.44, 0.11, 0.016},    // s15
    {0.03, 0.0, 0.0},       // s16
    {392.0, 5.0, 0.85},     // s17
    {2388.0, 0.0, 0.0},     // s18
    {100.0, 0.0, 0.0},      // s19
    {38.86, -0.38, 0.055},  // s20
    {23.32, -0.22, 0.033},  // s21
}};

std::vector<EngineCycle> simulate_unit(int unit_id, int life, int observed,
                                       std::mt19937_64& rng, double noise_scale) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  // Per-unit wear curve and small constant offsets (initial condition spread).
  const double exponent = 1.6 + 0.4 * uni(rng);
  std::array<double, kNumSensors> offset{};
  for (int s = 0; s < kNumSensors; ++s) {
    offset[s] = kChannels[s].amp == 0.0 ? 0.0 : 0.4 * kChannels[s].noise * gauss(rng);
  }

  std::vector<EngineCycle> rows;
  rows.reserve(observed);
  for (int c = 1; c <= observed; ++c) {
    EngineCycle row;
    row.unit_id = unit_id;
    row.cycle = c;
    row.settings[0] = 0.0015 * gauss(rng);
    row.settings[1] = 0.0008 * gauss(rng);
    row.settings[2] = 100.0;
    const double wear =
        std::pow(static_cast<double>(c) / static_cast<double>(life), exponent);
    for (int s = 0; s < kNumSensors; ++s) {
      const Channel& ch = kChannels[s];
      double v = ch.base + offset[s] + ch.amp * wear;
      if (ch.noise > 0.0) v += noise_scale * ch.noise * gauss(rng);
      // Round like the published files (4 decimals is the finest they use).
      row.sensors[s] = std::round(v * 1e4) / 1e4;
    }
    row.settings[0] = std::round(row.settings[0] * 1e4) / 1e4;
    row.settings[1] = std::round(row.settings[1] * 1e4) / 1e4;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

SimFleet simulate_fleet(const SimConfig& cfg) {
  if (cfg.train_units < 1 || cfg.test_units < 0) {
    throw Error("simulate_fleet: unit counts out of range");
  }
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  const auto draw_life = [&]() {
    const double mid = 0.5 * (cfg.min_life + cfg.max_life);
    const double spread = 0.22 * (cfg.max_life - cfg.min_life);
    const double t = std::clamp(mid + spread * gauss(rng),
                                static_cast<double>(cfg.min_life),
                                static_cast<double>(cfg.max_life));
    return static_cast<int>(std::lround(t));
  };

  SimFleet fleet;
  for (int u = 1; u <= cfg.train_units; ++u) {
    const int life = draw_life();
    fleet.train.add_unit(u, simulate_unit(u, life, life, rng, cfg.noise_scale));
  }
  for (int u = 1; u <= cfg.test_units; ++u) {
    const int life = draw_life();
    // Observed prefix: between 20% and 95% of the life, so some test units
    // are shorter than a 50-cycle window.
    const int observed =
        std::max(15, static_cast<int>(std::lround(life * (0.20 + 0.75 * uni(rng)))));
    fleet.test.add_unit(u, simulate_unit(u, life, observed, rng, cfg.noise_scale));
    fleet.truth[u] = life - observed;
  }
  return fleet;
}

namespace {

void write_cycle_rows(const FleetData& fleet, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  char buf[64];
  for (int id : fleet.unit_ids()) {
    for (const EngineCycle& row : fleet.unit(id)) {
      out << row.unit_id << ' ' << row.cycle;
      for (double s : row.settings) {
        std::snprintf(buf, sizeof(buf), " %.4f", s);
        out << buf;
      }
      for (double s : row.sensors) {
        std::snprintf(buf, sizeof(buf), " %.4f", s);
        out << buf;
      }
      out << "  \n";  // the published files end every line with two spaces
    }
  }
}

}  // namespace

void write_fleet_files(const SimFleet& fleet, const std::string& dir,
                       const std::string& subset) {
  std::filesystem::create_directories(dir);
  write_cycle_rows(fleet.train, dir + "/train_" + subset + ".txt");
  write_cycle_rows(fleet.test, dir + "/test_" + subset + ".txt");
  std::ofstream rul(dir + "/RUL_" + subset + ".txt", std::ios::binary);
  if (!rul) throw Error("cannot write RUL file in " + dir);
  for (const auto& [id, v] : fleet.truth) rul << v << " \n";
}

}  // namespace rulkit::sim
