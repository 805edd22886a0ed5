#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tsdc {

struct Location {
  double x = 0.0;
  double y = 0.0;
};

inline bool operator==(const Location& a, const Location& b) {
  return a.x == b.x && a.y == b.y;
}

// One edge node with a growing data buffer. The buffer gains
// growth_rate * slot_length data units per slot; once it crosses
// `threshold` the AP asks to be collected, and once it would pass
// `capacity` data starts to be lost.
struct AccessPoint {
  int id = 0;               // 1-based, dense
  Location location;
  double growth_rate = 0.0; // data per unit time (alpha)
  double initial_data = 0.0;
  double capacity = 0.0;    // D_max
  double threshold = 0.0;   // D_th
  double tx_power = 1.0;    // linear SNR in LinearSnr mode, transmit power otherwise
};

bool operator==(const AccessPoint& a, const AccessPoint& b);

// Rotary-wing propulsion model parameters.
struct EnergyParams {
  double blade_profile_power = 79.85; // P0
  double induced_power = 88.63;       // Pi
  double tip_speed = 120.0;           // Utip
  double rotor_induced_speed = 4.03;  // v0
  double fuselage_drag_ratio = 0.6;   // d0
  double air_density = 1.225;         // rho
  double rotor_solidity = 0.05;       // s
  double rotor_disc_area = 0.503;     // A
};

bool operator==(const EnergyParams& a, const EnergyParams& b);

enum class ChannelGainMode { LinearSnr, Components };

// Link model. In LinearSnr mode each AP's tx_power field is read directly
// as its linear SNR; in Components mode the free-space budget
// p * gain / (noise * H^2) is assembled from the pieces below.
struct RadioParams {
  double bandwidth = 1000.0;
  ChannelGainMode channel_gain_mode = ChannelGainMode::LinearSnr;
  double channel_gain = 1.0; // linear gain at 1 m reference (Components mode)
  double noise_power = 1.0;  // linear noise power (Components mode)
};

bool operator==(const RadioParams& a, const RadioParams& b);

struct UavParams {
  double speed = 10.0;       // v
  double battery = 0.0;      // E_max
  int mission_slots = 1;     // T
  double slot_length = 1.0;  // tau, seconds per slot
  double altitude_link = 1.0; // height over the AP antenna
  EnergyParams energy;
  RadioParams radio;
};

bool operator==(const UavParams& a, const UavParams& b);

// A full problem datum. APs are stored in ascending id order (ids are a
// permutation of 1..N); node id 0 is the base station. Instances are
// immutable after construction and safe to share across threads.
struct Instance {
  std::string name;
  Location base;
  std::vector<AccessPoint> aps;
  UavParams uav;
  double penalty = 0.0; // delta, weight on overflowed data

  int ap_count() const { return static_cast<int>(aps.size()); }

  const AccessPoint& ap(int id) const;     // throws on unknown id
  Location node_location(int id) const;    // 0 = base
  bool valid_node(int id) const { return id >= 0 && id <= ap_count(); }
};

bool operator==(const Instance& a, const Instance& b);

// Raised by parse_instance with the offending line and field.
class ParseError : public std::runtime_error {
public:
  ParseError(int line, std::string field, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", " + field + ": " + what),
        line_(line), field_(std::move(field)) {}
  int line() const { return line_; }
  const std::string& field() const { return field_; }

private:
  int line_;
  std::string field_;
};

// Validates every type invariant; throws ParseError (line 0) on violation.
void validate_instance(const Instance& inst);

// Text format, line oriented:
//   TSDC 1
//   # name: <optional instance name>
//   UAV speed battery slots tau altitude P0 Pi Utip v0 d0 rho s A bandwidth penalty
//   BASE x y
//   AP id x y alpha D0 Dmax Dth snr        (one line per AP)
// '#' starts a comment. A JSON mirror with identical field names is accepted
// too (detected by a leading '{'), which also carries the Components-mode
// radio fields.
Instance parse_instance(const std::string& text);

// Canonical serialization: shortest round-trip float formatting, APs in id
// order. parse_instance(write_instance(i)) == i, and equal instances
// serialize byte-identically.
std::string write_instance(const Instance& inst);

// JSON mirror (field names match the types).
std::string write_instance_json(const Instance& inst);

enum class Layout { Clustered, Random, RandomClustered };

Layout layout_from_string(const std::string& s); // "clustered" / "random" / "random-clustered" (or C/R/RC)
const char* to_string(Layout layout);

// Parameter ranges for the generator. Data-space parameters are drawn on an
// integer lattice (growth rates integral, capacities multiples of 20,
// thresholds on the 0.05 fraction grid) so that slot-by-slot buffer
// arithmetic stays exact in doubles.
struct GeneratorProfile {
  double area = 700.0;        // square side; tenfold Solomon coordinate scale
  double speed = 10.0;
  double slot_length = 1.0;
  double altitude_link = 1.0;
  double bandwidth = 1000.0;
  double penalty = 15.0;
  int mission_slots = 2500;
  double battery = 0.0;       // 0 => by size class (37000/46000/132000/141000)
  std::pair<double, double> growth = {4.0, 8.0};
  std::pair<double, double> capacity = {4000.0, 12000.0};
  std::pair<double, double> threshold_fraction = {0.75, 0.90};
  std::pair<double, double> initial_fraction = {0.30, 0.70};
  std::pair<double, double> snr = {2.4, 6.4};
  EnergyParams energy;
};

// Deterministic in (layout, n_aps, seed, profile).
Instance generate_instance(Layout layout, int n_aps, std::uint64_t seed,
                           const GeneratorProfile& profile = {});

} // namespace tsdc
