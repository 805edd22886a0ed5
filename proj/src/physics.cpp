#include "tsdc/physics.hpp"

#include <cmath>
#include <stdexcept>

namespace tsdc::physics {

double transmission_rate(const RadioParams& radio, double snr_or_power, double altitude_link) {
  if (radio.bandwidth <= 0) throw std::invalid_argument("bandwidth must be positive");
  double snr;
  if (radio.channel_gain_mode == ChannelGainMode::LinearSnr) {
    snr = snr_or_power;
  } else {
    if (radio.noise_power <= 0) throw std::invalid_argument("noise power must be positive");
    snr = snr_or_power * radio.channel_gain / (radio.noise_power * altitude_link * altitude_link);
  }
  if (snr < 0) snr = 0;
  return radio.bandwidth * std::log2(1.0 + snr);
}

int flight_slots(const Location& a, const Location& b, double speed, double slot) {
  if (speed <= 0 || slot <= 0) throw std::invalid_argument("speed and slot must be positive");
  const double dist = std::hypot(a.x - b.x, a.y - b.y);
  if (dist == 0) return 0;
  return static_cast<int>(std::ceil(dist / (speed * slot)));
}

double propulsion_power(const EnergyParams& e, double v) {
  const double v2 = v * v;
  const double blade = e.blade_profile_power * (1.0 + 3.0 * v2 / (e.tip_speed * e.tip_speed));
  const double v0sq = e.rotor_induced_speed * e.rotor_induced_speed;
  const double induced =
      e.induced_power *
      std::sqrt(std::sqrt(1.0 + v2 * v2 / (4.0 * v0sq * v0sq)) - v2 / (2.0 * v0sq));
  const double parasite = 0.5 * e.fuselage_drag_ratio * e.air_density * e.rotor_solidity *
                          e.rotor_disc_area * v2 * v;
  return blade + induced + parasite;
}

ArcCost arc_cost(const Instance& inst, int i, int j) {
  if (!inst.valid_node(i) || !inst.valid_node(j))
    throw std::invalid_argument("unknown node id");
  const int slots = flight_slots(inst.node_location(i), inst.node_location(j), inst.uav.speed,
                                 inst.uav.slot_length);
  const double power = propulsion_power(inst.uav.energy, inst.uav.speed);
  return {slots, power * inst.uav.slot_length * static_cast<double>(slots)};
}

int overflow_deadline(const AccessPoint& ap, double slot_length, int mission_slots) {
  if (ap.growth_rate <= 0) return mission_slots;
  const double per_slot = ap.growth_rate * slot_length;
  const double slots = std::floor((ap.capacity - ap.threshold) / per_slot);
  if (slots >= static_cast<double>(mission_slots)) return mission_slots;
  return static_cast<int>(slots);
}

int service_budget(const Instance& inst, double route_flight_energy,
                   long long route_flight_slots) {
  const double hover = propulsion_power(inst.uav.energy, 0.0) * inst.uav.slot_length;
  const double residual = inst.uav.battery - route_flight_energy;
  if (residual <= 0) return 0;
  // nudge quotients that are integral in exact arithmetic over the floor,
  // then let the canonical energy expression have the final word
  long long budget = static_cast<long long>(std::floor(residual / hover + 1e-9));
  while (budget > 0 &&
         route_flight_energy + static_cast<double>(budget) * hover > inst.uav.battery)
    --budget;
  const long long slot_room = static_cast<long long>(inst.uav.mission_slots) - route_flight_slots;
  budget = std::min(budget, slot_room);
  if (budget < 0) budget = 0;
  return static_cast<int>(budget);
}

RouteFlight route_flight_cost(const Instance& inst, std::span<const int> interior_route) {
  long long slots = 0;
  int prev = 0;
  for (int id : interior_route) {
    slots += flight_slots(inst.node_location(prev), inst.node_location(id), inst.uav.speed,
                          inst.uav.slot_length);
    prev = id;
  }
  slots += flight_slots(inst.node_location(prev), inst.node_location(0), inst.uav.speed,
                        inst.uav.slot_length);
  const double power = propulsion_power(inst.uav.energy, inst.uav.speed);
  return {slots, power * inst.uav.slot_length * static_cast<double>(slots)};
}

} // namespace tsdc::physics
