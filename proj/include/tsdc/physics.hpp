#pragma once

#include <span>

#include "tsdc/instance.hpp"

namespace tsdc::physics {

// Achievable rate in data units per unit time. LinearSnr mode reads
// `snr_or_power` as the linear SNR directly; Components mode assembles
// p * gain / (noise * H^2).
double transmission_rate(const RadioParams& radio, double snr_or_power, double altitude_link);

// Whole slots to fly between two points, rounded up; 0 iff the points
// coincide.
int flight_slots(const Location& a, const Location& b, double speed, double slot);

// Rotary-wing propulsion power at the given airspeed: blade profile +
// induced + parasite terms. Hover power is the v = 0 value.
double propulsion_power(const EnergyParams& e, double speed);

struct ArcCost {
  int flight_slots = 0;
  double flight_energy = 0.0;
};

// Slots and energy for the directed arc i -> j (0 = base).
ArcCost arc_cost(const Instance& inst, int i, int j);

// Slots from the instant the buffer reaches the threshold until it would
// pass capacity, i.e. headroom / per-slot growth, floored. Saturates at
// mission_slots (no growth, or deadlines beyond the horizon).
int overflow_deadline(const AccessPoint& ap, double slot_length, int mission_slots);

// Maximum total collection slots affordable after paying for the route's
// flight: floor((E_max - flight_energy) / hover-energy-per-slot), clamped to
// [0, T - flight_slots]. Guarded so flight + budget never exceeds E_max even
// when the division rounds up.
int service_budget(const Instance& inst, double route_flight_energy,
                   long long route_flight_slots);

struct RouteFlight {
  long long slots = 0;
  double energy = 0.0;
};

// Total flight slots and energy of base -> route... -> base. The energy is
// the canonical single-expression form P(v) * tau * slots that the evaluator
// and scheduler also use, so comparisons against budgets are bit-stable.
RouteFlight route_flight_cost(const Instance& inst, std::span<const int> interior_route);

} // namespace tsdc::physics
