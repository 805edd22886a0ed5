#pragma once

#include <string>
#include <vector>

#include "tsdc/instance.hpp"

namespace tsdc {

// A solution: visit order (starting and ending at node 0, interior AP ids
// distinct) plus one collection duration per visited AP.
struct Schedule {
  std::vector<int> route = {0, 0};
  std::vector<int> durations;

  int visit_count() const {
    return route.size() >= 2 ? static_cast<int>(route.size()) - 2 : 0;
  }
};

bool operator==(const Schedule& a, const Schedule& b);

enum class Violation {
  Energy,
  MissionTime,
  RouteStructure,
  DurationSign,
  CollectionBounds,
};

const char* to_string(Violation v);

struct Evaluation {
  std::vector<long long> arrival;       // slot of arrival, per visited AP
  std::vector<int> state;               // 0 collecting, 1 overflowed at arrival
  std::vector<double> collected_per_ap;
  std::vector<double> overflow_per_ap;
  double total_collected = 0.0;
  double total_overflow = 0.0;
  double objective = 0.0;               // collected - penalty * overflow
  double energy_used = 0.0;
  long long flight_slots_used = 0;
  long long service_slots_used = 0;
  bool feasible = true;
  std::vector<Violation> violations;
};

// Per-AP slot kinetics shared by the evaluator, the slot simulator, the
// duration DP and the MILP exporter. All data arithmetic downstream is
// phrased over these quantities with one fixed expression per value, which
// is what makes the closed-form evaluator and the slot simulator agree
// bit-for-bit.
struct ApKinetics {
  double growth_per_slot = 0.0;   // alpha * tau
  double rate_per_slot = 0.0;     // R * tau
  long long request_slot = 0;     // first slot at or past the threshold (capped at T)
  long long headroom_slots = 0;   // overflow_deadline (capped at T)
  long long deadline = 0;         // request_slot + headroom_slots
  double initial_data = 0.0;
  double capacity = 0.0;
  double threshold = 0.0;

  // Buffer at arrival slot t, capped at capacity.
  double buffer_at(long long t) const {
    const double grown = initial_data + static_cast<double>(t) * growth_per_slot;
    return grown < capacity ? grown : capacity;
  }
  // Data handed over during d collection slots: the backlog present at
  // arrival drains at the link rate; growth during the visit stays buffered.
  double collected(long long d, double buffer_at_arrival) const {
    const double pumped = static_cast<double>(d) * rate_per_slot;
    return pumped < buffer_at_arrival ? pumped : buffer_at_arrival;
  }
  // Data lost between the deadline and arrival (zero before the deadline).
  double overflow_by(long long t) const {
    return t > deadline ? static_cast<double>(t - deadline) * growth_per_slot : 0.0;
  }
};

ApKinetics compute_kinetics(const Instance& inst, const AccessPoint& ap);

// First slot t with initial + alpha * tau * t >= threshold; 0 if already at
// threshold, mission_slots if it never gets there.
int request_slot(const AccessPoint& ap, double slot_length, int mission_slots);

// APs whose request arrives within the mission, ordered by request slot
// ascending, ties by id.
std::vector<int> build_queue(const Instance& inst);

// Closed-form scoring: arrivals from cumulative flight + service slots,
// state/overflow against the absolute deadline, collection from the buffer
// snapshot at arrival. Throws std::invalid_argument on a structurally
// broken schedule (unknown id, shape mismatch, duplicate visit).
Evaluation evaluate(const Instance& inst, const Schedule& sched);

// Independent slot-stepping oracle. Advances one slot at a time, driving the
// UAV phase machine and each AP's buffer; arrival slots, states, deadline
// crossings and slot totals all emerge from the stepping. Agrees exactly
// with evaluate() on collected, overflow, objective and energy.
Evaluation simulate_slots(const Instance& inst, const Schedule& sched);

// Violated constraint families; empty iff evaluate(...).feasible. Never
// throws: structural problems come back as codes.
std::vector<Violation> feasibility_report(const Instance& inst, const Schedule& sched);

// JSON forms used by the CLI and bench harness.
std::string evaluation_to_json(const Evaluation& ev, int indent = -1);
std::string schedule_to_json(const Schedule& sched, int indent = -1);
Schedule schedule_from_json(const std::string& text);

} // namespace tsdc
