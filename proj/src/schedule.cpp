#include "tsdc/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "tsdc/physics.hpp"

namespace tsdc {

using nlohmann::json;

bool operator==(const Schedule& a, const Schedule& b) {
  return a.route == b.route && a.durations == b.durations;
}

const char* to_string(Violation v) {
  switch (v) {
    case Violation::Energy: return "ENERGY";
    case Violation::MissionTime: return "MISSION_TIME";
    case Violation::RouteStructure: return "ROUTE_STRUCTURE";
    case Violation::DurationSign: return "DURATION_SIGN";
    case Violation::CollectionBounds: return "COLLECTION_BOUNDS";
  }
  return "?";
}

int request_slot(const AccessPoint& ap, double slot_length, int mission_slots) {
  if (ap.initial_data >= ap.threshold) return 0;
  const double per_slot = ap.growth_rate * slot_length;
  if (per_slot <= 0) return mission_slots;
  const double slots = std::ceil((ap.threshold - ap.initial_data) / per_slot);
  if (slots >= static_cast<double>(mission_slots)) return mission_slots;
  return static_cast<int>(slots);
}

ApKinetics compute_kinetics(const Instance& inst, const AccessPoint& ap) {
  ApKinetics k;
  k.growth_per_slot = ap.growth_rate * inst.uav.slot_length;
  k.rate_per_slot =
      physics::transmission_rate(inst.uav.radio, ap.tx_power, inst.uav.altitude_link) *
      inst.uav.slot_length;
  k.request_slot = request_slot(ap, inst.uav.slot_length, inst.uav.mission_slots);
  k.headroom_slots = physics::overflow_deadline(ap, inst.uav.slot_length, inst.uav.mission_slots);
  k.deadline = k.request_slot + k.headroom_slots;
  k.initial_data = ap.initial_data;
  k.capacity = ap.capacity;
  k.threshold = ap.threshold;
  return k;
}

std::vector<int> build_queue(const Instance& inst) {
  std::vector<std::pair<int, int>> order; // (request slot, id)
  for (const auto& ap : inst.aps) {
    const int q = request_slot(ap, inst.uav.slot_length, inst.uav.mission_slots);
    if (q < inst.uav.mission_slots) order.emplace_back(q, ap.id);
  }
  std::sort(order.begin(), order.end());
  std::vector<int> ids;
  ids.reserve(order.size());
  for (const auto& [q, id] : order) ids.push_back(id);
  return ids;
}

namespace {

// Structural screening shared by evaluate (throws) and feasibility_report
// (collects codes).
struct StructuralState {
  bool route_ok = true;
  bool durations_ok = true;
};

StructuralState check_structure(const Instance& inst, const Schedule& s) {
  StructuralState st;
  const auto& r = s.route;
  if (r.size() < 2 || r.front() != 0 || r.back() != 0) {
    st.route_ok = false;
  } else {
    std::vector<char> seen(static_cast<std::size_t>(inst.ap_count()) + 1, 0);
    for (std::size_t k = 1; k + 1 < r.size(); ++k) {
      const int id = r[k];
      if (id < 1 || id > inst.ap_count() || seen[static_cast<std::size_t>(id)]) {
        st.route_ok = false;
        break;
      }
      seen[static_cast<std::size_t>(id)] = 1;
    }
  }
  if (s.durations.size() != static_cast<std::size_t>(std::max(0, s.visit_count())))
    st.route_ok = false;
  for (int d : s.durations)
    if (d < 0) st.durations_ok = false;
  return st;
}

void require_structure(const Instance& inst, const Schedule& s) {
  const auto st = check_structure(inst, s);
  if (!st.route_ok)
    throw std::invalid_argument("schedule route is structurally invalid");
  if (!st.durations_ok)
    throw std::invalid_argument("schedule has a negative duration");
}

void finish_evaluation(const Instance& inst, Evaluation& ev) {
  ev.total_collected = 0.0;
  ev.total_overflow = 0.0;
  for (std::size_t k = 0; k < ev.collected_per_ap.size(); ++k) {
    ev.total_collected += ev.collected_per_ap[k];
    ev.total_overflow += ev.overflow_per_ap[k];
  }
  ev.objective = ev.total_collected - inst.penalty * ev.total_overflow;
  const double fly_power = physics::propulsion_power(inst.uav.energy, inst.uav.speed);
  const double hover_power = physics::propulsion_power(inst.uav.energy, 0.0);
  ev.energy_used =
      fly_power * inst.uav.slot_length * static_cast<double>(ev.flight_slots_used) +
      hover_power * inst.uav.slot_length * static_cast<double>(ev.service_slots_used);
}

void append_hard_violations(const Instance& inst, Evaluation& ev) {
  if (ev.energy_used > inst.uav.battery) ev.violations.push_back(Violation::Energy);
  if (ev.flight_slots_used + ev.service_slots_used > inst.uav.mission_slots)
    ev.violations.push_back(Violation::MissionTime);
}

// Eq.-(7)-style check on actively served, not-yet-overflowed APs: the visit
// must bring the buffer to the threshold or below. APs whose link cannot
// outrun their growth are exempt (they are visitable but not drainable).
void append_collection_bounds(Evaluation& ev, const std::vector<const ApKinetics*>& kin,
                              const std::vector<int>& durations) {
  for (std::size_t k = 0; k < kin.size(); ++k) {
    const auto& ap = *kin[k];
    if (durations[k] <= 0 || ev.state[k] != 0) continue;
    if (ap.rate_per_slot <= ap.growth_per_slot) continue;
    const double buffer = ap.buffer_at(ev.arrival[k]);
    if (buffer - ev.collected_per_ap[k] > ap.threshold) {
      ev.violations.push_back(Violation::CollectionBounds);
      return;
    }
  }
}

} // namespace

Evaluation evaluate(const Instance& inst, const Schedule& sched) {
  require_structure(inst, sched);
  const int n = sched.visit_count();

  Evaluation ev;
  ev.arrival.resize(static_cast<std::size_t>(n));
  ev.state.resize(static_cast<std::size_t>(n));
  ev.collected_per_ap.resize(static_cast<std::size_t>(n));
  ev.overflow_per_ap.resize(static_cast<std::size_t>(n));

  std::vector<ApKinetics> kin_store;
  kin_store.reserve(static_cast<std::size_t>(n));
  std::vector<const ApKinetics*> kin;
  for (int k = 0; k < n; ++k) {
    kin_store.push_back(compute_kinetics(inst, inst.ap(sched.route[static_cast<std::size_t>(k) + 1])));
  }
  for (const auto& k : kin_store) kin.push_back(&k);

  long long clock = 0;
  int prev = 0;
  for (int k = 0; k < n; ++k) {
    const int id = sched.route[static_cast<std::size_t>(k) + 1];
    const int fly = physics::flight_slots(inst.node_location(prev), inst.node_location(id),
                                          inst.uav.speed, inst.uav.slot_length);
    ev.flight_slots_used += fly;
    clock += fly;
    ev.arrival[static_cast<std::size_t>(k)] = clock;
    const auto& ap = *kin[static_cast<std::size_t>(k)];
    const long long t = clock;
    const int d = sched.durations[static_cast<std::size_t>(k)];
    ev.state[static_cast<std::size_t>(k)] = t > ap.deadline ? 1 : 0;
    ev.overflow_per_ap[static_cast<std::size_t>(k)] = ap.overflow_by(t);
    ev.collected_per_ap[static_cast<std::size_t>(k)] = ap.collected(d, ap.buffer_at(t));
    ev.service_slots_used += d;
    clock += d;
    prev = id;
  }
  const int back = physics::flight_slots(inst.node_location(prev), inst.node_location(0),
                                         inst.uav.speed, inst.uav.slot_length);
  ev.flight_slots_used += back;

  finish_evaluation(inst, ev);
  append_hard_violations(inst, ev);
  append_collection_bounds(ev, kin, sched.durations);
  ev.feasible = ev.violations.empty();
  return ev;
}

Evaluation simulate_slots(const Instance& inst, const Schedule& sched) {
  require_structure(inst, sched);
  const int n = sched.visit_count();

  Evaluation ev;
  ev.arrival.assign(static_cast<std::size_t>(n), 0);
  ev.state.assign(static_cast<std::size_t>(n), 0);
  ev.collected_per_ap.assign(static_cast<std::size_t>(n), 0.0);
  ev.overflow_per_ap.assign(static_cast<std::size_t>(n), 0.0);

  // Deadlines rediscovered by stepping value tests rather than the
  // ceil/floor formulas: walk the buffer forward to the threshold crossing,
  // then walk the headroom until one more slot of growth would not fit.
  const int T = inst.uav.mission_slots;
  std::vector<ApKinetics> kin_store;
  std::vector<long long> stepped_deadline(static_cast<std::size_t>(n), 0);
  for (int k = 0; k < n; ++k) {
    const auto& ap = inst.ap(sched.route[static_cast<std::size_t>(k) + 1]);
    ApKinetics kk = compute_kinetics(inst, ap);
    long long req = T;
    for (long long u = 0; u <= T; ++u) {
      if (ap.initial_data + static_cast<double>(u) * kk.growth_per_slot >= ap.threshold) {
        req = std::min<long long>(u, T);
        break;
      }
    }
    long long head = 0;
    if (kk.growth_per_slot > 0) {
      while (head < T &&
             ap.threshold + static_cast<double>(head + 1) * kk.growth_per_slot <= ap.capacity)
        ++head;
    } else {
      head = T;
    }
    stepped_deadline[static_cast<std::size_t>(k)] = req + head;
    kin_store.push_back(kk);
  }

  // Phase machine: fly to each AP, hover for its duration, fly home. One
  // iteration of the inner loops is one slot. While an AP has not been
  // reached yet, every slot past its deadline loses one slot of growth.
  long long clock = 0;
  std::vector<long long> late_slots(static_cast<std::size_t>(n), 0);
  auto tick = [&](int first_pending) {
    ++clock;
    for (int j = first_pending; j < n; ++j)
      if (clock > stepped_deadline[static_cast<std::size_t>(j)])
        ++late_slots[static_cast<std::size_t>(j)];
  };

  int prev = 0;
  for (int k = 0; k < n; ++k) {
    const int id = sched.route[static_cast<std::size_t>(k) + 1];
    const int fly = physics::flight_slots(inst.node_location(prev), inst.node_location(id),
                                          inst.uav.speed, inst.uav.slot_length);
    for (int step = 0; step < fly; ++step) tick(k);
    ev.flight_slots_used += fly;
    ev.arrival[static_cast<std::size_t>(k)] = clock;

    const auto& ap = kin_store[static_cast<std::size_t>(k)];
    const double buffer = ap.buffer_at(clock);
    ev.state[static_cast<std::size_t>(k)] = late_slots[static_cast<std::size_t>(k)] > 0 ? 1 : 0;
    ev.overflow_per_ap[static_cast<std::size_t>(k)] =
        static_cast<double>(late_slots[static_cast<std::size_t>(k)]) * ap.growth_per_slot;

    const int d = sched.durations[static_cast<std::size_t>(k)];
    long long served = 0;
    for (int step = 0; step < d; ++step) {
      tick(k + 1);
      ++served;
    }
    ev.service_slots_used += served;
    ev.collected_per_ap[static_cast<std::size_t>(k)] = ap.collected(served, buffer);
    prev = id;
  }
  const int back = physics::flight_slots(inst.node_location(prev), inst.node_location(0),
                                         inst.uav.speed, inst.uav.slot_length);
  for (int step = 0; step < back; ++step) tick(n);
  ev.flight_slots_used += back;

  std::vector<const ApKinetics*> kin;
  for (const auto& k : kin_store) kin.push_back(&k);
  finish_evaluation(inst, ev);
  append_hard_violations(inst, ev);
  append_collection_bounds(ev, kin, sched.durations);
  ev.feasible = ev.violations.empty();
  return ev;
}

std::vector<Violation> feasibility_report(const Instance& inst, const Schedule& sched) {
  const auto st = check_structure(inst, sched);
  std::vector<Violation> out;
  if (!st.route_ok) out.push_back(Violation::RouteStructure);
  if (!st.durations_ok) out.push_back(Violation::DurationSign);
  if (!out.empty()) return out;
  return evaluate(inst, sched).violations;
}

std::string evaluation_to_json(const Evaluation& ev, int indent) {
  json j;
  j["schema"] = 1;
  j["arrival"] = ev.arrival;
  j["state"] = ev.state;
  j["collected_per_ap"] = ev.collected_per_ap;
  j["overflow_per_ap"] = ev.overflow_per_ap;
  j["total_collected"] = ev.total_collected;
  j["total_overflow"] = ev.total_overflow;
  j["objective"] = ev.objective;
  j["energy_used"] = ev.energy_used;
  j["flight_slots_used"] = ev.flight_slots_used;
  j["service_slots_used"] = ev.service_slots_used;
  j["feasible"] = ev.feasible;
  auto codes = json::array();
  for (auto v : ev.violations) codes.push_back(to_string(v));
  j["violations"] = codes;
  return j.dump(indent);
}

std::string schedule_to_json(const Schedule& sched, int indent) {
  json j;
  j["schema"] = 1;
  j["route"] = sched.route;
  j["durations"] = sched.durations;
  return j.dump(indent);
}

Schedule schedule_from_json(const std::string& text) {
  const json j = json::parse(text);
  Schedule s;
  s.route = j.at("route").get<std::vector<int>>();
  s.durations = j.at("durations").get<std::vector<int>>();
  return s;
}

} // namespace tsdc
