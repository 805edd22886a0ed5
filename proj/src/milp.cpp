#include "tsdc/milp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "tsdc/physics.hpp"

namespace tsdc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct Builder {
  MilpModel m;

  int add_var(const std::string& name, double lb, double ub, bool binary) {
    m.vars.push_back({name, lb, ub, binary});
    return static_cast<int>(m.vars.size()) - 1;
  }
  void add_row(std::string name, std::vector<MilpTerm> terms, char sense, double rhs) {
    m.rows.push_back({std::move(name), std::move(terms), sense, rhs});
  }
};

} // namespace

MilpModel build_model(const Instance& inst, int per_ap_cap) {
  const int n = inst.ap_count();
  if (n < 1) throw std::invalid_argument("model needs at least one AP");

  Builder b;
  b.m.n_aps = n;

  std::vector<ApKinetics> kin(static_cast<std::size_t>(n) + 1);
  for (const auto& ap : inst.aps) kin[static_cast<std::size_t>(ap.id)] = compute_kinetics(inst, ap);

  std::vector<std::vector<int>> fly(static_cast<std::size_t>(n) + 1,
                                    std::vector<int>(static_cast<std::size_t>(n) + 1, 0));
  int max_arc = 0;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      if (i == j) continue;
      fly[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          physics::flight_slots(inst.node_location(i), inst.node_location(j), inst.uav.speed,
                                inst.uav.slot_length);
      max_arc = std::max(max_arc, fly[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }

  const double T = static_cast<double>(inst.uav.mission_slots);
  const double M = 2.0 * T + static_cast<double>(max_arc) + static_cast<double>(per_ap_cap);
  b.m.big_m = M;

  // variables, fixed family order
  b.m.x_index.assign(static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(n + 1), -1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      if (i == j) continue;
      b.m.x_index[static_cast<std::size_t>(i) * static_cast<std::size_t>(n + 1) +
                  static_cast<std::size_t>(j)] =
          b.add_var("x_" + std::to_string(i) + "_" + std::to_string(j), 0, 1, true);
    }
  auto family = [&](const char* prefix, double lb, double ub, bool binary) {
    std::vector<int> idx(static_cast<std::size_t>(n) + 1, -1);
    for (int i = 1; i <= n; ++i)
      idx[static_cast<std::size_t>(i)] = b.add_var(prefix + std::to_string(i), lb, ub, binary);
    return idx;
  };
  b.m.y_index = family("y_", 0, 1, true);
  b.m.s_index = family("s_", 0, 1, true);
  b.m.z_index = family("z_", 0, 1, true);
  b.m.t_index = family("t_", 0, M, false);
  b.m.tc_index = family("Tc_", 0, T, false);
  b.m.c_index.assign(static_cast<std::size_t>(n) + 1, -1);
  for (int i = 1; i <= n; ++i)
    b.m.c_index[static_cast<std::size_t>(i)] =
        b.add_var("c_" + std::to_string(i), 0, inst.ap(i).capacity, false);
  b.m.o_index = family("o_", 0, kInf, false);
  if (n >= 2) b.m.u_index = family("u_", 1, static_cast<double>(n), false);
  else b.m.u_index.assign(static_cast<std::size_t>(n) + 1, -1);

  const double hover_e = physics::propulsion_power(inst.uav.energy, 0.0) * inst.uav.slot_length;
  const double fly_e = physics::propulsion_power(inst.uav.energy, inst.uav.speed) *
                       inst.uav.slot_length;

  // objective: collected minus penalized overflow
  for (int i = 1; i <= n; ++i) {
    b.m.objective.push_back({b.m.c_index[static_cast<std::size_t>(i)], 1.0});
    b.m.objective.push_back({b.m.o_index[static_cast<std::size_t>(i)], -inst.penalty});
  }

  // energy budget over collection hover and flown arcs
  {
    std::vector<MilpTerm> terms;
    for (int i = 1; i <= n; ++i)
      terms.push_back({b.m.tc_index[static_cast<std::size_t>(i)], hover_e});
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        if (i == j) continue;
        terms.push_back({b.m.x(i, j),
                         fly_e * static_cast<double>(
                                     fly[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])});
      }
    b.add_row("r_energy", std::move(terms), 'L', inst.uav.battery);
  }

  // arc-activated time coupling between APs, and departure legs from base
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      b.add_row("r_couple_" + std::to_string(i) + "_" + std::to_string(j),
                {{b.m.t_index[static_cast<std::size_t>(i)], 1.0},
                 {b.m.tc_index[static_cast<std::size_t>(i)], 1.0},
                 {b.m.t_index[static_cast<std::size_t>(j)], -1.0},
                 {b.m.x(i, j), M}},
                'L',
                M - static_cast<double>(fly[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
    }
  for (int j = 1; j <= n; ++j)
    b.add_row("r_depart_" + std::to_string(j),
              {{b.m.t_index[static_cast<std::size_t>(j)], 1.0}, {b.m.x(0, j), -M}}, 'G',
              static_cast<double>(fly[0][static_cast<std::size_t>(j)]) - M);

  // overflow-state detection against the absolute deadline
  for (int i = 1; i <= n; ++i) {
    const double dl = static_cast<double>(kin[static_cast<std::size_t>(i)].deadline);
    b.add_row("r_state_lo_" + std::to_string(i),
              {{b.m.t_index[static_cast<std::size_t>(i)], 1.0},
               {b.m.s_index[static_cast<std::size_t>(i)], -M}},
              'G', dl + 1.0 - M);
    b.add_row("r_state_hi_" + std::to_string(i),
              {{b.m.t_index[static_cast<std::size_t>(i)], 1.0},
               {b.m.s_index[static_cast<std::size_t>(i)], -M}},
              'L', dl);
  }

  // collected volume: within the grown buffer, the link budget, and only
  // when visited; drained to the threshold when actively served in time
  for (int i = 1; i <= n; ++i) {
    const auto& k = kin[static_cast<std::size_t>(i)];
    const auto& ap = inst.ap(i);
    const std::string id = std::to_string(i);
    b.add_row("r_collect_growth_" + id,
              {{b.m.c_index[static_cast<std::size_t>(i)], 1.0},
               {b.m.t_index[static_cast<std::size_t>(i)], -k.growth_per_slot}},
              'L', ap.initial_data);
    b.add_row("r_collect_rate_" + id,
              {{b.m.c_index[static_cast<std::size_t>(i)], 1.0},
               {b.m.tc_index[static_cast<std::size_t>(i)], -k.rate_per_slot}},
              'L', 0.0);
    b.add_row("r_collect_visit_" + id,
              {{b.m.c_index[static_cast<std::size_t>(i)], 1.0},
               {b.m.y_index[static_cast<std::size_t>(i)], -ap.capacity}},
              'L', 0.0);
    if (k.rate_per_slot > k.growth_per_slot) {
      const double md = std::max(ap.capacity, ap.initial_data + k.growth_per_slot * M);
      b.add_row("r_collect_drain_" + id,
                {{b.m.t_index[static_cast<std::size_t>(i)], k.growth_per_slot},
                 {b.m.c_index[static_cast<std::size_t>(i)], -1.0},
                 {b.m.z_index[static_cast<std::size_t>(i)], md},
                 {b.m.s_index[static_cast<std::size_t>(i)], -md}},
                'L', ap.threshold - ap.initial_data + md + k.growth_per_slot);
    }
    b.add_row("r_served_cap_" + id,
              {{b.m.tc_index[static_cast<std::size_t>(i)], 1.0},
               {b.m.z_index[static_cast<std::size_t>(i)], -M}},
              'L', 0.0);
    b.add_row("r_served_visit_" + id,
              {{b.m.z_index[static_cast<std::size_t>(i)], 1.0},
               {b.m.y_index[static_cast<std::size_t>(i)], -1.0}},
              'L', 0.0);
    const double mo = k.growth_per_slot * (M + static_cast<double>(k.deadline)) + 1.0;
    b.add_row("r_overflow_" + id,
              {{b.m.t_index[static_cast<std::size_t>(i)], k.growth_per_slot},
               {b.m.o_index[static_cast<std::size_t>(i)], -1.0},
               {b.m.s_index[static_cast<std::size_t>(i)], mo}},
              'L', k.growth_per_slot * static_cast<double>(k.deadline) + mo);
  }

  // degree, flow conservation, and the base start/end
  for (int i = 1; i <= n; ++i) {
    std::vector<MilpTerm> deg;
    for (int j = 0; j <= n; ++j) {
      if (i == j) continue;
      deg.push_back({b.m.x(i, j), 1.0});
    }
    deg.push_back({b.m.y_index[static_cast<std::size_t>(i)], -1.0});
    b.add_row("r_degree_" + std::to_string(i), std::move(deg), 'E', 0.0);

    std::vector<MilpTerm> flow;
    for (int j = 0; j <= n; ++j) {
      if (i == j) continue;
      flow.push_back({b.m.x(j, i), 1.0});
      flow.push_back({b.m.x(i, j), -1.0});
    }
    b.add_row("r_flow_" + std::to_string(i), std::move(flow), 'E', 0.0);
  }
  {
    std::vector<MilpTerm> out, in;
    for (int j = 1; j <= n; ++j) {
      out.push_back({b.m.x(0, j), 1.0});
      in.push_back({b.m.x(j, 0), 1.0});
    }
    b.add_row("r_depart_base", std::move(out), 'E', 1.0);
    b.add_row("r_return_base", std::move(in), 'E', 1.0);
  }

  // position ordering kills subtours even across zero-length arcs
  if (n >= 2) {
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        b.add_row("r_order_" + std::to_string(i) + "_" + std::to_string(j),
                  {{b.m.u_index[static_cast<std::size_t>(i)], 1.0},
                   {b.m.u_index[static_cast<std::size_t>(j)], -1.0},
                   {b.m.x(i, j), static_cast<double>(n)}},
                  'L', static_cast<double>(n) - 1.0);
      }
  }

  return b.m;
}

std::string write_lp(const MilpModel& model) {
  std::string out;
  out += "\\ TSDC single-trip collection model\n";
  out += "Maximize\n obj:";
  bool first = true;
  for (const auto& term : model.objective) {
    const double c = term.coef;
    out += first ? (c < 0 ? " - " : " ") : (c < 0 ? " - " : " + ");
    out += fmt(std::abs(c)) + " " + model.vars[static_cast<std::size_t>(term.var)].name;
    first = false;
  }
  out += "\nSubject To\n";
  for (const auto& row : model.rows) {
    out += " " + row.name + ":";
    bool f = true;
    for (const auto& term : row.terms) {
      const double c = term.coef;
      out += f ? (c < 0 ? " - " : " ") : (c < 0 ? " - " : " + ");
      out += fmt(std::abs(c)) + " " + model.vars[static_cast<std::size_t>(term.var)].name;
      f = false;
    }
    out += row.sense == 'L' ? " <= " : (row.sense == 'G' ? " >= " : " = ");
    out += fmt(row.rhs) + "\n";
  }
  out += "Bounds\n";
  for (const auto& v : model.vars) {
    if (v.binary) continue;
    if (std::isinf(v.ub))
      out += " " + v.name + " >= " + fmt(v.lb) + "\n";
    else
      out += " " + fmt(v.lb) + " <= " + v.name + " <= " + fmt(v.ub) + "\n";
  }
  out += "Binaries\n";
  for (const auto& v : model.vars)
    if (v.binary) out += " " + v.name + "\n";
  out += "End\n";
  return out;
}

std::vector<double> induce_assignment(const MilpModel& model, const Instance& inst,
                                      const Schedule& sched, const Evaluation& ev) {
  std::vector<double> a(model.vars.size(), 0.0);
  const int n = model.n_aps;
  // defaults for untouched APs
  for (int i = 1; i <= n; ++i)
    if (model.u_index[static_cast<std::size_t>(i)] >= 0)
      a[static_cast<std::size_t>(model.u_index[static_cast<std::size_t>(i)])] = 1.0;

  int prev = 0;
  for (int k = 0; k < sched.visit_count(); ++k) {
    const int id = sched.route[static_cast<std::size_t>(k) + 1];
    a[static_cast<std::size_t>(model.x(prev, id))] = 1.0;
    a[static_cast<std::size_t>(model.y_index[static_cast<std::size_t>(id)])] = 1.0;
    a[static_cast<std::size_t>(model.s_index[static_cast<std::size_t>(id)])] =
        ev.state[static_cast<std::size_t>(k)];
    a[static_cast<std::size_t>(model.t_index[static_cast<std::size_t>(id)])] =
        static_cast<double>(ev.arrival[static_cast<std::size_t>(k)]);
    const int d = sched.durations[static_cast<std::size_t>(k)];
    a[static_cast<std::size_t>(model.tc_index[static_cast<std::size_t>(id)])] =
        static_cast<double>(d);
    a[static_cast<std::size_t>(model.c_index[static_cast<std::size_t>(id)])] =
        ev.collected_per_ap[static_cast<std::size_t>(k)];
    a[static_cast<std::size_t>(model.o_index[static_cast<std::size_t>(id)])] =
        ev.overflow_per_ap[static_cast<std::size_t>(k)];
    a[static_cast<std::size_t>(model.z_index[static_cast<std::size_t>(id)])] = d > 0 ? 1.0 : 0.0;
    if (model.u_index[static_cast<std::size_t>(id)] >= 0)
      a[static_cast<std::size_t>(model.u_index[static_cast<std::size_t>(id)])] =
          static_cast<double>(k + 1);
    prev = id;
  }
  if (sched.visit_count() > 0) a[static_cast<std::size_t>(model.x(prev, 0))] = 1.0;
  (void)inst;
  return a;
}

std::vector<RowViolation> check_assignment(const MilpModel& model,
                                           const std::vector<double>& assignment) {
  std::vector<RowViolation> out;
  for (const auto& row : model.rows) {
    double lhs = 0.0;
    double scale = 1.0;
    for (const auto& term : row.terms) {
      lhs += term.coef * assignment[static_cast<std::size_t>(term.var)];
      scale = std::max(scale, std::abs(term.coef * assignment[static_cast<std::size_t>(term.var)]));
    }
    const double tol = 1e-9 * std::max(scale, std::abs(row.rhs)) + 1e-9;
    bool ok = true;
    if (row.sense == 'L') ok = lhs <= row.rhs + tol;
    else if (row.sense == 'G') ok = lhs >= row.rhs - tol;
    else ok = std::abs(lhs - row.rhs) <= tol;
    if (!ok) out.push_back({row.name, lhs, row.rhs, row.sense});
  }
  return out;
}

double objective_value(const MilpModel& model, const std::vector<double>& assignment) {
  double v = 0.0;
  for (const auto& term : model.objective)
    v += term.coef * assignment[static_cast<std::size_t>(term.var)];
  return v;
}

Schedule read_solution(const MilpModel& model, const std::string& text) {
  std::map<std::string, double> values;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line = line.substr(0, pos);
    std::istringstream ls(line);
    std::string name;
    double value;
    if (!(ls >> name)) continue;
    if (!(ls >> value))
      throw std::runtime_error("solution line " + std::to_string(lineno) + ": missing value");
    values[name] = value;
  }

  const int n = model.n_aps;
  auto x_val = [&](int i, int j) {
    const auto it = values.find(model.vars[static_cast<std::size_t>(model.x(i, j))].name);
    return it == values.end() ? 0.0 : it->second;
  };

  std::vector<int> next(static_cast<std::size_t>(n) + 1, -1);
  int active_arcs = 0;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      if (i == j) continue;
      if (x_val(i, j) > 0.5) {
        if (next[static_cast<std::size_t>(i)] != -1)
          throw std::runtime_error("node " + std::to_string(i) + " has two departing arcs");
        next[static_cast<std::size_t>(i)] = j;
        ++active_arcs;
      }
    }
  if (next[0] == -1) throw std::runtime_error("no departing arc from base");

  Schedule out;
  out.route.clear();
  out.route.push_back(0);
  std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
  int cur = 0;
  int used = 0;
  while (true) {
    const int nx = next[static_cast<std::size_t>(cur)];
    if (nx == -1)
      throw std::runtime_error("route stops at node " + std::to_string(cur) +
                               " without returning to base");
    ++used;
    if (nx == 0) {
      out.route.push_back(0);
      break;
    }
    if (seen[static_cast<std::size_t>(nx)])
      throw std::runtime_error("node " + std::to_string(nx) + " visited twice");
    seen[static_cast<std::size_t>(nx)] = 1;
    out.route.push_back(nx);
    cur = nx;
  }
  if (used != active_arcs)
    throw std::runtime_error("disconnected subtour: " + std::to_string(active_arcs - used) +
                             " arc(s) not reachable from base");

  for (std::size_t k = 1; k + 1 < out.route.size(); ++k) {
    const int id = out.route[k];
    const auto it =
        values.find(model.vars[static_cast<std::size_t>(
                                   model.tc_index[static_cast<std::size_t>(id)])].name);
    const double tc = it == values.end() ? 0.0 : it->second;
    out.durations.push_back(static_cast<int>(std::llround(tc)));
  }
  return out;
}

} // namespace tsdc
