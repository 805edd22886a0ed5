#pragma once

#include <string>
#include <vector>

#include "tsdc/schedule.hpp"

namespace tsdc {

struct MilpVar {
  std::string name;
  double lb = 0.0;
  double ub = 0.0; // +inf allowed
  bool binary = false;
};

struct MilpTerm {
  int var = 0;
  double coef = 0.0;
};

struct MilpRow {
  std::string name;
  std::vector<MilpTerm> terms;
  char sense = 'L'; // 'L' <=, 'G' >=, 'E' =
  double rhs = 0.0;
};

// The exact single-trip collection MIP: arc binaries x, visit binaries y,
// overflow-state binaries s, served binaries z, arrival times t and
// durations Tc in slots, collected amounts c, linearized overflow o, and
// (for N >= 2) MTZ ordering variables u. Time big-M dominates 2T + the
// longest arc + the per-AP cap; data big-Ms are per-AP.
struct MilpModel {
  int n_aps = 0;
  double big_m = 0.0;
  std::vector<MilpVar> vars;
  std::vector<MilpRow> rows;
  std::vector<MilpTerm> objective; // maximized

  // family lookups (-1 = absent)
  std::vector<int> x_index; // (n+1)*(n+1), diagonal -1
  std::vector<int> y_index, s_index, t_index, tc_index, c_index, o_index, z_index, u_index;

  int x(int i, int j) const {
    return x_index[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_aps + 1) +
                   static_cast<std::size_t>(j)];
  }
};

MilpModel build_model(const Instance& inst, int per_ap_cap = 31);

// CPLEX-style LP text, byte-stable for equal input.
std::string write_lp(const MilpModel& model);

// Variable assignment induced by a schedule and its evaluation; satisfies
// every row whenever the schedule is feasible.
std::vector<double> induce_assignment(const MilpModel& model, const Instance& inst,
                                      const Schedule& sched, const Evaluation& ev);

struct RowViolation {
  std::string row;
  double lhs = 0.0;
  double rhs = 0.0;
  char sense = 'L';
};

// All rows violated by the assignment beyond a tiny tolerance.
std::vector<RowViolation> check_assignment(const MilpModel& model,
                                           const std::vector<double>& assignment);

double objective_value(const MilpModel& model, const std::vector<double>& assignment);

// Parses "name value" lines, follows the x arcs from the base and rebuilds
// the schedule (durations rounded to slots). Throws std::runtime_error on a
// structurally broken assignment: no departing arc, a revisit, or arcs left
// over after the walk (subtour).
Schedule read_solution(const MilpModel& model, const std::string& text);

} // namespace tsdc
