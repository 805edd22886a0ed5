#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "lp_grammar.hpp"
#include "support.hpp"
#include "tsdc/baselines.hpp"
#include "tsdc/milp.hpp"

using namespace tsdc;

namespace {

int count_prefix(const MilpModel& m, const std::string& prefix) {
  int n = 0;
  for (const auto& v : m.vars)
    if (v.name.rfind(prefix, 0) == 0) ++n;
  return n;
}

int count_row_prefix(const MilpModel& m, const std::string& prefix) {
  int n = 0;
  for (const auto& r : m.rows)
    if (r.name.rfind(prefix, 0) == 0) ++n;
  return n;
}

} // namespace

TEST_CASE("variable families match the hand count for one ap") {
  const Instance inst = testing::small_instance(1, 4);
  const MilpModel m = build_model(inst);
  CHECK(count_prefix(m, "x_") == 2);
  CHECK(count_prefix(m, "y_") == 1);
  CHECK(count_prefix(m, "s_") == 1);
  CHECK(count_prefix(m, "t_") == 1);
  CHECK(count_prefix(m, "Tc_") == 1);
  CHECK(count_prefix(m, "c_") == 1);
  CHECK_THROWS_AS(build_model(Instance{}), std::invalid_argument);
}

TEST_CASE("one flow conservation row per ap") {
  const Instance inst = testing::small_instance(3, 6);
  const MilpModel m = build_model(inst);
  CHECK(count_row_prefix(m, "r_flow_") == 3);
  CHECK(count_row_prefix(m, "r_degree_") == 3);
  CHECK(count_row_prefix(m, "r_energy") == 1);
  CHECK(count_row_prefix(m, "r_depart_base") == 1);
  CHECK(count_row_prefix(m, "r_return_base") == 1);
}

TEST_CASE("lp text is byte-stable and passes the grammar check") {
  const Instance inst = testing::small_instance(3, 8);
  const MilpModel m = build_model(inst);
  const std::string a = write_lp(m);
  const std::string b = write_lp(build_model(inst));
  CHECK(a == b);
  std::string why;
  CHECK_MESSAGE(lp_grammar_ok(a, &why), why);
}

TEST_CASE("feasible schedules satisfy every generated row") {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const Instance inst = testing::small_instance(3 + static_cast<int>(seed % 3), 90 + seed);
    const MilpModel model = build_model(inst);
    const Schedule sched = greedy_deadline(inst);
    const Evaluation ev = evaluate(inst, sched);
    REQUIRE(ev.feasible);
    const auto assignment = induce_assignment(model, inst, sched, ev);
    const auto violations = check_assignment(model, assignment);
    for (const auto& v : violations)
      MESSAGE("row ", v.row, " lhs ", v.lhs, " rhs ", v.rhs);
    CHECK(violations.empty());
    CHECK(objective_value(model, assignment) == doctest::Approx(ev.objective).epsilon(1e-12));
    ++checked;
  }
  CHECK(checked == 8);
}

TEST_CASE("round trip through a written solution file") {
  const Instance inst = testing::small_instance(2, 12);
  const MilpModel model = build_model(inst);
  const Schedule sched = greedy_deadline(inst);
  REQUIRE(sched.visit_count() == 2);
  const Evaluation ev = evaluate(inst, sched);
  const auto assignment = induce_assignment(model, inst, sched, ev);

  std::string sol;
  for (std::size_t k = 0; k < model.vars.size(); ++k)
    sol += model.vars[k].name + " " + std::to_string(assignment[k]) + "\n";
  const Schedule back = read_solution(model, sol);
  CHECK(back.route == sched.route);
  CHECK(back.durations == sched.durations);
  CHECK(evaluate(inst, back).objective == ev.objective);
}

TEST_CASE("solution reading flags structural breakage") {
  const Instance inst = testing::small_instance(3, 13);
  const MilpModel model = build_model(inst);

  CHECK_THROWS_WITH_AS(read_solution(model, "y_1 1\n"), doctest::Contains("no departing arc"),
                       std::runtime_error);

  // base loop plus a detached 2-cycle between APs 2 and 3
  std::string subtour = "x_0_1 1\nx_1_0 1\nx_2_3 1\nx_3_2 1\nTc_1 2\n";
  CHECK_THROWS_WITH_AS(read_solution(model, subtour), doctest::Contains("subtour"),
                       std::runtime_error);

  std::string twice = "x_0_1 1\nx_1_2 1\nx_2_1 1\n";
  CHECK_THROWS_AS(read_solution(model, twice), std::runtime_error);
}

TEST_CASE("an energy-violating solution is caught by the report") {
  const Instance inst = testing::small_instance(2, 14);
  const MilpModel model = build_model(inst);
  // visit both APs with absurd durations
  std::string sol = "x_0_1 1\nx_1_2 1\nx_2_0 1\nTc_1 100000\nTc_2 100000\n";
  const Schedule bad = read_solution(model, sol);
  const auto codes = feasibility_report(inst, bad);
  CHECK(std::find(codes.begin(), codes.end(), Violation::Energy) != codes.end());
}

TEST_CASE("mtz rows exist only for multi-ap models") {
  const Instance one = testing::small_instance(1, 15);
  CHECK(count_row_prefix(build_model(one), "r_order_") == 0);
  const Instance three = testing::small_instance(3, 15);
  CHECK(count_row_prefix(build_model(three), "r_order_") == 6);
}
