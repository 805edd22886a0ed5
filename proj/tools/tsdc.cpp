#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tsdc/baselines.hpp"
#include "tsdc/bench.hpp"
#include "tsdc/ils.hpp"
#include "tsdc/milp.hpp"
#include "tsdc/physics.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

tsdc::Instance load_instance(const std::string& path) { return tsdc::parse_instance(slurp(path)); }

std::uint64_t seed_or_env(std::uint64_t seed, bool seed_given) {
  if (seed_given) return seed;
  if (const char* env = std::getenv("TSDC_SEED")) return std::strtoull(env, nullptr, 10);
  return seed;
}

struct CommonSolve {
  std::uint64_t seed = 0;
  bool seed_given = false;
  double time_limit = 1800.0;
  int stall_limit = 15;
  int cap = 31;
};

void add_solver_flags(CLI::App* cmd, CommonSolve& c) {
  cmd->add_option("--seed", c.seed, "RNG seed (env TSDC_SEED as fallback)")
      ->each([&c](const std::string&) { c.seed_given = true; });
  cmd->add_option("--time-limit", c.time_limit, "wall clock limit in seconds");
  cmd->add_option("--stall-limit", c.stall_limit, "non-improving rounds before stopping");
  cmd->add_option("--cap", c.cap, "max collection slots per AP");
}

tsdc::SolverConfig to_config(const CommonSolve& c) {
  tsdc::SolverConfig cfg;
  cfg.seed = seed_or_env(c.seed, c.seed_given);
  cfg.wall_clock_limit = c.time_limit;
  cfg.stall_limit = c.stall_limit;
  cfg.per_ap_cap = c.cap;
  return cfg;
}

std::vector<std::pair<std::string, tsdc::Instance>> load_suite(const std::string& dir) {
  std::vector<std::pair<std::string, tsdc::Instance>> suite;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".tsdc" || ext == ".txt" || ext == ".json")
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files)
    suite.emplace_back(f.stem().string(), load_instance(f.string()));
  return suite;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-sensitive UAV data collection: instances, solvers, benchmarks"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a benchmark instance");
  std::string gen_layout = "random";
  int gen_n = 15;
  CommonSolve gen_c;
  std::string gen_out;
  std::string gen_name;
  double gen_battery = 0.0;
  int gen_slots = 2000;
  double gen_area = 1000.0;
  bool gen_json = false;
  gen->add_option("--layout", gen_layout, "clustered | random | random-clustered");
  gen->add_option("--n", gen_n, "number of APs")->required();
  gen->add_option("--seed", gen_c.seed, "generator seed")
      ->each([&gen_c](const std::string&) { gen_c.seed_given = true; });
  gen->add_option("--battery", gen_battery, "battery override (0 = by size)");
  gen->add_option("--mission-slots", gen_slots, "mission horizon in slots");
  gen->add_option("--area", gen_area, "square area side");
  gen->add_option("--name", gen_name, "instance name override");
  gen->add_option("-o,--out", gen_out, "output path (default stdout)");
  gen->add_flag("--json", gen_json, "emit the JSON mirror instead of text");

  // solve
  auto* slv = app.add_subcommand("solve", "Run the iterated local search solver");
  std::string slv_instance;
  CommonSolve slv_c;
  bool slv_json = false;
  std::string slv_save;
  slv->add_option("--instance", slv_instance, "instance file")->required();
  add_solver_flags(slv, slv_c);
  slv->add_flag("--json", slv_json, "full result as JSON");
  slv->add_option("--save-schedule", slv_save, "also write the best schedule JSON here");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Score a schedule against an instance");
  std::string ev_instance, ev_schedule;
  bool ev_oracle = false, ev_json = false;
  ev->add_option("--instance", ev_instance, "instance file")->required();
  ev->add_option("--schedule", ev_schedule, "schedule JSON file")->required();
  ev->add_flag("--oracle", ev_oracle, "use the slot-by-slot simulator");
  ev->add_flag("--json", ev_json, "emit the full evaluation JSON");

  // bench
  auto* bn = app.add_subcommand("bench", "Benchmark algorithms over an instance suite");
  std::string bn_suite, bn_instance, bn_csv;
  CommonSolve bn_c;
  int bn_runs = 10;
  int bn_threads = 0;
  int bn_uniform = 5;
  bool bn_json = false;
  std::vector<std::string> bn_algos;
  bn->add_option("--suite", bn_suite, "directory of instance files");
  bn->add_option("--instance", bn_instance, "single instance file");
  bn->add_option("--runs", bn_runs, "runs per (instance, algorithm)");
  bn->add_option("--algorithm", bn_algos, "ils-mdp | greedy | uniform | brute (repeatable)");
  bn->add_option("--csv", bn_csv, "write records as CSV here");
  bn->add_option("--threads", bn_threads, "worker threads (0 = hardware)");
  bn->add_option("--uniform-d", bn_uniform, "duration for the uniform baseline");
  add_solver_flags(bn, bn_c);
  bn->add_flag("--json", bn_json, "records as JSON on stdout");

  // export-milp
  auto* mx = app.add_subcommand("export-milp", "Write the exact MILP as an LP file");
  std::string mx_instance, mx_out;
  int mx_cap = 31;
  mx->add_option("--instance", mx_instance, "instance file")->required();
  mx->add_option("-o,--out", mx_out, "output path (default stdout)");
  mx->add_option("--cap", mx_cap, "per-AP duration cap used for the big-M");

  // stats
  auto* st = app.add_subcommand("stats", "Rank-sum significance tests over bench records");
  std::string st_csv;
  bool st_json = false;
  st->add_option("--csv", st_csv, "bench records CSV")->required();
  st->add_flag("--json", st_json, "emit JSON (default)");

  // plot-data
  auto* pl = app.add_subcommand("plot-data", "Emit route geometry for plotting");
  std::string pl_instance, pl_schedule, pl_svg;
  pl->add_option("--instance", pl_instance, "instance file")->required();
  pl->add_option("--schedule", pl_schedule, "schedule JSON file")->required();
  pl->add_option("--svg", pl_svg, "also render a simple SVG here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      tsdc::GeneratorProfile profile;
      profile.battery = gen_battery;
      profile.mission_slots = gen_slots;
      profile.area = gen_area;
      auto inst = tsdc::generate_instance(tsdc::layout_from_string(gen_layout), gen_n,
                                          seed_or_env(gen_c.seed, gen_c.seed_given), profile);
      if (!gen_name.empty()) inst.name = gen_name;
      const std::string text =
          gen_json ? tsdc::write_instance_json(inst) : tsdc::write_instance(inst);
      if (gen_out.empty()) std::cout << text;
      else spill(gen_out, text);
      return kExitOk;
    }

    if (slv->parsed()) {
      const auto inst = load_instance(slv_instance);
      const auto res = tsdc::solve(inst, to_config(slv_c));
      if (!slv_save.empty()) spill(slv_save, tsdc::schedule_to_json(res.best, 2) + "\n");
      if (slv_json) {
        std::cout << tsdc::solver_result_to_json(res) << "\n";
      } else {
        std::cout << "objective " << res.best_eval.objective << " collected "
                  << res.best_eval.total_collected << " overflow " << res.best_eval.total_overflow
                  << " visits " << res.best.visit_count() << " rounds " << res.iterations
                  << " wall_s " << res.wall_seconds << "\n";
      }
      return kExitOk;
    }

    if (ev->parsed()) {
      const auto inst = load_instance(ev_instance);
      const auto sched = tsdc::schedule_from_json(slurp(ev_schedule));
      const auto result =
          ev_oracle ? tsdc::simulate_slots(inst, sched) : tsdc::evaluate(inst, sched);
      if (ev_json) {
        std::cout << tsdc::evaluation_to_json(result) << "\n";
      } else {
        std::cout << "objective " << result.objective << " collected " << result.total_collected
                  << " overflow " << result.total_overflow << " energy " << result.energy_used
                  << " feasible " << (result.feasible ? "yes" : "no") << "\n";
      }
      return result.feasible ? kExitOk : kExitInvalid;
    }

    if (bn->parsed()) {
      std::vector<std::pair<std::string, tsdc::Instance>> suite;
      if (!bn_suite.empty()) suite = load_suite(bn_suite);
      if (!bn_instance.empty())
        suite.emplace_back(fs::path(bn_instance).stem().string(), load_instance(bn_instance));
      if (suite.empty()) {
        std::cerr << "bench: need --suite or --instance\n";
        return kExitUsage;
      }
      tsdc::BenchOptions opts;
      if (!bn_algos.empty()) opts.algorithms = bn_algos;
      opts.runs = bn_runs;
      opts.threads = bn_threads;
      opts.uniform_d = bn_uniform;
      opts.seed = seed_or_env(bn_c.seed, bn_c.seed_given);
      if (opts.seed == 0) opts.seed = 1;
      opts.solver = to_config(bn_c);
      const auto records = tsdc::run_bench(suite, opts);
      if (!bn_csv.empty()) spill(bn_csv, tsdc::records_to_csv(records));
      if (bn_json || bn_csv.empty()) std::cout << tsdc::records_to_json(records) << "\n";
      return kExitOk;
    }

    if (mx->parsed()) {
      const auto inst = load_instance(mx_instance);
      const auto model = tsdc::build_model(inst, mx_cap);
      const std::string lp = tsdc::write_lp(model);
      if (mx_out.empty()) std::cout << lp;
      else spill(mx_out, lp);
      return kExitOk;
    }

    if (st->parsed()) {
      const auto records = tsdc::records_from_csv(slurp(st_csv));
      const auto pairs = tsdc::stat_report(records);
      std::cout << tsdc::stat_report_to_json(pairs, st_json ? -1 : 2) << "\n";
      return kExitOk;
    }

    if (pl->parsed()) {
      const auto inst = load_instance(pl_instance);
      const auto sched = tsdc::schedule_from_json(slurp(pl_schedule));
      const auto result = tsdc::evaluate(inst, sched);
      if (!pl_svg.empty()) spill(pl_svg, tsdc::plot_svg(inst, sched));
      std::cout << tsdc::plot_data(inst, sched, result) << "\n";
      return kExitOk;
    }
  } catch (const tsdc::ParseError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitUsage;
}
