#include "tsdc/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "tsdc/baselines.hpp"

namespace tsdc {

using nlohmann::json;

std::pair<double, double> metrics(const Evaluation& ev) {
  const double total = ev.total_collected + ev.total_overflow;
  const double eta = total > 0 ? ev.total_collected / total : 1.0;
  const double slots =
      static_cast<double>(ev.service_slots_used) + static_cast<double>(ev.flight_slots_used);
  const double mu = slots > 0 ? static_cast<double>(ev.service_slots_used) / slots : 0.0;
  return {eta, mu};
}

namespace {

// Midranks of the pooled sample, then split back into the two groups.
std::vector<double> pooled_midranks(std::span<const double> a, std::span<const double> b,
                                    std::size_t& n_a) {
  struct Tagged {
    double value;
    bool from_a;
  };
  std::vector<Tagged> all;
  for (double v : a) all.push_back({v, true});
  for (double v : b) all.push_back({v, false});
  std::stable_sort(all.begin(), all.end(),
                   [](const Tagged& x, const Tagged& y) { return x.value < y.value; });
  std::vector<double> ranks(all.size());
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    while (j + 1 < all.size() && all[j + 1].value == all[i].value) ++j;
    const double mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[k] = mid;
    i = j + 1;
  }
  // reorder: a's ranks first
  std::vector<double> out;
  out.reserve(all.size());
  for (std::size_t k = 0; k < all.size(); ++k)
    if (all[k].from_a) out.push_back(ranks[k]);
  n_a = out.size();
  for (std::size_t k = 0; k < all.size(); ++k)
    if (!all[k].from_a) out.push_back(ranks[k]);
  return out;
}

double binomial(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v = v * static_cast<double>(n - k + i) / static_cast<double>(i);
  return v;
}

// Exact two-sided tail: the share of n-subsets of the pooled ranks whose
// rank sum deviates from the mean at least as much as the observed one.
double exact_two_sided(const std::vector<double>& ranks, std::size_t n_a) {
  const std::size_t total = ranks.size();
  const double mean =
      static_cast<double>(n_a) * static_cast<double>(total + 1) / 2.0;
  double w_obs = 0.0;
  for (std::size_t k = 0; k < n_a; ++k) w_obs += ranks[k];
  const double dev = std::abs(w_obs - mean);

  std::vector<std::size_t> pick(n_a);
  for (std::size_t k = 0; k < n_a; ++k) pick[k] = k;
  long long hits = 0, count = 0;
  while (true) {
    double w = 0.0;
    for (std::size_t k = 0; k < n_a; ++k) w += ranks[pick[k]];
    ++count;
    if (std::abs(w - mean) >= dev) ++hits;
    // next combination
    std::size_t i = n_a;
    while (i > 0) {
      --i;
      if (pick[i] != i + total - n_a) {
        ++pick[i];
        for (std::size_t j = i + 1; j < n_a; ++j) pick[j] = pick[j - 1] + 1;
        break;
      }
      if (i == 0) return static_cast<double>(hits) / static_cast<double>(count);
    }
  }
}

double normal_two_sided(const std::vector<double>& ranks, std::size_t n_a) {
  const double n = static_cast<double>(n_a);
  const double m = static_cast<double>(ranks.size() - n_a);
  const double total = n + m;
  double w = 0.0;
  for (std::size_t k = 0; k < n_a; ++k) w += ranks[k];
  const double mean = n * (total + 1) / 2.0;

  // tie correction over the pooled multiset
  std::vector<double> sorted(ranks);
  std::sort(sorted.begin(), sorted.end());
  double tie_sum = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i + 1);
    tie_sum += t * t * t - t;
    i = j + 1;
  }
  const double var =
      n * m / 12.0 * ((total + 1) - tie_sum / (total * (total - 1)));
  if (var <= 0) return 1.0;
  double delta = w - mean;
  // continuity correction toward the mean
  if (delta > 0.5) delta -= 0.5;
  else if (delta < -0.5) delta += 0.5;
  else delta = 0.0;
  const double z = delta / std::sqrt(var);
  const double p = std::erfc(std::abs(z) / std::sqrt(2.0));
  return std::min(1.0, p);
}

} // namespace

double wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("samples must be non-empty");
  std::size_t n_a = 0;
  const std::vector<double> ranks = pooled_midranks(a, b, n_a);
  const int total = static_cast<int>(ranks.size());
  const int small = static_cast<int>(std::min(n_a, ranks.size() - n_a));
  if (binomial(total, small) <= 200000.0) return exact_two_sided(ranks, n_a);
  return normal_two_sided(ranks, n_a);
}

namespace {

BenchRecord run_one(const std::string& name, const Instance& inst, const std::string& algo,
                    std::uint64_t seed, const BenchOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  Schedule sched;
  if (algo == "ils-mdp") {
    SolverConfig cfg = opts.solver;
    cfg.seed = seed;
    sched = solve(inst, cfg).best;
  } else if (algo == "greedy") {
    sched = greedy_deadline(inst, opts.solver.per_ap_cap);
  } else if (algo == "uniform") {
    sched = uniform_duration(inst, opts.uniform_d);
  } else if (algo == "brute") {
    sched = brute_force(inst, 7, opts.solver.per_ap_cap).best;
  } else {
    throw std::invalid_argument("unknown algorithm '" + algo + "'");
  }
  const Evaluation ev = evaluate(inst, sched);
  const auto [eta, mu] = metrics(ev);
  BenchRecord rec;
  rec.instance_name = name;
  rec.algorithm = algo;
  rec.seed = seed;
  rec.objective = ev.objective;
  rec.collected = ev.total_collected;
  rec.overflow = ev.total_overflow;
  rec.efficiency = eta;
  rec.time_ratio = mu;
  rec.flight_slots = ev.flight_slots_used;
  rec.service_slots = ev.service_slots_used;
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

} // namespace

std::vector<BenchRecord> run_bench(const std::vector<std::pair<std::string, Instance>>& suite,
                                   const BenchOptions& opts) {
  struct Task {
    const std::string* name;
    const Instance* inst;
    const std::string* algo;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const auto& [name, inst] : suite)
    for (const auto& algo : opts.algorithms)
      for (int r = 0; r < opts.runs; ++r)
        tasks.push_back({&name, &inst, &algo, opts.seed + static_cast<std::uint64_t>(r)});

  std::vector<BenchRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};
  const unsigned hw = std::thread::hardware_concurrency();
  const unsigned workers = opts.threads > 0 ? static_cast<unsigned>(opts.threads)
                                            : (hw > 0 ? hw : 2u);
  auto worker = [&] {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= tasks.size()) break;
      const auto& t = tasks[k];
      records[k] = run_one(*t.name, *t.inst, *t.algo, t.seed, opts);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers && w < tasks.size(); ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::sort(records.begin(), records.end(), [](const BenchRecord& a, const BenchRecord& b) {
    if (a.instance_name != b.instance_name) return a.instance_name < b.instance_name;
    if (a.algorithm != b.algorithm) return a.algorithm < b.algorithm;
    return a.seed < b.seed;
  });
  return records;
}

namespace {

std::string csv_num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

} // namespace

std::string records_to_csv(const std::vector<BenchRecord>& records) {
  std::string out =
      "instance_name,algorithm,seed,objective,collected,overflow,efficiency,time_ratio,"
      "flight_slots,service_slots,wall_seconds\n";
  for (const auto& r : records) {
    out += r.instance_name + "," + r.algorithm + "," + std::to_string(r.seed) + "," +
           csv_num(r.objective) + "," + csv_num(r.collected) + "," + csv_num(r.overflow) + "," +
           csv_num(r.efficiency) + "," + csv_num(r.time_ratio) + "," +
           std::to_string(r.flight_slots) + "," + std::to_string(r.service_slots) + "," +
           csv_num(r.wall_seconds) + "\n";
  }
  return out;
}

std::vector<BenchRecord> records_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<BenchRecord> out;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 11) throw std::runtime_error("bad CSV record: " + line);
    BenchRecord r;
    r.instance_name = fields[0];
    r.algorithm = fields[1];
    r.seed = std::stoull(fields[2]);
    r.objective = std::stod(fields[3]);
    r.collected = std::stod(fields[4]);
    r.overflow = std::stod(fields[5]);
    r.efficiency = std::stod(fields[6]);
    r.time_ratio = std::stod(fields[7]);
    r.flight_slots = std::stoll(fields[8]);
    r.service_slots = std::stoll(fields[9]);
    r.wall_seconds = std::stod(fields[10]);
    out.push_back(std::move(r));
  }
  return out;
}

std::string records_to_json(const std::vector<BenchRecord>& records, int indent) {
  json arr = json::array();
  for (const auto& r : records) {
    arr.push_back({{"instance_name", r.instance_name},
                   {"algorithm", r.algorithm},
                   {"seed", r.seed},
                   {"objective", r.objective},
                   {"collected", r.collected},
                   {"overflow", r.overflow},
                   {"efficiency", r.efficiency},
                   {"time_ratio", r.time_ratio},
                   {"flight_slots", r.flight_slots},
                   {"service_slots", r.service_slots},
                   {"wall_seconds", r.wall_seconds}});
  }
  json j{{"schema", 1}, {"records", arr}};
  return j.dump(indent);
}

std::vector<StatPair> stat_report(const std::vector<BenchRecord>& records, double alpha) {
  // group objective samples by (instance, algorithm)
  std::vector<std::string> instances, algorithms;
  for (const auto& r : records) {
    if (std::find(instances.begin(), instances.end(), r.instance_name) == instances.end())
      instances.push_back(r.instance_name);
    if (std::find(algorithms.begin(), algorithms.end(), r.algorithm) == algorithms.end())
      algorithms.push_back(r.algorithm);
  }
  std::sort(instances.begin(), instances.end());
  std::sort(algorithms.begin(), algorithms.end());

  std::vector<StatPair> out;
  for (const auto& inst : instances) {
    for (std::size_t i = 0; i < algorithms.size(); ++i)
      for (std::size_t j = i + 1; j < algorithms.size(); ++j) {
        std::vector<double> a, b;
        for (const auto& r : records) {
          if (r.instance_name != inst) continue;
          if (r.algorithm == algorithms[i]) a.push_back(r.objective);
          if (r.algorithm == algorithms[j]) b.push_back(r.objective);
        }
        if (a.empty() || b.empty()) continue;
        StatPair p;
        p.instance_name = inst;
        p.algorithm_a = algorithms[i];
        p.algorithm_b = algorithms[j];
        p.p_value = wilcoxon_rank_sum(a, b);
        p.significant = p.p_value < alpha;
        out.push_back(std::move(p));
      }
  }
  return out;
}

std::string stat_report_to_json(const std::vector<StatPair>& pairs, int indent) {
  json arr = json::array();
  for (const auto& p : pairs) {
    arr.push_back({{"instance_name", p.instance_name},
                   {"algorithm_a", p.algorithm_a},
                   {"algorithm_b", p.algorithm_b},
                   {"p_value", p.p_value},
                   {"significant", p.significant}});
  }
  json j{{"schema", 1}, {"alpha", 0.05}, {"pairs", arr}};
  return j.dump(indent);
}

std::string plot_data(const Instance& inst, const Schedule& sched, const Evaluation& ev,
                      int indent) {
  json j;
  j["schema"] = 1;
  j["instance"] = inst.name;
  j["base"] = {{"x", inst.base.x}, {"y", inst.base.y}};
  json aps = json::array();
  for (const auto& ap : inst.aps)
    aps.push_back({{"id", ap.id}, {"x", ap.location.x}, {"y", ap.location.y}});
  j["aps"] = aps;
  json visits = json::array();
  json polyline = json::array();
  if (sched.visit_count() > 0) {
    polyline.push_back({inst.base.x, inst.base.y});
    for (int k = 0; k < sched.visit_count(); ++k) {
      const int id = sched.route[static_cast<std::size_t>(k) + 1];
      const auto& ap = inst.ap(id);
      visits.push_back({{"id", id},
                        {"arrival", ev.arrival[static_cast<std::size_t>(k)]},
                        {"state", ev.state[static_cast<std::size_t>(k)]},
                        {"duration", sched.durations[static_cast<std::size_t>(k)]},
                        {"collected", ev.collected_per_ap[static_cast<std::size_t>(k)]},
                        {"overflow", ev.overflow_per_ap[static_cast<std::size_t>(k)]}});
      polyline.push_back({ap.location.x, ap.location.y});
    }
    polyline.push_back({inst.base.x, inst.base.y});
  }
  j["visits"] = visits;
  j["polyline"] = polyline;
  return j.dump(indent);
}

std::string plot_svg(const Instance& inst, const Schedule& sched) {
  double min_x = inst.base.x, max_x = inst.base.x, min_y = inst.base.y, max_y = inst.base.y;
  for (const auto& ap : inst.aps) {
    min_x = std::min(min_x, ap.location.x);
    max_x = std::max(max_x, ap.location.x);
    min_y = std::min(min_y, ap.location.y);
    max_y = std::max(max_y, ap.location.y);
  }
  const double pad = std::max(1.0, 0.05 * std::max(max_x - min_x, max_y - min_y));
  min_x -= pad; min_y -= pad; max_x += pad; max_y += pad;
  const double w = max_x - min_x, h = max_y - min_y;
  const double scale = 640.0 / std::max(w, h);
  auto X = [&](double x) { return (x - min_x) * scale; };
  auto Y = [&](double y) { return (max_y - y) * scale; };

  std::ostringstream svg;
  svg.precision(8);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w * scale << "\" height=\""
      << h * scale << "\">\n";
  if (sched.visit_count() > 0) {
    svg << "<polyline fill=\"none\" stroke=\"#3366cc\" stroke-width=\"1.5\" points=\"";
    svg << X(inst.base.x) << "," << Y(inst.base.y);
    for (int k = 0; k < sched.visit_count(); ++k) {
      const auto& l = inst.ap(sched.route[static_cast<std::size_t>(k) + 1]).location;
      svg << " " << X(l.x) << "," << Y(l.y);
    }
    svg << " " << X(inst.base.x) << "," << Y(inst.base.y) << "\"/>\n";
  }
  for (const auto& ap : inst.aps)
    svg << "<circle cx=\"" << X(ap.location.x) << "\" cy=\"" << Y(ap.location.y)
        << "\" r=\"3\" fill=\"#cc3333\"/>\n";
  svg << "<rect x=\"" << X(inst.base.x) - 4 << "\" y=\"" << Y(inst.base.y) - 4
      << "\" width=\"8\" height=\"8\" fill=\"#222222\"/>\n";
  svg << "</svg>\n";
  return svg.str();
}

} // namespace tsdc
