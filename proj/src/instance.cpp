#include "tsdc/instance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

namespace tsdc {

using nlohmann::json;

bool operator==(const AccessPoint& a, const AccessPoint& b) {
  return a.id == b.id && a.location == b.location && a.growth_rate == b.growth_rate &&
         a.initial_data == b.initial_data && a.capacity == b.capacity &&
         a.threshold == b.threshold && a.tx_power == b.tx_power;
}

bool operator==(const EnergyParams& a, const EnergyParams& b) {
  return a.blade_profile_power == b.blade_profile_power && a.induced_power == b.induced_power &&
         a.tip_speed == b.tip_speed && a.rotor_induced_speed == b.rotor_induced_speed &&
         a.fuselage_drag_ratio == b.fuselage_drag_ratio && a.air_density == b.air_density &&
         a.rotor_solidity == b.rotor_solidity && a.rotor_disc_area == b.rotor_disc_area;
}

bool operator==(const RadioParams& a, const RadioParams& b) {
  return a.bandwidth == b.bandwidth && a.channel_gain_mode == b.channel_gain_mode &&
         a.channel_gain == b.channel_gain && a.noise_power == b.noise_power;
}

bool operator==(const UavParams& a, const UavParams& b) {
  return a.speed == b.speed && a.battery == b.battery && a.mission_slots == b.mission_slots &&
         a.slot_length == b.slot_length && a.altitude_link == b.altitude_link &&
         a.energy == b.energy && a.radio == b.radio;
}

bool operator==(const Instance& a, const Instance& b) {
  return a.name == b.name && a.base == b.base && a.aps == b.aps && a.uav == b.uav &&
         a.penalty == b.penalty;
}

const AccessPoint& Instance::ap(int id) const {
  if (id < 1 || id > ap_count())
    throw std::invalid_argument("unknown AP id " + std::to_string(id));
  return aps[static_cast<std::size_t>(id - 1)];
}

Location Instance::node_location(int id) const {
  if (id == 0) return base;
  return ap(id).location;
}

namespace {

void check(bool ok, int line, const std::string& field, const std::string& what) {
  if (!ok) throw ParseError(line, field, what);
}

bool finite(double v) { return std::isfinite(v); }

} // namespace

void validate_instance(const Instance& inst) {
  const auto& u = inst.uav;
  check(finite(inst.base.x) && finite(inst.base.y), 0, "base", "coordinates must be finite");
  check(u.speed > 0, 0, "speed", "must be positive");
  check(u.battery > 0, 0, "battery", "must be positive");
  check(u.mission_slots >= 1, 0, "slots", "must be at least 1");
  check(u.slot_length > 0, 0, "tau", "must be positive");
  check(u.altitude_link > 0, 0, "altitude", "must be positive");
  const auto& e = u.energy;
  const double ev[] = {e.blade_profile_power, e.induced_power, e.tip_speed,
                       e.rotor_induced_speed, e.fuselage_drag_ratio, e.air_density,
                       e.rotor_solidity, e.rotor_disc_area};
  for (double v : ev) check(v > 0, 0, "energy", "all propulsion parameters must be positive");
  check(u.radio.bandwidth > 0, 0, "bandwidth", "must be positive");
  if (u.radio.channel_gain_mode == ChannelGainMode::Components) {
    check(u.radio.channel_gain > 0, 0, "channel_gain", "must be positive");
    check(u.radio.noise_power > 0, 0, "noise_power", "must be positive");
  }
  check(inst.penalty >= 0, 0, "penalty", "must be nonnegative");

  std::vector<char> seen(static_cast<std::size_t>(inst.ap_count()) + 1, 0);
  for (std::size_t k = 0; k < inst.aps.size(); ++k) {
    const auto& ap = inst.aps[k];
    check(ap.id >= 1 && ap.id <= inst.ap_count(), 0, "id",
          "AP ids must be 1..N, got " + std::to_string(ap.id));
    check(!seen[static_cast<std::size_t>(ap.id)], 0, "id",
          "duplicate AP id " + std::to_string(ap.id));
    seen[static_cast<std::size_t>(ap.id)] = 1;
    check(ap.id == static_cast<int>(k) + 1, 0, "id", "APs must be stored in id order");
    check(finite(ap.location.x) && finite(ap.location.y), 0, "xy", "coordinates must be finite");
    check(ap.growth_rate >= 0, 0, "alpha", "growth rate must be nonnegative");
    check(ap.initial_data >= 0, 0, "D0", "initial data must be nonnegative");
    check(ap.initial_data <= ap.capacity, 0, "D0", "initial data exceeds capacity");
    check(ap.threshold > 0, 0, "Dth", "threshold must be positive");
    check(ap.threshold <= ap.capacity, 0, "Dth", "threshold exceeds capacity");
    check(ap.tx_power > 0, 0, "snr", "must be positive");
  }
}

namespace {

// Shortest round-trip decimal form, identical across runs.
std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& tok, int line, const std::string& field) {
  double v = 0;
  const char* b = tok.data();
  const char* e = b + tok.size();
  auto res = std::from_chars(b, e, v);
  check(res.ec == std::errc() && res.ptr == e, line, field, "malformed number '" + tok + "'");
  return v;
}

long long parse_int(const std::string& tok, int line, const std::string& field) {
  long long v = 0;
  const char* b = tok.data();
  const char* e = b + tok.size();
  auto res = std::from_chars(b, e, v);
  check(res.ec == std::errc() && res.ptr == e, line, field, "malformed integer '" + tok + "'");
  return v;
}

json radio_to_json(const RadioParams& r) {
  return json{{"bandwidth", r.bandwidth},
              {"channel_gain_mode",
               r.channel_gain_mode == ChannelGainMode::LinearSnr ? "LinearSnr" : "Components"},
              {"channel_gain", r.channel_gain},
              {"noise_power", r.noise_power}};
}

Instance instance_from_json(const json& j) {
  Instance inst;
  inst.name = j.value("name", std::string());
  inst.base = {j.at("base").at("x").get<double>(), j.at("base").at("y").get<double>()};
  inst.penalty = j.at("penalty").get<double>();
  const auto& ju = j.at("uav");
  inst.uav.speed = ju.at("speed").get<double>();
  inst.uav.battery = ju.at("battery").get<double>();
  inst.uav.mission_slots = ju.at("mission_slots").get<int>();
  inst.uav.slot_length = ju.at("slot_length").get<double>();
  inst.uav.altitude_link = ju.at("altitude_link").get<double>();
  const auto& je = ju.at("energy");
  auto& e = inst.uav.energy;
  e.blade_profile_power = je.at("blade_profile_power").get<double>();
  e.induced_power = je.at("induced_power").get<double>();
  e.tip_speed = je.at("tip_speed").get<double>();
  e.rotor_induced_speed = je.at("rotor_induced_speed").get<double>();
  e.fuselage_drag_ratio = je.at("fuselage_drag_ratio").get<double>();
  e.air_density = je.at("air_density").get<double>();
  e.rotor_solidity = je.at("rotor_solidity").get<double>();
  e.rotor_disc_area = je.at("rotor_disc_area").get<double>();
  const auto& jr = ju.at("radio");
  auto& r = inst.uav.radio;
  r.bandwidth = jr.at("bandwidth").get<double>();
  std::string mode = jr.value("channel_gain_mode", std::string("LinearSnr"));
  check(mode == "LinearSnr" || mode == "Components", 0, "channel_gain_mode",
        "must be LinearSnr or Components");
  r.channel_gain_mode =
      mode == "LinearSnr" ? ChannelGainMode::LinearSnr : ChannelGainMode::Components;
  r.channel_gain = jr.value("channel_gain", 1.0);
  r.noise_power = jr.value("noise_power", 1.0);
  for (const auto& ja : j.at("aps")) {
    AccessPoint ap;
    ap.id = ja.at("id").get<int>();
    ap.location = {ja.at("location").at("x").get<double>(),
                   ja.at("location").at("y").get<double>()};
    ap.growth_rate = ja.at("growth_rate").get<double>();
    ap.initial_data = ja.at("initial_data").get<double>();
    ap.capacity = ja.at("capacity").get<double>();
    ap.threshold = ja.at("threshold").get<double>();
    ap.tx_power = ja.at("tx_power").get<double>();
    inst.aps.push_back(ap);
  }
  std::sort(inst.aps.begin(), inst.aps.end(),
            [](const AccessPoint& a, const AccessPoint& b) { return a.id < b.id; });
  validate_instance(inst);
  return inst;
}

Instance parse_text(const std::string& text) {
  Instance inst;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool saw_header = false, saw_uav = false, saw_base = false;
  std::vector<AccessPoint> aps;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (auto pos = line.find('#'); pos != std::string::npos) {
      // recognize the canonical name comment
      const std::string tag = "# name:";
      if (line.rfind(tag, 0) == 0) {
        std::string n = line.substr(tag.size());
        while (!n.empty() && n.front() == ' ') n.erase(n.begin());
        inst.name = n;
      }
      line = line.substr(0, pos);
    }
    std::istringstream ls(line);
    std::vector<std::string> tok;
    std::string t;
    while (ls >> t) tok.push_back(t);
    if (tok.empty()) continue;

    if (!saw_header) {
      check(tok.size() == 2 && tok[0] == "TSDC" && tok[1] == "1", lineno, "header",
            "expected 'TSDC 1'");
      saw_header = true;
      continue;
    }
    if (tok[0] == "UAV") {
      check(!saw_uav, lineno, "UAV", "duplicate UAV line");
      check(tok.size() == 16, lineno, "UAV", "expected 15 fields after UAV");
      auto& u = inst.uav;
      u.speed = parse_double(tok[1], lineno, "speed");
      u.battery = parse_double(tok[2], lineno, "battery");
      u.mission_slots = static_cast<int>(parse_int(tok[3], lineno, "slots"));
      u.slot_length = parse_double(tok[4], lineno, "tau");
      u.altitude_link = parse_double(tok[5], lineno, "altitude");
      u.energy.blade_profile_power = parse_double(tok[6], lineno, "P0");
      u.energy.induced_power = parse_double(tok[7], lineno, "Pi");
      u.energy.tip_speed = parse_double(tok[8], lineno, "Utip");
      u.energy.rotor_induced_speed = parse_double(tok[9], lineno, "v0");
      u.energy.fuselage_drag_ratio = parse_double(tok[10], lineno, "d0");
      u.energy.air_density = parse_double(tok[11], lineno, "rho");
      u.energy.rotor_solidity = parse_double(tok[12], lineno, "s");
      u.energy.rotor_disc_area = parse_double(tok[13], lineno, "A");
      u.radio.bandwidth = parse_double(tok[14], lineno, "bandwidth");
      inst.penalty = parse_double(tok[15], lineno, "penalty");
      saw_uav = true;
    } else if (tok[0] == "BASE") {
      check(!saw_base, lineno, "BASE", "duplicate BASE line");
      check(tok.size() == 3, lineno, "BASE", "expected 'BASE x y'");
      inst.base.x = parse_double(tok[1], lineno, "x");
      inst.base.y = parse_double(tok[2], lineno, "y");
      saw_base = true;
    } else if (tok[0] == "AP") {
      check(tok.size() == 9, lineno, "AP", "expected 'AP id x y alpha D0 Dmax Dth snr'");
      AccessPoint ap;
      ap.id = static_cast<int>(parse_int(tok[1], lineno, "id"));
      ap.location.x = parse_double(tok[2], lineno, "x");
      ap.location.y = parse_double(tok[3], lineno, "y");
      ap.growth_rate = parse_double(tok[4], lineno, "alpha");
      ap.initial_data = parse_double(tok[5], lineno, "D0");
      ap.capacity = parse_double(tok[6], lineno, "Dmax");
      ap.threshold = parse_double(tok[7], lineno, "Dth");
      ap.tx_power = parse_double(tok[8], lineno, "snr");
      for (const auto& prev : aps)
        check(prev.id != ap.id, lineno, "id", "duplicate AP id " + std::to_string(ap.id));
      aps.push_back(ap);
    } else {
      throw ParseError(lineno, "record", "unknown record '" + tok[0] + "'");
    }
  }
  check(saw_header, 0, "header", "missing 'TSDC 1' header");
  check(saw_uav, 0, "UAV", "missing UAV line");
  check(saw_base, 0, "BASE", "missing BASE line");
  std::sort(aps.begin(), aps.end(),
            [](const AccessPoint& a, const AccessPoint& b) { return a.id < b.id; });
  inst.aps = std::move(aps);
  validate_instance(inst);
  return inst;
}

} // namespace

Instance parse_instance(const std::string& text) {
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    if (c == '{') return instance_from_json(json::parse(text));
    break;
  }
  return parse_text(text);
}

std::string write_instance(const Instance& inst) {
  std::string out = "TSDC 1\n";
  if (!inst.name.empty()) out += "# name: " + inst.name + "\n";
  const auto& u = inst.uav;
  const auto& e = u.energy;
  out += "UAV " + fmt(u.speed) + " " + fmt(u.battery) + " " + std::to_string(u.mission_slots) +
         " " + fmt(u.slot_length) + " " + fmt(u.altitude_link) + " " +
         fmt(e.blade_profile_power) + " " + fmt(e.induced_power) + " " + fmt(e.tip_speed) + " " +
         fmt(e.rotor_induced_speed) + " " + fmt(e.fuselage_drag_ratio) + " " +
         fmt(e.air_density) + " " + fmt(e.rotor_solidity) + " " + fmt(e.rotor_disc_area) + " " +
         fmt(u.radio.bandwidth) + " " + fmt(inst.penalty) + "\n";
  out += "BASE " + fmt(inst.base.x) + " " + fmt(inst.base.y) + "\n";
  for (const auto& ap : inst.aps) {
    out += "AP " + std::to_string(ap.id) + " " + fmt(ap.location.x) + " " + fmt(ap.location.y) +
           " " + fmt(ap.growth_rate) + " " + fmt(ap.initial_data) + " " + fmt(ap.capacity) + " " +
           fmt(ap.threshold) + " " + fmt(ap.tx_power) + "\n";
  }
  return out;
}

std::string write_instance_json(const Instance& inst) {
  json j;
  j["schema"] = 1;
  j["name"] = inst.name;
  j["base"] = {{"x", inst.base.x}, {"y", inst.base.y}};
  j["penalty"] = inst.penalty;
  const auto& u = inst.uav;
  j["uav"] = {{"speed", u.speed},
              {"battery", u.battery},
              {"mission_slots", u.mission_slots},
              {"slot_length", u.slot_length},
              {"altitude_link", u.altitude_link},
              {"energy",
               {{"blade_profile_power", u.energy.blade_profile_power},
                {"induced_power", u.energy.induced_power},
                {"tip_speed", u.energy.tip_speed},
                {"rotor_induced_speed", u.energy.rotor_induced_speed},
                {"fuselage_drag_ratio", u.energy.fuselage_drag_ratio},
                {"air_density", u.energy.air_density},
                {"rotor_solidity", u.energy.rotor_solidity},
                {"rotor_disc_area", u.energy.rotor_disc_area}}},
              {"radio", radio_to_json(u.radio)}};
  j["aps"] = json::array();
  for (const auto& ap : inst.aps) {
    j["aps"].push_back({{"id", ap.id},
                        {"location", {{"x", ap.location.x}, {"y", ap.location.y}}},
                        {"growth_rate", ap.growth_rate},
                        {"initial_data", ap.initial_data},
                        {"capacity", ap.capacity},
                        {"threshold", ap.threshold},
                        {"tx_power", ap.tx_power}});
  }
  return j.dump(2) + "\n";
}

Layout layout_from_string(const std::string& s) {
  if (s == "clustered" || s == "C" || s == "c") return Layout::Clustered;
  if (s == "random" || s == "R" || s == "r") return Layout::Random;
  if (s == "random-clustered" || s == "RC" || s == "rc") return Layout::RandomClustered;
  throw std::invalid_argument("unknown layout '" + s + "'");
}

const char* to_string(Layout layout) {
  switch (layout) {
    case Layout::Clustered: return "C";
    case Layout::Random: return "R";
    case Layout::RandomClustered: return "RC";
  }
  return "?";
}

namespace {

// std::uniform_* distributions are implementation-defined; these keep
// generated instances identical across standard libraries.
double uniform_real(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(g() >> 11) * 0x1.0p-53);
}

long long uniform_int(std::mt19937_64& g, long long lo, long long hi) {
  return lo + static_cast<long long>(g() % static_cast<std::uint64_t>(hi - lo + 1));
}

double default_battery(int n_aps) {
  if (n_aps <= 15) return 37000.0;
  if (n_aps <= 20) return 46000.0;
  if (n_aps <= 30) return 132000.0;
  return 141000.0;
}

} // namespace

Instance generate_instance(Layout layout, int n_aps, std::uint64_t seed,
                           const GeneratorProfile& p) {
  if (n_aps < 1 || n_aps > 1000)
    throw std::invalid_argument("n_aps must be in 1..1000");
  if (p.area <= 0 || p.growth.first < 1 || p.growth.second < p.growth.first ||
      p.capacity.first <= 0 || p.capacity.second < p.capacity.first ||
      p.threshold_fraction.first <= 0 || p.threshold_fraction.second > 1 ||
      p.threshold_fraction.second < p.threshold_fraction.first ||
      p.initial_fraction.first < 0 || p.initial_fraction.second < p.initial_fraction.first ||
      p.initial_fraction.second > 1 || p.snr.first <= 0 || p.snr.second < p.snr.first)
    throw std::invalid_argument("invalid profile ranges");

  std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(n_aps + 1)) ^
                      static_cast<std::uint64_t>(layout));

  Instance inst;
  inst.name = std::string(to_string(layout)) + std::to_string(n_aps) + "-s" + std::to_string(seed);
  inst.base = {p.area / 2.0, p.area / 2.0};
  inst.penalty = p.penalty;
  inst.uav.speed = p.speed;
  inst.uav.battery = p.battery > 0 ? p.battery : default_battery(n_aps);
  inst.uav.mission_slots = p.mission_slots;
  inst.uav.slot_length = p.slot_length;
  inst.uav.altitude_link = p.altitude_link;
  inst.uav.energy = p.energy;
  inst.uav.radio.bandwidth = p.bandwidth;
  inst.uav.radio.channel_gain_mode = ChannelGainMode::LinearSnr;

  // Positions first: clustered sites sit around n/5 centers, random sites
  // are uniform, the mixed layout draws half from each scheme.
  int n_clustered = 0;
  if (layout == Layout::Clustered) n_clustered = n_aps;
  if (layout == Layout::RandomClustered) n_clustered = n_aps / 2;
  std::vector<Location> pts;
  pts.reserve(static_cast<std::size_t>(n_aps));
  if (n_clustered > 0) {
    int n_centers = std::max(1, (n_clustered + 4) / 5);
    std::vector<Location> centers;
    const double margin = p.area * 0.1;
    for (int c = 0; c < n_centers; ++c)
      centers.push_back({uniform_real(rng, margin, p.area - margin),
                         uniform_real(rng, margin, p.area - margin)});
    const double spread = p.area * 0.025;
    for (int k = 0; k < n_clustered; ++k) {
      const auto& c = centers[static_cast<std::size_t>(k % n_centers)];
      // sum of three uniforms, a cheap deterministic bell shape
      double dx = (uniform_real(rng, -1, 1) + uniform_real(rng, -1, 1) + uniform_real(rng, -1, 1)) * spread;
      double dy = (uniform_real(rng, -1, 1) + uniform_real(rng, -1, 1) + uniform_real(rng, -1, 1)) * spread;
      pts.push_back({std::clamp(c.x + dx, 0.0, p.area), std::clamp(c.y + dy, 0.0, p.area)});
    }
  }
  for (int k = n_clustered; k < n_aps; ++k)
    pts.push_back({uniform_real(rng, 0, p.area), uniform_real(rng, 0, p.area)});

  // Threshold fractions come from the 0.05 grid inside the requested range
  // and capacities are multiples of 20, so fraction * capacity is integral.
  std::vector<double> fractions;
  for (int i = 0; i <= 20; ++i) {
    double f = i * 0.05;
    if (f >= p.threshold_fraction.first - 1e-12 && f <= p.threshold_fraction.second + 1e-12)
      fractions.push_back(f);
  }
  if (fractions.empty()) fractions.push_back(p.threshold_fraction.first);

  for (int k = 0; k < n_aps; ++k) {
    AccessPoint ap;
    ap.id = k + 1;
    ap.location = pts[static_cast<std::size_t>(k)];
    ap.growth_rate = static_cast<double>(
        uniform_int(rng, static_cast<long long>(p.growth.first),
                    static_cast<long long>(p.growth.second)));
    long long cap_units = uniform_int(rng, static_cast<long long>(p.capacity.first / 20.0),
                                      static_cast<long long>(p.capacity.second / 20.0));
    ap.capacity = static_cast<double>(20 * cap_units);
    double frac = fractions[static_cast<std::size_t>(
        uniform_int(rng, 0, static_cast<long long>(fractions.size()) - 1))];
    ap.threshold = std::round(frac * ap.capacity);
    double f0 = uniform_real(rng, p.initial_fraction.first, p.initial_fraction.second);
    ap.initial_data = std::round(f0 * ap.capacity);
    ap.tx_power = uniform_real(rng, p.snr.first, p.snr.second);
    inst.aps.push_back(ap);
  }
  validate_instance(inst);
  return inst;
}

} // namespace tsdc
