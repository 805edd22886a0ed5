#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "support.hpp"
#include "tsdc/instance.hpp"

using namespace tsdc;

namespace {

const char* kThreeAp = R"(TSDC 1
# name: hand-three
# a comment line
UAV 10 37000 1200 1 1 79.85 88.63 120 4.03 0.6 1.225 0.05 0.503 1000 15
BASE 500 500
AP 1 120.5 340 4 900 3000 2400 2.4
AP 2 800 120 6 2000 5000 4000 3.75
AP 3 410 910 8 1500 4000 3600 6.4
)";

} // namespace

TEST_CASE("minimal file with no APs parses") {
  const std::string text = "TSDC 1\nUAV 10 1000 100 1 1 79.85 88.63 120 4.03 0.6 1.225 0.05 0.503 1000 15\nBASE 0 0\n";
  const Instance inst = parse_instance(text);
  CHECK(inst.ap_count() == 0);
  CHECK(inst.uav.mission_slots == 100);
}

TEST_CASE("threshold above capacity is rejected with the field name") {
  const std::string text =
      "TSDC 1\nUAV 10 1000 100 1 1 79.85 88.63 120 4.03 0.6 1.225 0.05 0.503 1000 15\n"
      "BASE 0 0\nAP 1 5 5 2 10 100 150 3\n";
  CHECK_THROWS_WITH_AS(parse_instance(text), doctest::Contains("threshold exceeds capacity"),
                       ParseError);
}

TEST_CASE("malformed numbers and duplicate ids report the line") {
  const std::string dup =
      "TSDC 1\nUAV 10 1000 100 1 1 79.85 88.63 120 4.03 0.6 1.225 0.05 0.503 1000 15\n"
      "BASE 0 0\nAP 1 5 5 2 10 100 80 3\nAP 1 6 6 2 10 100 80 3\n";
  try {
    parse_instance(dup);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 5);
    CHECK(e.field() == "id");
  }
  const std::string bad =
      "TSDC 1\nUAV 10 1000 100 1 1 79.85 88.63 120 4.03 0.6 1.225 0.05 0.503 1000 15\n"
      "BASE 0 zzz\n";
  try {
    parse_instance(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.field() == "y");
  }
}

TEST_CASE("hand-written file round-trips structurally and byte-identically") {
  const Instance inst = parse_instance(kThreeAp);
  CHECK(inst.name == "hand-three");
  CHECK(inst.ap_count() == 3);
  const std::string canon = write_instance(inst);
  const Instance again = parse_instance(canon);
  CHECK(again == inst);
  CHECK(write_instance(again) == canon);
}

TEST_CASE("json mirror round-trips") {
  const Instance inst = parse_instance(kThreeAp);
  const Instance again = parse_instance(write_instance_json(inst));
  CHECK(again == inst);
}

TEST_CASE("header-only output for an empty instance") {
  Instance inst;
  inst.uav.battery = 1000;
  inst.uav.mission_slots = 10;
  const std::string text = write_instance(inst);
  CHECK(text.find("AP ") == std::string::npos);
  CHECK(parse_instance(text).ap_count() == 0);
}

TEST_CASE("generation is deterministic") {
  const Instance a = generate_instance(Layout::Random, 1, 7);
  const Instance b = generate_instance(Layout::Random, 1, 7);
  CHECK(a == b);
  const Instance c = generate_instance(Layout::Random, 1, 8);
  CHECK_FALSE(a == c);
}

TEST_CASE("clustered generation keeps thresholds on the configured grid") {
  const Instance inst = generate_instance(Layout::Clustered, 15, 1);
  CHECK(inst.ap_count() == 15);
  for (const auto& ap : inst.aps) {
    const double ratio = ap.threshold / ap.capacity;
    CHECK(ratio >= 0.75);
    CHECK(ratio <= 0.90);
    CHECK(ap.growth_rate > 0);
    CHECK(ap.threshold <= ap.capacity);
    CHECK(ap.initial_data <= ap.capacity);
    CHECK(ap.tx_power >= 2.4);
    CHECK(ap.tx_power <= 6.4);
  }
}

TEST_CASE("random layouts are sparser than clustered ones") {
  auto mean_nn = [](const Instance& inst) {
    double sum = 0;
    for (const auto& a : inst.aps) {
      double best = 1e18;
      for (const auto& b : inst.aps) {
        if (a.id == b.id) continue;
        best = std::min(best, std::hypot(a.location.x - b.location.x,
                                         a.location.y - b.location.y));
      }
      sum += best;
    }
    return sum / static_cast<double>(inst.ap_count());
  };
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const double random_nn = mean_nn(generate_instance(Layout::Random, 20, seed));
    const double clustered_nn = mean_nn(generate_instance(Layout::Clustered, 20, seed));
    CHECK(random_nn > clustered_nn);
  }
}

TEST_CASE("mixed layout splits sites between both schemes") {
  const Instance inst = generate_instance(Layout::RandomClustered, 20, 3);
  CHECK(inst.ap_count() == 20);
  std::set<int> ids;
  for (const auto& ap : inst.aps) ids.insert(ap.id);
  CHECK(ids.size() == 20);
  CHECK(*ids.begin() == 1);
  CHECK(*ids.rbegin() == 20);
}

TEST_CASE("two structurally equal instances serialize identically") {
  const Instance a = generate_instance(Layout::Clustered, 6, 42);
  Instance b = a;
  CHECK(write_instance(a) == write_instance(b));
}

TEST_CASE("invalid profile ranges are rejected") {
  GeneratorProfile p;
  p.snr = {6.4, 2.4};
  CHECK_THROWS_AS(generate_instance(Layout::Random, 5, 1, p), std::invalid_argument);
  CHECK_THROWS_AS(generate_instance(Layout::Random, 0, 1), std::invalid_argument);
}
