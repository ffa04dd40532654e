#include <doctest.h>

#include <sstream>

#include "aos/problems.hpp"

using aos::BinaryVector;
using aos::SukpInstance;

namespace {

// Two items over two elements: item 0 covers element 0 (weight 6),
// item 1 covers element 1 (weight 4); capacity 5.
SukpInstance toy_repair_instance() {
  SukpInstance inst;
  inst.id = "toy";
  inst.m = 2;
  inst.n = 2;
  inst.profits = {10, 9};
  inst.weights = {6, 4};
  inst.incidence = {{1, 0}, {0, 1}};
  inst.capacity = 5;
  return inst;
}

// Items 0 and 1 share element 1.
SukpInstance shared_element_instance() {
  SukpInstance inst;
  inst.id = "shared";
  inst.m = 3;
  inst.n = 3;
  inst.profits = {5, 4, 3};
  inst.weights = {1, 1, 1};
  inst.incidence = {{1, 1, 0}, {0, 1, 0}, {0, 0, 1}};
  inst.capacity = 10;
  return inst;
}

double brute_union_weight(const SukpInstance& inst, const std::string& bits) {
  double w = 0;
  for (std::size_t e = 0; e < inst.n; ++e) {
    bool covered = false;
    for (std::size_t j = 0; j < inst.m; ++j) covered = covered || (bits[j] == '1' && inst.incidence[j][e]);
    if (covered) w += inst.weights[e];
  }
  return w;
}

}  // namespace

TEST_CASE("onemax counts ones") {
  aos::OneMax p(5);
  auto x = BinaryVector::from_string("10110");
  CHECK(p.evaluate(x) == 3.0);
  CHECK(p.id() == "onemax-5");
  CHECK(p.reward_scale(0) == 5.0);
}

TEST_CASE("onemax table ids map to dimensions") {
  CHECK(aos::onemax_table_dimension(1) == 500);
  CHECK(aos::onemax_table_dimension(2) == 750);
  CHECK(aos::onemax_table_dimension(19) == 5000);
  CHECK_THROWS(aos::onemax_table_dimension(0));
  CHECK_THROWS(aos::onemax_table_dimension(20));
}

TEST_CASE("union weight counts shared elements once") {
  const auto inst = shared_element_instance();
  CHECK(aos::sukp_union_weight(inst, BinaryVector::from_string("110")) == 2.0);
  CHECK(aos::sukp_union_weight(inst, BinaryVector::from_string("111")) == 3.0);
  CHECK(aos::sukp_profit(inst, BinaryVector::from_string("110")) == 9.0);
  for (const char* bits : {"000", "001", "010", "011", "100", "101", "110", "111"}) {
    CHECK(aos::sukp_union_weight(inst, BinaryVector::from_string(bits)) == brute_union_weight(inst, bits));
  }
}

TEST_CASE("repair drops the worst ratio item and keeps the one that fits") {
  const auto inst = toy_repair_instance();
  // Ratios 10/7 and 9/5: item 0 is dropped, item 1 fits.
  CHECK(aos::sukp_repair(inst, BinaryVector::from_string("11")).to_string() == "01");
  auto eval = aos::sukp_evaluate(inst, BinaryVector::from_string("11"));
  CHECK(eval.profit == 9.0);
  CHECK(eval.repaired.to_string() == "01");
}

TEST_CASE("repaired solutions are always feasible") {
  const auto inst = aos::generate_sukp(30, 25, 0.2, 0.4, 9, "gen");
  aos::RandomStream rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    BinaryVector x(inst.m);
    for (std::size_t j = 0; j < inst.m; ++j) x.set(j, rng.bernoulli(0.6));
    const auto r = aos::sukp_repair(inst, x);
    CHECK(aos::sukp_union_weight(inst, r) <= inst.capacity);
  }
}

TEST_CASE("generated instance has the requested shape") {
  const auto inst = aos::generate_sukp(100, 85, 0.10, 0.75, 7, "1_1");
  CHECK(inst.m == 100);
  CHECK(inst.n == 85);
  CHECK(inst.incidence.size() == 100);
  double total = 0;
  for (double w : inst.weights) total += w;
  CHECK(inst.capacity == doctest::Approx(0.75 * total));
  std::size_t ones = 0;
  for (const auto& row : inst.incidence) {
    std::size_t r = 0;
    for (auto v : row) r += v;
    CHECK(r >= 1);
    ones += r;
  }
  const double density = static_cast<double>(ones) / (100.0 * 85.0);
  CHECK(density == doctest::Approx(0.10).epsilon(0.25));
  CHECK_NOTHROW(aos::validate(inst));
}

TEST_CASE("instance text round trip") {
  auto inst = aos::generate_sukp(12, 9, 0.3, 0.5, 2, "rt");
  inst.best_known = 123;
  const auto text = aos::serialize_sukp(inst);
  const auto back = aos::parse_sukp(std::string_view(text), "rt");
  CHECK(back == inst);
  CHECK(aos::serialize_sukp(back) == text);
}

TEST_CASE("malformed instance files report the line") {
  const std::string bad = "2 2 5\n10 9\n6 4\n1 0\n0 x\n";
  try {
    aos::parse_sukp(std::string_view(bad), "bad");
    FAIL("expected a parse error");
  } catch (const aos::ParseError& e) {
    CHECK(e.line() == 5);
  }
  CHECK_THROWS_AS(aos::parse_sukp(std::string_view("2 2 5\n10 9\n"), "short"), aos::ParseError);
}

TEST_CASE("greedy fill never exceeds capacity") {
  const auto inst = aos::generate_sukp(40, 40, 0.1, 0.5, 3, "g");
  CHECK(aos::sukp_greedy_profit(inst) > 0.0);
}

TEST_CASE("sukp reward scale falls back to the run best") {
  auto inst = std::make_shared<SukpInstance>(toy_repair_instance());
  aos::Sukp p(inst);
  CHECK(p.reward_scale(0.0) == 1.0);
  CHECK(p.reward_scale(42.0) == 42.0);
  inst->best_known = 100.0;
  CHECK(p.reward_scale(42.0) == 100.0);
}
