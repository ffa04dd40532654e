#include <doctest.h>

#include "aos/transfer.hpp"

using aos::ModelArchive;
using aos::SelectorModel;
using aos::Variant;

namespace {

const std::vector<std::string> kOps = {"flip", "n", "ibin", "nb"};

SelectorModel trained_model() {
  SelectorModel m(kOps, 2);
  aos::RandomStream rng(9);
  aos::RlParams p;
  p.sections = 2;
  for (int i = 0; i < 200; ++i) {
    aos::StateFeatures phi{};
    for (auto& v : phi) v = rng.uniform(-1.0, 1.0);
    const auto d = aos::select(m, phi, i % 20, 20, rng, p);
    aos::learn(m, d.chosen, phi, rng.uniform(-3.0, 5.0), phi, p);
  }
  return m;
}

std::string replace_line(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("archive round trip is exact and canonical") {
  ModelArchive a{trained_model(), {"onemax-2500", 30, {1, 2, 3}}};
  const auto text = aos::save_model(a);
  const auto back = aos::load_model(text);
  CHECK(back == a);
  CHECK(aos::save_model(back) == text);
}

TEST_CASE("untrained archive") {
  ModelArchive a{SelectorModel(kOps, 5), {}};
  const auto back = aos::load_model(aos::save_model(a));
  CHECK(back.provenance.episodes == 0);
  for (const auto& e : back.model.entries()) CHECK(e.centre == aos::StateFeatures{});
}

TEST_CASE("loaded model selects like the saved one") {
  const auto m = trained_model();
  const auto back = aos::load_model(aos::save_model(ModelArchive{m, {}})).model;
  aos::RlParams p;
  p.sections = 2;
  p.training_enabled = false;
  aos::RandomStream a(3), b(3), states(4);
  SelectorModel m1 = m, m2 = back;
  for (int i = 0; i < 100; ++i) {
    aos::StateFeatures phi{};
    for (auto& v : phi) v = states.uniform();
    CHECK(aos::select(m1, phi, i % 20, 20, a, p).chosen == aos::select(m2, phi, i % 20, 20, b, p).chosen);
  }
}

TEST_CASE("archive errors name the field") {
  const auto text = aos::save_model(ModelArchive{SelectorModel(kOps, 1), {}});
  try {
    aos::load_model(replace_line(text, "feature_dim 19", "feature_dim 18"));
    FAIL("expected an error");
  } catch (const aos::ArchiveError& e) {
    CHECK(e.field() == "feature_dim");
  }
  try {
    aos::load_model(replace_line(text, "AOSMODEL v1", "AOSMODEL v2"));
    FAIL("expected an error");
  } catch (const aos::ArchiveError& e) {
    CHECK(e.field() == "version");
  }
  CHECK_THROWS_AS(aos::load_model(text.substr(0, text.size() / 2)), aos::ArchiveError);
  CHECK_THROWS_AS(aos::load_model(""), aos::ArchiveError);

  aos::ArchiveExpectations want;
  want.sections = 5;
  try {
    aos::load_model(text, want);
    FAIL("expected an error");
  } catch (const aos::ArchiveError& e) {
    CHECK(e.field() == "sections");
  }
  want = {};
  want.operators = std::vector<std::string>{"flip", "n"};
  CHECK_THROWS_AS(aos::load_model(text, want), aos::ArchiveError);
}

TEST_CASE("blend") {
  SelectorModel a(kOps, 1), b(kOps, 1);
  for (std::size_t k = 0; k < a.size(); ++k) {
    b.entry(k).centre.fill(1.0);
    b.entry(k).q = 2.0;
    b.entry(k).successes = 4;
  }
  const auto mid = aos::blend(a, b, 0.5);
  for (const auto& e : mid.entries()) {
    for (double v : e.centre) CHECK(v == 0.5);
    CHECK(e.q == 1.0);
    CHECK(e.successes == 2);
  }
  CHECK(aos::blend(a, b, 0.0) == a);
  CHECK(aos::blend(a, b, 1.0) == b);
  CHECK_THROWS(aos::blend(a, SelectorModel(kOps, 2), 0.5));
}

TEST_CASE("variant names") {
  for (auto v : {Variant::Random, Variant::OneRun, Variant::AllRun, Variant::OneRunWithLoad,
                 Variant::AllRunWithLoad}) {
    CHECK(aos::parse_variant(aos::variant_label(v)) == v);
  }
  CHECK_THROWS(aos::parse_variant("sometimes"));
  CHECK(aos::variant_needs_archive(Variant::OneRunWithLoad));
  CHECK_FALSE(aos::variant_needs_archive(Variant::AllRun));
  CHECK(aos::variant_carries_model(Variant::AllRun));
  CHECK_FALSE(aos::variant_carries_model(Variant::OneRun));
}

TEST_CASE("variant start models") {
  const auto saved = trained_model();
  SelectorModel carried = saved;
  carried.entry(0).q = 123.0;
  const SelectorModel fresh(kOps, 2);

  auto s = aos::variant_policy(Variant::Random, 3, nullptr, nullptr, kOps, 2);
  CHECK(s.model == fresh);
  CHECK(s.always_random);
  CHECK_FALSE(s.training_enabled);

  s = aos::variant_policy(Variant::OneRun, 5, nullptr, &carried, kOps, 2);
  CHECK(s.model == fresh);
  CHECK(s.training_enabled);

  CHECK(aos::variant_policy(Variant::AllRun, 0, nullptr, &carried, kOps, 2).model == fresh);
  CHECK(aos::variant_policy(Variant::AllRun, 1, nullptr, &carried, kOps, 2).model == carried);
  CHECK(aos::variant_policy(Variant::OneRunWithLoad, 4, &saved, &carried, kOps, 2).model == saved);
  CHECK(aos::variant_policy(Variant::AllRunWithLoad, 0, &saved, nullptr, kOps, 2).model == saved);
  CHECK(aos::variant_policy(Variant::AllRunWithLoad, 1, &saved, &carried, kOps, 2).model == carried);
  CHECK_THROWS(aos::variant_policy(Variant::OneRunWithLoad, 0, nullptr, nullptr, kOps, 2));
}
