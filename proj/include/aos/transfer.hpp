#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aos/selector.hpp"

namespace aos {

inline constexpr std::string_view kArchiveHeader = "AOSMODEL v1";

class ArchiveError : public std::runtime_error {
 public:
  ArchiveError(std::string field, const std::string& detail, const std::string& source = {})
      : std::runtime_error("model archive" + (source.empty() ? "" : " '" + source + "'") + ": " + field +
                           ": " + detail),
        field_(std::move(field)),
        detail_(detail) {}
  const std::string& field() const { return field_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string field_;
  std::string detail_;
};

struct Provenance {
  std::string instance;
  long episodes = 0;
  std::vector<std::uint64_t> seeds;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct ModelArchive {
  SelectorModel model;
  Provenance provenance;

  friend bool operator==(const ModelArchive&, const ModelArchive&) = default;
};

// Canonical text form: header, feature_dim, sections, operators, one line per
// entry "k n_k u_k q_k cr_k c_1 .. c_19", then "meta:" provenance lines.
std::string save_model(const ModelArchive& archive);
void save_model_file(const ModelArchive& archive, const std::string& path);

// Optional expectations are checked against the archive and rejected with an
// ArchiveError naming the field on mismatch.
struct ArchiveExpectations {
  std::optional<int> sections;
  std::optional<std::vector<std::string>> operators;
};

ModelArchive load_model(std::string_view text, const ArchiveExpectations& expect = {});
ModelArchive load_model_file(const std::string& path, const ArchiveExpectations& expect = {});

// (1 - delta) * alpha + delta * beta, entry by entry. Counters are rounded
// half-up; delta = 0 returns alpha and delta = 1 returns beta exactly.
SelectorModel blend(const SelectorModel& alpha, const SelectorModel& beta, double delta);

enum class Variant { Random, OneRun, AllRun, OneRunWithLoad, AllRunWithLoad };

Variant parse_variant(std::string_view name);
std::string variant_label(Variant v);
bool variant_needs_archive(Variant v);
bool variant_carries_model(Variant v);

struct VariantStart {
  SelectorModel model;
  bool training_enabled = true;
  bool always_random = false;
};

// Initial model for repetition rep_index. `saved` is required for the
// loading variants; `carried` is the model left by the previous repetition.
VariantStart variant_policy(Variant variant, int rep_index, const SelectorModel* saved,
                            const SelectorModel* carried, const std::vector<std::string>& operators,
                            int sections);

}  // namespace aos
