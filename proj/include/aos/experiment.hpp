#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aos/colony.hpp"
#include "aos/operators.hpp"
#include "aos/problems.hpp"
#include "aos/selector.hpp"
#include "aos/transfer.hpp"

namespace aos {

enum class ProblemKind { OneMax, Sukp };

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::OneMax;
  std::vector<std::size_t> dims;           // OneMax dimensions
  std::vector<std::string> instances;      // SUKP instance files
  std::vector<Variant> variants{Variant::OneRun};
  int reps = 30;
  std::uint64_t seed = 1;                  // repetition r uses seed + r

  std::optional<int> population;           // default: 20 (OneMax), max(m, n) (SUKP)
  int iterations = 250;
  std::optional<int> limit;                // default: default_trial_limit(N, D)

  RlParams rl;
  OperatorParams ops;
  std::optional<bool> train;               // forces training on/off for every variant
  double delta = 1.0;

  std::string load_model;
  std::string save_model;
  std::string out;
  std::string trace;                       // directory (experiment) or file (solve)
  bool trace_features = false;
  bool timing = false;                     // wall time in outputs; off keeps outputs byte-stable
};

// Applies one key=value setting. Keys are the long flag names without the
// leading dashes plus the dotted rl.* / op.* aliases. Throws
// std::invalid_argument on unknown keys or bad values.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Reads key=value lines ('#' comments, blank lines ignored).
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

std::vector<std::shared_ptr<const Problem>> resolve_problems(const ExperimentConfig& cfg);
ColonyConfig colony_config_for(const Problem& problem, const ExperimentConfig& cfg, std::uint64_t seed);

struct VariantRuns {
  std::string instance_id;
  Variant variant = Variant::OneRun;
  std::vector<RunRecord> runs;   // indexed by repetition
  SelectorModel final_model;     // model leaving the last repetition
};

// R repetitions of one variant on one problem. Variants that carry their
// model run sequentially; the others fan repetitions out over OpenMP threads.
VariantRuns run_variant(const Problem& problem, Variant variant, const ExperimentConfig& cfg,
                        const SelectorModel* saved);

struct SummaryRow {
  std::string instance_id;
  std::string variant;
  double rank = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double std = 0.0;
  std::optional<double> p_value;  // against the baseline (first) variant
  int reps = 0;
  double seconds = 0.0;
};

struct ExperimentTable {
  std::vector<std::string> variants;  // first one is the baseline
  std::vector<SummaryRow> rows;
  std::map<std::string, double> mean_rank;
};

// One row of per-repetition results, the input to summarize().
struct RunResult {
  std::string instance_id;
  std::string variant;
  int rep = 0;
  std::uint64_t seed = 0;
  double best_fitness = 0.0;
  double seconds = 0.0;
};

ExperimentTable summarize(const std::vector<RunResult>& results, const std::vector<std::string>& variants);

struct ExperimentResult {
  ExperimentTable table;
  std::vector<RunResult> results;
  std::vector<VariantRuns> details;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Trains an all-run model over cfg.reps repetitions on one problem.
ModelArchive train_model(const Problem& problem, const ExperimentConfig& cfg);

void write_summary_csv(std::ostream& out, const ExperimentTable& table, bool timing);
void write_runs_csv(std::ostream& out, const std::vector<RunResult>& results, bool timing);
std::vector<RunResult> read_runs_csv(std::istream& in);
void write_trace_csv(std::ostream& out, const RunRecord& record, const std::vector<std::string>& operators,
                     int population_size, bool with_features);

std::string summary_csv_string(const ExperimentTable& table, bool timing);

}  // namespace aos
