#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aos/binary_vector.hpp"
#include "aos/features.hpp"
#include "aos/operators.hpp"
#include "aos/problems.hpp"
#include "aos/random.hpp"
#include "aos/selector.hpp"

namespace aos {

struct ColonyConfig {
  int population_size = 20;
  int max_iterations = 250;
  int trial_limit = 100;
  std::uint64_t seed = 0;

  void validate() const;
};

// N * D / 10, clamped to [10, 200].
int default_trial_limit(int population_size, std::size_t dimension);

struct Bee {
  BinaryVector solution;
  double fitness = 0.0;
  int trial = 0;
};

// Per base operator, for one iteration. Credit is cumulative over the run;
// the other fields count this iteration only.
struct OperatorTrace {
  long usage = 0;
  long successes = 0;
  double credit = 0.0;
  double reward = 0.0;
};

struct IterationTrace {
  int iteration = 0;
  double global_best = 0.0;
  std::vector<OperatorTrace> operators;
  std::optional<StateFeatures> mean_features;  // mean selection state of the iteration
};

struct RunRecord {
  std::string instance_id;
  std::string variant;
  std::uint64_t seed = 0;
  double best_fitness = 0.0;
  BinaryVector best_solution;
  std::vector<IterationTrace> trace;
  double seconds = 0.0;
};

struct RunOptions {
  bool record_features = false;
  // Called with every assembled state (pre-selection and post-evaluation).
  std::function<void(const StateFeatures&)> on_state;
  std::function<void(int iteration, const Decision&)> on_decision;
};

// fitness_i / sum, or uniform when the sum is zero.
std::vector<double> onlooker_probabilities(const std::vector<Bee>& bees);

// Resets the first bee whose trial exceeds limit. Returns its index.
std::optional<std::size_t> scout_phase(std::vector<Bee>& bees, int limit, const Problem& problem,
                                       RandomStream& rng);

// One full run. The model is read (and trained when params.training_enabled)
// in place.
RunRecord run_colony(const Problem& problem, const ColonyConfig& config, const OperatorPool& pool,
                     SelectorModel& model, const RlParams& params, RandomStream& rng,
                     const RunOptions& options = {});

}  // namespace aos
