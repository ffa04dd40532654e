#include "aos/colony.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace aos {

void ColonyConfig::validate() const {
  if (population_size < 2) throw std::invalid_argument("population size must be at least 2");
  if (max_iterations < 1) throw std::invalid_argument("max iterations must be at least 1");
  if (trial_limit < 1) throw std::invalid_argument("trial limit must be at least 1");
}

int default_trial_limit(int population_size, std::size_t dimension) {
  const long long raw = static_cast<long long>(population_size) * static_cast<long long>(dimension) / 10;
  return static_cast<int>(std::clamp<long long>(raw, 10, 200));
}

std::vector<double> onlooker_probabilities(const std::vector<Bee>& bees) {
  std::vector<double> p(bees.size(), 0.0);
  if (bees.empty()) return p;
  double total = 0.0;
  for (const auto& b : bees) total += b.fitness;
  if (total <= 0.0) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(bees.size()));
    return p;
  }
  for (std::size_t i = 0; i < bees.size(); ++i) p[i] = bees[i].fitness / total;
  return p;
}

std::optional<std::size_t> scout_phase(std::vector<Bee>& bees, int limit, const Problem& problem,
                                       RandomStream& rng) {
  for (std::size_t i = 0; i < bees.size(); ++i) {
    if (bees[i].trial > limit) {
      bees[i].solution = problem.random_solution(rng, &bees[i].fitness);
      bees[i].trial = 0;
      return i;
    }
  }
  return std::nullopt;
}

namespace {

std::size_t roulette(const std::vector<double>& p, RandomStream& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return i;
  }
  return p.size() - 1;
}

class ColonyRun {
 public:
  ColonyRun(const Problem& problem, const ColonyConfig& config, const OperatorPool& pool,
            SelectorModel& model, const RlParams& params, RandomStream& rng, const RunOptions& options)
      : problem_(problem),
        config_(config),
        pool_(pool),
        model_(model),
        params_(params),
        rng_(rng),
        options_(options) {}

  RunRecord run() {
    const auto start = std::chrono::steady_clock::now();
    initialise();
    RunRecord record;
    record.instance_id = problem_.id();
    record.seed = config_.seed;
    record.trace.reserve(static_cast<std::size_t>(config_.max_iterations));

    for (int t = 0; t < config_.max_iterations; ++t) {
      begin_iteration();
      const std::vector<Bee> parents = bees_;
      const double best_at_start = best_fitness_;
      const BinaryVector best_solution_at_start = best_solution_;
      std::vector<BinaryVector> children(bees_.size());
      std::vector<double> child_fitness(bees_.size());

      for (std::size_t i = 0; i < bees_.size(); ++i) {
        const std::size_t j = random_neighbour(i);
        event(i, j, t, &children[i], &child_fitness[i]);
      }

      rebuild_snapshot(parents, children, child_fitness, best_solution_at_start, best_at_start);

      const auto probs = onlooker_probabilities(bees_);
      for (std::size_t n = 0; n < bees_.size(); ++n) {
        const std::size_t i = roulette(probs, rng_);
        event(i, random_neighbour(i), t, nullptr, nullptr);
      }

      if (auto reset = scout_phase(bees_, config_.trial_limit, problem_, rng_)) {
        last_child_[*reset] = bees_[*reset].solution;
        last_child_fitness_[*reset] = bees_[*reset].fitness;
        last_operator_[*reset] = -1;
        consider_best(bees_[*reset]);
      }
      record.trace.push_back(finish_iteration(t));
    }

    record.best_fitness = best_fitness_;
    record.best_solution = best_solution_;
    record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return record;
  }

 private:
  void initialise() {
    const auto n = static_cast<std::size_t>(config_.population_size);
    bees_.resize(n);
    for (auto& b : bees_) {
      b.solution = problem_.random_solution(rng_, &b.fitness);
      b.trial = 0;
    }
    best_solution_ = bees_[0].solution;
    best_fitness_ = bees_[0].fitness;
    for (const auto& b : bees_) consider_best(b);

    last_child_.resize(n);
    last_child_fitness_.resize(n);
    last_operator_.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
      last_child_[i] = bees_[i].solution;
      last_child_fitness_[i] = bees_[i].fitness;
    }
    std::vector<BinaryVector> sols;
    std::vector<double> fits;
    for (const auto& b : bees_) {
      sols.push_back(b.solution);
      fits.push_back(b.fitness);
    }
    rebuild_snapshot(bees_, sols, fits, best_solution_, best_fitness_);
    cumulative_credit_.assign(pool_.size(), 0.0);
  }

  void begin_iteration() {
    iteration_ops_.assign(pool_.size(), OperatorTrace{});
    feature_sum_.fill(0.0);
    feature_count_ = 0;
  }

  IterationTrace finish_iteration(int t) {
    IterationTrace it;
    it.iteration = t;
    it.global_best = best_fitness_;
    it.operators = iteration_ops_;
    for (std::size_t b = 0; b < pool_.size(); ++b) it.operators[b].credit = cumulative_credit_[b];
    if (options_.record_features && feature_count_ > 0) {
      StateFeatures mean{};
      for (std::size_t k = 0; k < kFeatureCount; ++k) mean[k] = feature_sum_[k] / feature_count_;
      it.mean_features = mean;
    }
    return it;
  }

  std::size_t random_neighbour(std::size_t i) {
    std::size_t j = rng_.below(bees_.size() - 1);
    if (j >= i) ++j;
    return j;
  }

  void rebuild_snapshot(const std::vector<Bee>& parents, const std::vector<BinaryVector>& children,
                        const std::vector<double>& child_fitness, const BinaryVector& best,
                        double best_fitness) {
    snap_.parents.clear();
    snap_.parent_fitness.clear();
    snap_.trials.clear();
    for (const auto& b : parents) {
      snap_.parents.push_back(b.solution);
      snap_.parent_fitness.push_back(b.fitness);
    }
    for (const auto& b : bees_) snap_.trials.push_back(b.trial);
    snap_.children = children;
    snap_.child_fitness = child_fitness;
    snap_.global_best = best;
    snap_.global_best_fitness = best_fitness;
    snap_.trial_max = config_.trial_limit + 1;
    population_ = population_features(snap_);
    best_index_ = snap_.best_parent();
    worst_index_ = snap_.worst_parent();
    // Individual features track the live global best from here on.
    snap_.global_best = best_solution_;
    snap_.global_best_fitness = best_fitness_;
  }

  StateFeatures state_for(const IndividualContext& ctx) {
    StateFeatures phi =
        assemble_state(population_, individual_features(ctx, snap_, best_index_, worst_index_));
    if (options_.on_state) options_.on_state(phi);
    return phi;
  }

  void consider_best(const Bee& b) {
    if (b.fitness > best_fitness_) {
      best_fitness_ = b.fitness;
      best_solution_ = b.solution;
      snap_.global_best = best_solution_;
      snap_.global_best_fitness = best_fitness_;
    }
  }

  void event(std::size_t i, std::size_t j, int t, BinaryVector* child_out, double* child_fitness_out) {
    Bee& bee = bees_[i];
    const int prev_op = last_operator_[i];
    const long prev_sc = prev_op >= 0 ? model_.base_successes(static_cast<std::size_t>(prev_op)) : 0;
    const long prev_tc = prev_op >= 0 ? model_.base_usage(static_cast<std::size_t>(prev_op)) : 0;
    const StateFeatures phi = state_for(IndividualContext{bee.solution, last_child_[i], bee.fitness,
                                                          last_child_fitness_[i], bee.trial, prev_sc,
                                                          prev_tc});
    if (options_.record_features) {
      for (std::size_t k = 0; k < kFeatureCount; ++k) feature_sum_[k] += phi[k];
      ++feature_count_;
    }

    const Decision decision = select(model_, phi, t, config_.max_iterations, rng_, params_);
    if (options_.on_decision) options_.on_decision(t, decision);
    const std::size_t base = decision.chosen.base;

    BinaryVector child = pool_[base].apply(
        OperatorContext{bee.solution, bees_[j].solution, best_solution_, t, config_.max_iterations}, rng_);
    const double child_fitness = problem_.evaluate(child);
    const double r = reward(bee.fitness, child_fitness, problem_.reward_scale(best_fitness_));

    if (params_.training_enabled) {
      const StateFeatures next_phi = state_for(IndividualContext{
          bee.solution, child, bee.fitness, child_fitness, bee.trial,
          model_.base_successes(base) + (r > 0.0 ? 1 : 0), model_.base_usage(base)});
      learn(model_, decision.chosen, phi, r, next_phi, params_);
    }

    auto& op = iteration_ops_[base];
    ++op.usage;
    if (r > 0.0) ++op.successes;
    op.reward += r;
    cumulative_credit_[base] += r;

    if (child_out != nullptr) *child_out = child;
    if (child_fitness_out != nullptr) *child_fitness_out = child_fitness;
    last_child_[i] = child;
    last_child_fitness_[i] = child_fitness;
    last_operator_[i] = static_cast<int>(base);

    if (child_fitness > bee.fitness) {
      bee.solution = std::move(child);
      bee.fitness = child_fitness;
      bee.trial = 0;
      consider_best(bee);
    } else {
      bee.trial = std::min(bee.trial + 1, config_.trial_limit + 1);
    }
  }

  const Problem& problem_;
  const ColonyConfig& config_;
  const OperatorPool& pool_;
  SelectorModel& model_;
  const RlParams& params_;
  RandomStream& rng_;
  const RunOptions& options_;

  std::vector<Bee> bees_;
  BinaryVector best_solution_;
  double best_fitness_ = 0.0;

  std::vector<BinaryVector> last_child_;
  std::vector<double> last_child_fitness_;
  std::vector<int> last_operator_;

  PopulationSnapshot snap_;
  PopulationFeatures population_{};
  std::size_t best_index_ = 0;
  std::size_t worst_index_ = 0;

  std::vector<OperatorTrace> iteration_ops_;
  std::vector<double> cumulative_credit_;
  StateFeatures feature_sum_{};
  long feature_count_ = 0;
};

}  // namespace

RunRecord run_colony(const Problem& problem, const ColonyConfig& config, const OperatorPool& pool,
                     SelectorModel& model, const RlParams& params, RandomStream& rng,
                     const RunOptions& options) {
  config.validate();
  params.validate();
  if (pool.empty()) throw std::invalid_argument("operator pool is empty");
  if (model.operator_count() != pool.size() || model.sections() != params.sections) {
    throw std::invalid_argument("selector model shape does not match the pool and section count");
  }
  ColonyRun run(problem, config, pool, model, params, rng, options);
  return run.run();
}

}  // namespace aos
