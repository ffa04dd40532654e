#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "aos/features.hpp"
#include "aos/random.hpp"

namespace aos {

struct RlParams {
  double epsilon = 0.2;  // rl.epsilon
  double beta = 0.1;     // rl.beta, learning rate
  double gamma = 0.9;    // rl.gamma, discount
  int sections = 5;      // rl.sections
  bool training_enabled = true;  // rl.train

  void validate() const;
};

// (base operator, sub-space) flattened as base * sections + subspace.
struct OperatorId {
  std::size_t base = 0;
  std::size_t subspace = 0;

  std::size_t flat(std::size_t sections) const { return base * sections + subspace; }
  friend bool operator==(const OperatorId&, const OperatorId&) = default;
};

struct CentreEntry {
  StateFeatures centre{};
  long successes = 0;  // n_k
  long usage = 0;      // u_k
  double q = 0.0;      // q_k
  double credit = 0.0; // accumulated reward

  friend bool operator==(const CentreEntry&, const CentreEntry&) = default;
};

// One cluster centre per (operator, sub-space) pair.
class SelectorModel {
 public:
  SelectorModel() = default;
  SelectorModel(std::vector<std::string> operator_names, int sections);

  std::size_t operator_count() const { return names_.size(); }
  int sections() const { return sections_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<std::string>& operator_names() const { return names_; }

  CentreEntry& entry(std::size_t k) { return entries_.at(k); }
  const CentreEntry& entry(std::size_t k) const { return entries_.at(k); }
  CentreEntry& entry(OperatorId id) { return entry(id.flat(static_cast<std::size_t>(sections_))); }
  const CentreEntry& entry(OperatorId id) const {
    return entry(id.flat(static_cast<std::size_t>(sections_)));
  }
  const std::vector<CentreEntry>& entries() const { return entries_; }

  // Success / usage of a base operator summed over all sub-spaces; these feed
  // the operator success-rate feature.
  long base_successes(std::size_t base) const;
  long base_usage(std::size_t base) const;

  friend bool operator==(const SelectorModel&, const SelectorModel&) = default;

 private:
  std::vector<std::string> names_;
  int sections_ = 1;
  std::vector<CentreEntry> entries_;
};

struct Decision {
  OperatorId chosen;
  bool was_random = false;
  std::vector<double> scores;  // one per base operator of the active sub-space
};

// Per base operator, summed over sub-spaces (q is the mean over sub-spaces).
struct CreditSnapshot {
  long usage = 0;
  long successes = 0;
  double credit = 0.0;
  double q = 0.0;
};

// Iteration stage in [0, sections).
std::size_t subspace_index(int iteration, int max_iterations, int sections);

// Negated Euclidean distance to the centre: closer is better.
double score(const SelectorModel& model, const StateFeatures& phi, std::size_t k);

// Index of the best score; ties go to the larger q, then the lowest index.
std::size_t argmax_score(const std::vector<double>& scores, const std::vector<double>& q);

// Epsilon-greedy choice within the active sub-space. Usage counters are only
// touched when training is enabled.
Decision select(SelectorModel& model, const StateFeatures& phi, int iteration, int max_iterations,
                RandomStream& rng, const RlParams& params);

// (f_child - f_parent) * f_star / f_child, or 0 when f_child is 0.
double reward(double f_parent, double f_child, double f_star);

// Bellman update of q_k against the best score of next_phi in the same
// sub-space; on positive reward the centre moves to the running mean of the
// states it succeeded in. Credit accumulates every reward.
void learn(SelectorModel& model, OperatorId id, const StateFeatures& phi, double r,
           const StateFeatures& next_phi, const RlParams& params);

std::vector<CreditSnapshot> snapshot_credit(const SelectorModel& model);

}  // namespace aos
