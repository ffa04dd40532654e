#include "aos/selector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aos {

void RlParams::validate() const {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("rl.epsilon must be in [0, 1]");
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("rl.beta must be in (0, 1]");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("rl.gamma must be in [0, 1]");
  if (sections < 1) throw std::invalid_argument("rl.sections must be at least 1");
}

SelectorModel::SelectorModel(std::vector<std::string> operator_names, int sections)
    : names_(std::move(operator_names)), sections_(sections) {
  if (names_.empty()) throw std::invalid_argument("selector model needs at least one operator");
  if (sections < 1) throw std::invalid_argument("selector model needs at least one section");
  entries_.resize(names_.size() * static_cast<std::size_t>(sections));
}

long SelectorModel::base_successes(std::size_t base) const {
  long total = 0;
  for (int s = 0; s < sections_; ++s) total += entry(OperatorId{base, static_cast<std::size_t>(s)}).successes;
  return total;
}

long SelectorModel::base_usage(std::size_t base) const {
  long total = 0;
  for (int s = 0; s < sections_; ++s) total += entry(OperatorId{base, static_cast<std::size_t>(s)}).usage;
  return total;
}

std::size_t subspace_index(int iteration, int max_iterations, int sections) {
  if (sections <= 1 || max_iterations <= 0) return 0;
  const long long stage = static_cast<long long>(iteration) * sections / max_iterations;
  return static_cast<std::size_t>(std::clamp<long long>(stage, 0, sections - 1));
}

double score(const SelectorModel& model, const StateFeatures& phi, std::size_t k) {
  const auto& c = model.entry(k).centre;
  double sq = 0.0;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const double d = phi[i] - c[i];
    sq += d * d;
  }
  return -std::sqrt(sq);
}

std::size_t argmax_score(const std::vector<double>& scores, const std::vector<double>& q) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best] || (scores[i] == scores[best] && q[i] > q[best])) best = i;
  }
  return best;
}

Decision select(SelectorModel& model, const StateFeatures& phi, int iteration, int max_iterations,
                RandomStream& rng, const RlParams& params) {
  const auto sections = static_cast<std::size_t>(model.sections());
  const std::size_t sub = subspace_index(iteration, max_iterations, model.sections());
  const std::size_t ops = model.operator_count();

  Decision d;
  d.scores.resize(ops);
  std::vector<double> q(ops);
  for (std::size_t b = 0; b < ops; ++b) {
    const std::size_t k = b * sections + sub;
    d.scores[b] = score(model, phi, k);
    q[b] = model.entry(k).q;
  }

  const double rnd = rng.uniform();
  std::size_t base = 0;
  if (rnd >= params.epsilon) {
    base = argmax_score(d.scores, q);
  } else {
    d.was_random = true;
    base = rng.below(ops);
  }
  d.chosen = OperatorId{base, sub};
  if (params.training_enabled) ++model.entry(d.chosen).usage;
  return d;
}

double reward(double f_parent, double f_child, double f_star) {
  if (f_child == 0.0) return 0.0;
  return (f_child - f_parent) * f_star / f_child;
}

void learn(SelectorModel& model, OperatorId id, const StateFeatures& phi, double r,
           const StateFeatures& next_phi, const RlParams& params) {
  if (!params.training_enabled) return;
  const auto sections = static_cast<std::size_t>(model.sections());

  double next_best = -std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < model.operator_count(); ++b) {
    next_best = std::max(next_best, score(model, next_phi, b * sections + id.subspace));
  }

  CentreEntry& e = model.entry(id);
  e.q += params.beta * (r + params.gamma * next_best - e.q);
  e.credit += r;
  if (r > 0.0) {
    ++e.successes;
    const double n = static_cast<double>(e.successes);
    for (std::size_t i = 0; i < kFeatureCount; ++i) e.centre[i] += (phi[i] - e.centre[i]) / n;
  }
}

std::vector<CreditSnapshot> snapshot_credit(const SelectorModel& model) {
  std::vector<CreditSnapshot> out(model.operator_count());
  for (std::size_t b = 0; b < model.operator_count(); ++b) {
    for (int s = 0; s < model.sections(); ++s) {
      const auto& e = model.entry(OperatorId{b, static_cast<std::size_t>(s)});
      out[b].usage += e.usage;
      out[b].successes += e.successes;
      out[b].credit += e.credit;
      out[b].q += e.q;
    }
    out[b].q /= model.sections();
  }
  return out;
}

}  // namespace aos
