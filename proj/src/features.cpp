#include "aos/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aos {

namespace {

double safe_div(double num, double den) { return den != 0.0 ? num / den : 0.0; }

// Shared by both kernels: everything that is linear in N.
struct LinearTerms {
  double improving_fraction = 0.0;   // phi3
  double beat_best_fraction = 0.0;   // phi4
  double improvement_amount = 0.0;   // phi5
  double velocity = 0.0;             // phi6
  double reliability = 0.0;          // phi7
  double evolvability = 0.0;         // phi8
  double mean_trial = 0.0;           // phi10
};

LinearTerms linear_terms(const PopulationSnapshot& snap) {
  const std::size_t n = snap.size();
  const double nd = static_cast<double>(n);
  const double dim = static_cast<double>(snap.dimension());
  LinearTerms out;

  std::size_t improving = 0;
  std::size_t beat_best = 0;
  double amount = 0.0;
  double reliability = 0.0;
  double trial_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double fp = snap.parent_fitness[i];
    const double fc = snap.child_fitness[i];
    if (fc > fp) {
      ++improving;
      amount += safe_div(fc - fp, fc);
    }
    if (fc > snap.global_best_fitness) ++beat_best;
    reliability += (static_cast<double>(hamming(snap.global_best, snap.parents[i])) -
                    static_cast<double>(hamming(snap.global_best, snap.children[i]))) /
                   dim;
    trial_sum += snap.trials[i];
  }
  out.improving_fraction = static_cast<double>(improving) / nd;
  out.beat_best_fraction = static_cast<double>(beat_best) / nd;
  out.improvement_amount = improving > 0 ? amount / static_cast<double>(improving) : 0.0;
  out.reliability = reliability / nd;
  out.mean_trial = safe_div(trial_sum / nd, static_cast<double>(snap.trial_max));

  const double max_p = *std::max_element(snap.parent_fitness.begin(), snap.parent_fitness.end());
  const double max_c = *std::max_element(snap.child_fitness.begin(), snap.child_fitness.end());
  out.velocity = safe_div(max_c - max_p, max_p);

  double mean_p = 0.0;
  for (double f : snap.parent_fitness) mean_p += f;
  mean_p /= nd;
  double var = 0.0;
  for (double f : snap.parent_fitness) var += (f - mean_p) * (f - mean_p);
  const double sigma = std::sqrt(var / nd);
  if (sigma > 0.0) {
    double gap = 0.0;
    for (double fc : snap.child_fitness) gap += std::abs(snap.global_best_fitness - fc);
    out.evolvability = gap / nd / sigma;
  }
  return out;
}

PopulationFeatures finish(const PopulationSnapshot& snap, const LinearTerms& lin,
                          double parent_distance_sum, double fitness_gap_sum,
                          std::size_t diameter) {
  const double n = static_cast<double>(snap.size());
  const double pairs = n * (n - 1.0) / 2.0;
  const double dim = static_cast<double>(snap.dimension());
  const double max_p = *std::max_element(snap.parent_fitness.begin(), snap.parent_fitness.end());

  PopulationFeatures phi{};
  phi[0] = parent_distance_sum / (dim * pairs);
  phi[1] = safe_div(fitness_gap_sum / pairs, max_p);
  phi[2] = lin.improving_fraction;
  phi[3] = lin.beat_best_fraction;
  phi[4] = lin.improvement_amount;
  phi[5] = lin.velocity;
  phi[6] = lin.reliability;
  phi[7] = lin.evolvability;
  phi[8] = phi[3] * phi[7];
  phi[9] = lin.mean_trial;
  phi[10] = static_cast<double>(diameter) / dim;
  return phi;
}

const BinaryVector& pooled(const PopulationSnapshot& snap, std::size_t k) {
  const std::size_t n = snap.size();
  return k < n ? snap.parents[k] : snap.children[k - n];
}

}  // namespace

std::size_t PopulationSnapshot::best_parent() const {
  return static_cast<std::size_t>(
      std::max_element(parent_fitness.begin(), parent_fitness.end()) - parent_fitness.begin());
}

std::size_t PopulationSnapshot::worst_parent() const {
  return static_cast<std::size_t>(
      std::min_element(parent_fitness.begin(), parent_fitness.end()) - parent_fitness.begin());
}

void PopulationSnapshot::validate() const {
  const std::size_t n = parents.size();
  if (n < 2) throw std::invalid_argument("population features need at least two parents");
  if (children.size() != n || parent_fitness.size() != n || child_fitness.size() != n ||
      trials.size() != n) {
    throw std::invalid_argument("population snapshot arrays differ in length");
  }
  const std::size_t d = global_best.size();
  if (d == 0) throw DimensionError("population snapshot has zero dimension");
  for (std::size_t i = 0; i < n; ++i) {
    if (parents[i].size() != d || children[i].size() != d) {
      throw DimensionError("population snapshot vectors differ in length");
    }
  }
  if (trial_max < 1) throw std::invalid_argument("trial_max must be positive");
}

PopulationFeatures population_features_serial(const PopulationSnapshot& snap) {
  snap.validate();
  const std::size_t n = snap.size();

  std::size_t distance_sum = 0;
  double gap_sum = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      distance_sum += hamming(snap.parents[i], snap.parents[j]);
      gap_sum += std::abs(snap.parent_fitness[i] - snap.parent_fitness[j]);
    }
  }
  std::size_t diameter = 0;
  for (std::size_t a = 0; a + 1 < 2 * n; ++a) {
    for (std::size_t b = a + 1; b < 2 * n; ++b) {
      diameter = std::max(diameter, hamming(pooled(snap, a), pooled(snap, b)));
    }
  }
  return finish(snap, linear_terms(snap), static_cast<double>(distance_sum), gap_sum, diameter);
}

PopulationFeatures population_features(const PopulationSnapshot& snap) {
  snap.validate();
  const long n = static_cast<long>(snap.size());
  const long pool = 2 * n;

  // Per-row partial results, reduced serially afterwards so the outcome does
  // not depend on the thread count.
  std::vector<std::size_t> row_distance(static_cast<std::size_t>(n), 0);
  std::vector<double> row_gap(static_cast<std::size_t>(n), 0.0);
  std::vector<std::size_t> row_diameter(static_cast<std::size_t>(pool), 0);

#pragma omp parallel for schedule(dynamic, 4) if (n >= 32)
  for (long i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    std::size_t dist = 0;
    double gap = 0.0;
    for (std::size_t j = ui + 1; j < static_cast<std::size_t>(n); ++j) {
      dist += hamming(snap.parents[ui], snap.parents[j]);
      gap += std::abs(snap.parent_fitness[ui] - snap.parent_fitness[j]);
    }
    row_distance[ui] = dist;
    row_gap[ui] = gap;
  }

#pragma omp parallel for schedule(dynamic, 4) if (n >= 32)
  for (long a = 0; a < pool; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    std::size_t best = 0;
    for (std::size_t b = ua + 1; b < static_cast<std::size_t>(pool); ++b) {
      best = std::max(best, hamming(pooled(snap, ua), pooled(snap, b)));
    }
    row_diameter[ua] = best;
  }

  std::size_t distance_sum = 0;
  double gap_sum = 0.0;
  for (std::size_t i = 0; i < row_distance.size(); ++i) {
    distance_sum += row_distance[i];
    gap_sum += row_gap[i];
  }
  const std::size_t diameter = *std::max_element(row_diameter.begin(), row_diameter.end());
  return finish(snap, linear_terms(snap), static_cast<double>(distance_sum), gap_sum, diameter);
}

IndividualFeatures individual_features(const IndividualContext& ctx, const PopulationSnapshot& snap) {
  return individual_features(ctx, snap, snap.best_parent(), snap.worst_parent());
}

IndividualFeatures individual_features(const IndividualContext& ctx, const PopulationSnapshot& snap,
                                       std::size_t best_index, std::size_t worst_index) {
  const std::size_t d = snap.dimension();
  if (ctx.parent.size() != d || ctx.child.size() != d) {
    throw DimensionError("individual features: vector length does not match the snapshot");
  }
  const double dim = static_cast<double>(d);
  const double f_star = snap.global_best_fitness;
  IndividualFeatures phi{};
  phi[0] = static_cast<double>(hamming(snap.global_best, ctx.parent)) / dim;
  phi[1] = static_cast<double>(hamming(ctx.parent, ctx.child)) / dim;
  phi[2] = safe_div(f_star - ctx.child_fitness, f_star);
  phi[3] = safe_div(ctx.child_fitness - ctx.parent_fitness, ctx.child_fitness);
  phi[4] = static_cast<double>(hamming(snap.parents[best_index], ctx.parent)) / dim;
  phi[5] = static_cast<double>(hamming(snap.parents[worst_index], ctx.parent)) / dim;
  phi[6] = safe_div(static_cast<double>(ctx.trial), static_cast<double>(snap.trial_max));
  phi[7] = ctx.total_count > 0
               ? static_cast<double>(ctx.success_count) / static_cast<double>(ctx.total_count)
               : 0.0;
  return phi;
}

bool is_proportion_feature(std::size_t index) {
  switch (index) {
    case 1: case 3: case 4: case 10: case 11: case 12: case 13:
    case 16: case 17: case 18: case 19:
      return true;
    default:
      return false;
  }
}

StateFeatures assemble_state(const PopulationFeatures& population, const IndividualFeatures& individual) {
  StateFeatures phi{};
  std::copy(population.begin(), population.end(), phi.begin());
  std::copy(individual.begin(), individual.end(), phi.begin() + kPopulationFeatureCount);
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    double v = std::isfinite(phi[k]) ? phi[k] : 0.0;
    const double lo = is_proportion_feature(k + 1) ? 0.0 : -1.0;
    phi[k] = std::clamp(v, lo, 1.0);
  }
  phi[8] = phi[3] * phi[7];
  return phi;
}

StateFeatures assemble_state(const PopulationSnapshot& snap, const IndividualContext& ctx) {
  return assemble_state(population_features(snap), individual_features(ctx, snap));
}

bool within_declared_ranges(const StateFeatures& phi) {
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    if (!std::isfinite(phi[k])) return false;
    const double lo = is_proportion_feature(k + 1) ? 0.0 : -1.0;
    if (phi[k] < lo || phi[k] > 1.0) return false;
  }
  return true;
}

}  // namespace aos
