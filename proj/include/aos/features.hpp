#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "aos/binary_vector.hpp"

namespace aos {

inline constexpr std::size_t kFeatureCount = 19;
inline constexpr std::size_t kPopulationFeatureCount = 11;
inline constexpr std::size_t kIndividualFeatureCount = 8;

// phi[0] holds feature 1, phi[18] holds feature 19.
using StateFeatures = std::array<double, kFeatureCount>;
using PopulationFeatures = std::array<double, kPopulationFeatureCount>;
using IndividualFeatures = std::array<double, kIndividualFeatureCount>;

// Parents and the children produced from them in one phase, aligned by index.
struct PopulationSnapshot {
  std::vector<BinaryVector> parents;
  std::vector<BinaryVector> children;
  std::vector<double> parent_fitness;
  std::vector<double> child_fitness;
  std::vector<int> trials;
  BinaryVector global_best;
  double global_best_fitness = 0.0;
  int trial_max = 1;

  std::size_t size() const { return parents.size(); }
  std::size_t dimension() const { return global_best.size(); }

  // Index of the best / worst parent (lowest index on ties).
  std::size_t best_parent() const;
  std::size_t worst_parent() const;

  // Throws std::invalid_argument when sizes disagree or N < 2.
  void validate() const;
};

struct IndividualContext {
  const BinaryVector& parent;
  const BinaryVector& child;
  double parent_fitness = 0.0;
  double child_fitness = 0.0;
  int trial = 0;
  long success_count = 0;  // of the operator under evaluation
  long total_count = 0;
};

// Features 1..11. The parallel kernel splits pairwise loops across OpenMP
// threads; the serial version is the reference it is tested against.
PopulationFeatures population_features(const PopulationSnapshot& snap);
PopulationFeatures population_features_serial(const PopulationSnapshot& snap);

// Features 12..19. p_best / p_worst come from the snapshot parents.
IndividualFeatures individual_features(const IndividualContext& ctx, const PopulationSnapshot& snap);
IndividualFeatures individual_features(const IndividualContext& ctx, const PopulationSnapshot& snap,
                                       std::size_t best_index, std::size_t worst_index);

// Concatenates both groups and clamps: proportions to [0, 1], fitness ratios
// to [-1, 1]. Feature 9 is recomputed from the clamped features 4 and 8.
StateFeatures assemble_state(const PopulationFeatures& population, const IndividualFeatures& individual);
StateFeatures assemble_state(const PopulationSnapshot& snap, const IndividualContext& ctx);

// True when every component is finite and inside its declared range.
bool within_declared_ranges(const StateFeatures& phi);

// 1-based feature index -> whether it is a [0, 1] proportion (otherwise [-1, 1]).
bool is_proportion_feature(std::size_t index);

}  // namespace aos
