#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "aos/binary_vector.hpp"
#include "aos/random.hpp"

namespace aos {

struct OperatorContext {
  const BinaryVector& current;
  const BinaryVector& neighbor;
  const BinaryVector& global_best;
  int iteration = 0;
  int max_iterations = 1;
};

struct OperatorParams {
  double p_copy = 0.3;   // op.n.p_copy
  double mr_max = 0.3;   // op.ibin.mr_max
  double mr_min = 0.01;  // op.ibin.mr_min
  double seg_min = 0.1;  // op.nb.seg_min
  double seg_max = 0.5;  // op.nb.seg_max

  // Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

// Every operator guarantees hamming(result, ctx.current) >= 1.
BinaryVector flip_abc(const OperatorContext& ctx, RandomStream& rng);
BinaryVector n_abc(const OperatorContext& ctx, RandomStream& rng, double p_copy = 0.3);
BinaryVector ibin_abc(const OperatorContext& ctx, RandomStream& rng, double mr_max = 0.3,
                      double mr_min = 0.01);
BinaryVector nb_abc(const OperatorContext& ctx, RandomStream& rng, double seg_min = 0.1,
                    double seg_max = 0.5);

// Building blocks with the random choices supplied by the caller.
BinaryVector flip_bit(const BinaryVector& current, std::size_t index);
BinaryVector copy_segment(const BinaryVector& current, const BinaryVector& neighbor,
                          std::size_t start, std::size_t length);
double ibin_mutation_rate(int iteration, int max_iterations, double mr_max, double mr_min);

struct Operator {
  std::string name;
  std::function<BinaryVector(const OperatorContext&, RandomStream&)> apply;
};

using OperatorPool = std::vector<Operator>;

// {flip, n, ibin, nb}, in that order.
OperatorPool default_pool(const OperatorParams& params = {});

}  // namespace aos
