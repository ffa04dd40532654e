#include "aos/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace aos {

namespace {

void check_shapes(const OperatorContext& ctx) {
  if (ctx.current.empty()) throw DimensionError("operator applied to an empty vector");
  if (ctx.neighbor.size() != ctx.current.size() || ctx.global_best.size() != ctx.current.size()) {
    throw DimensionError("operator context vectors differ in length");
  }
}

// Forced move: a candidate equal to its parent gets one random bit flipped.
void ensure_moved(BinaryVector& out, const BinaryVector& current, RandomStream& rng) {
  if (out == current) out.flip(rng.below(out.size()));
}

// Copies each differing bit from the neighbour with probability p.
BinaryVector copy_differing(const OperatorContext& ctx, RandomStream& rng, double p) {
  BinaryVector out = ctx.current;
  for (auto i : differing_positions(ctx.current, ctx.neighbor)) {
    if (rng.bernoulli(p)) out.flip(i);
  }
  ensure_moved(out, ctx.current, rng);
  return out;
}

}  // namespace

void OperatorParams::validate() const {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(p_copy)) throw std::invalid_argument("op.n.p_copy must be in [0, 1]");
  if (!unit(mr_min) || !unit(mr_max) || mr_min > mr_max) {
    throw std::invalid_argument("op.ibin rates need 0 <= mr_min <= mr_max <= 1");
  }
  if (!(seg_min > 0.0) || seg_max > 1.0 || seg_min > seg_max) {
    throw std::invalid_argument("op.nb segment fractions need 0 < seg_min <= seg_max <= 1");
  }
}

BinaryVector flip_bit(const BinaryVector& current, std::size_t index) {
  BinaryVector out = current;
  out.flip(index);
  return out;
}

BinaryVector copy_segment(const BinaryVector& current, const BinaryVector& neighbor,
                          std::size_t start, std::size_t length) {
  if (neighbor.size() != current.size()) throw DimensionError("copy_segment: length mismatch");
  BinaryVector out = current;
  const std::size_t d = current.size();
  for (std::size_t k = 0; k < length && k < d; ++k) {
    const std::size_t i = (start + k) % d;
    out.set(i, neighbor.get(i));
  }
  return out;
}

double ibin_mutation_rate(int iteration, int max_iterations, double mr_max, double mr_min) {
  const double frac = max_iterations > 0 ? static_cast<double>(iteration) / max_iterations : 0.0;
  return mr_max - (mr_max - mr_min) * frac;
}

BinaryVector flip_abc(const OperatorContext& ctx, RandomStream& rng) {
  check_shapes(ctx);
  return flip_bit(ctx.current, rng.below(ctx.current.size()));
}

BinaryVector n_abc(const OperatorContext& ctx, RandomStream& rng, double p_copy) {
  check_shapes(ctx);
  return copy_differing(ctx, rng, p_copy);
}

BinaryVector ibin_abc(const OperatorContext& ctx, RandomStream& rng, double mr_max, double mr_min) {
  check_shapes(ctx);
  return copy_differing(ctx, rng,
                        ibin_mutation_rate(ctx.iteration, ctx.max_iterations, mr_max, mr_min));
}

BinaryVector nb_abc(const OperatorContext& ctx, RandomStream& rng, double seg_min, double seg_max) {
  check_shapes(ctx);
  const std::size_t d = ctx.current.size();
  const double u = rng.uniform(seg_min, seg_max);
  std::size_t length = static_cast<std::size_t>(std::ceil(static_cast<double>(d) * u));
  length = std::min(std::max<std::size_t>(length, 1), d);
  const std::size_t start = rng.below(d);
  BinaryVector out = copy_segment(ctx.current, ctx.neighbor, start, length);
  ensure_moved(out, ctx.current, rng);
  return out;
}

OperatorPool default_pool(const OperatorParams& params) {
  params.validate();
  return {
      {"flip", [](const OperatorContext& ctx, RandomStream& rng) { return flip_abc(ctx, rng); }},
      {"n",
       [p = params.p_copy](const OperatorContext& ctx, RandomStream& rng) {
         return n_abc(ctx, rng, p);
       }},
      {"ibin",
       [hi = params.mr_max, lo = params.mr_min](const OperatorContext& ctx, RandomStream& rng) {
         return ibin_abc(ctx, rng, hi, lo);
       }},
      {"nb",
       [lo = params.seg_min, hi = params.seg_max](const OperatorContext& ctx, RandomStream& rng) {
         return nb_abc(ctx, rng, lo, hi);
       }},
  };
}

}  // namespace aos
