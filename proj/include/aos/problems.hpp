#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aos/binary_vector.hpp"
#include "aos/random.hpp"

namespace aos {

// A maximisation problem over fixed-length bit strings with non-negative
// objective values.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual std::string id() const = 0;
  virtual std::size_t dimension() const = 0;

  // Scores x. Problems with constraints repair x in place first, so the
  // returned value always belongs to the (possibly modified) x.
  virtual double evaluate(BinaryVector& x) const = 0;

  // Reference optimum used to scale rewards; run_best is the best fitness seen
  // so far in the current run.
  virtual double reward_scale(double run_best) const = 0;

  // Uniform random bits, made valid and scored.
  BinaryVector random_solution(RandomStream& rng, double* fitness = nullptr) const;
};

// ---------------------------------------------------------------- OneMax

class OneMax final : public Problem {
 public:
  explicit OneMax(std::size_t dimension);

  std::string id() const override;
  std::size_t dimension() const override { return dimension_; }
  double evaluate(BinaryVector& x) const override;
  double reward_scale(double) const override { return static_cast<double>(dimension_); }

  double optimum() const { return static_cast<double>(dimension_); }

 private:
  std::size_t dimension_;
};

double onemax_evaluate(const BinaryVector& x);

// Benchmark table: ids 1..19 map to 500..5000 in steps of 250.
std::size_t onemax_table_dimension(int id);

// --------------------------------------------------------------- SUKP

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& detail, const std::string& source = {})
      : std::runtime_error((source.empty() ? "" : source + ": ") + "line " + std::to_string(line) +
                           ": " + detail),
        line_(line),
        detail_(detail) {}
  std::size_t line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

struct SukpInstance {
  std::string id;
  std::size_t m = 0;  // items
  std::size_t n = 0;  // elements
  std::vector<double> profits;                    // size m
  std::vector<double> weights;                    // size n
  std::vector<std::vector<std::uint8_t>> incidence;  // m rows of n
  double capacity = 0.0;
  double density = 0.0;
  double rate = 0.0;
  std::optional<double> best_known;

  friend bool operator==(const SukpInstance&, const SukpInstance&) = default;
};

// Throws std::invalid_argument when the invariants do not hold.
void validate(const SukpInstance& inst);

double sukp_union_weight(const SukpInstance& inst, const BinaryVector& x);
double sukp_profit(const SukpInstance& inst, const BinaryVector& x);

// Drop-then-fill greedy repair. Items are dropped by lowest
// p_j / (uniquely covered weight + 1) until the union weight fits, then
// unselected items are offered in descending p_j / (marginal weight + 1)
// order and kept whenever they fit. Ties go to the lowest index.
BinaryVector sukp_repair(const SukpInstance& inst, const BinaryVector& x);

struct SukpEvaluation {
  double profit = 0.0;
  BinaryVector repaired;
};
SukpEvaluation sukp_evaluate(const SukpInstance& inst, const BinaryVector& x);

// Profit of greedy fill starting from the empty selection.
double sukp_greedy_profit(const SukpInstance& inst);

SukpInstance parse_sukp(std::istream& in, std::string id = {});
SukpInstance parse_sukp(std::string_view text, std::string id = {});
SukpInstance load_sukp(const std::string& path);
std::string serialize_sukp(const SukpInstance& inst);
void save_sukp(const SukpInstance& inst, const std::string& path);

SukpInstance generate_sukp(std::size_t m, std::size_t n, double density, double rate,
                           std::uint64_t seed, std::string id = {});

// Problem adapter; the instance is shared read-only.
class Sukp final : public Problem {
 public:
  explicit Sukp(std::shared_ptr<const SukpInstance> inst);

  std::string id() const override { return inst_->id; }
  std::size_t dimension() const override { return inst_->m; }
  double evaluate(BinaryVector& x) const override;
  double reward_scale(double run_best) const override;

  const SukpInstance& instance() const { return *inst_; }

 private:
  std::shared_ptr<const SukpInstance> inst_;
  // Sparse element lists per item for fast marginal weights.
  std::vector<std::vector<std::uint32_t>> elements_;
};

}  // namespace aos
