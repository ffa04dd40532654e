#include "aos/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace aos {

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

std::vector<double> tied_ranks(std::span<const double> values, bool descending) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return descending ? values[a] > values[b] : values[a] < values[b];
  });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

namespace {

struct SignedRanks {
  std::vector<double> ranks;  // of |d|, ascending, mean ranks for ties
  double w_plus = 0.0;
  double tie_term = 0.0;      // sum of t^3 - t over tie groups
};

SignedRanks signed_ranks(std::span<const double> differences) {
  std::vector<double> mags;
  std::vector<bool> positive;
  for (double d : differences) {
    if (d == 0.0) continue;
    mags.push_back(std::abs(d));
    positive.push_back(d > 0.0);
  }
  SignedRanks out;
  out.ranks = tied_ranks(mags, false);
  for (std::size_t i = 0; i < mags.size(); ++i) {
    if (positive[i]) out.w_plus += out.ranks[i];
  }
  std::vector<double> sorted = mags;
  std::sort(sorted.begin(), sorted.end());
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i + 1);
    out.tie_term += t * t * t - t;
    i = j + 1;
  }
  return out;
}

}  // namespace

double wilcoxon_exact(std::span<const double> differences) {
  const SignedRanks sr = signed_ranks(differences);
  const std::size_t n = sr.ranks.size();
  if (n == 0) return 1.0;

  // Ranks are multiples of 1/2, so doubled ranks are integers.
  std::vector<long> doubled(n);
  long total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    doubled[i] = std::lround(2.0 * sr.ranks[i]);
    total += doubled[i];
  }
  std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
  count[0] = 1.0;
  long reach = 0;
  for (long r : doubled) {
    for (long s = reach; s >= 0; --s) {
      if (count[static_cast<std::size_t>(s)] != 0.0) count[static_cast<std::size_t>(s + r)] += count[static_cast<std::size_t>(s)];
    }
    reach += r;
  }
  const long w = std::lround(2.0 * sr.w_plus);
  double lower = 0.0;
  double upper = 0.0;
  for (long s = 0; s <= total; ++s) {
    if (s <= w) lower += count[static_cast<std::size_t>(s)];
    if (s >= w) upper += count[static_cast<std::size_t>(s)];
  }
  const double patterns = std::ldexp(1.0, static_cast<int>(n));
  return std::min(1.0, 2.0 * std::min(lower, upper) / patterns);
}

double wilcoxon_normal(std::span<const double> differences) {
  const SignedRanks sr = signed_ranks(differences);
  const double n = static_cast<double>(sr.ranks.size());
  if (n == 0.0) return 1.0;
  const double mu = n * (n + 1.0) / 4.0;
  const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - sr.tie_term / 48.0;
  if (var <= 0.0) return 1.0;
  const double dev = std::max(0.0, std::abs(sr.w_plus - mu) - 0.5);
  return std::min(1.0, 2.0 * normal_upper_tail(dev / std::sqrt(var)));
}

double wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("wilcoxon: samples differ in length");
  std::vector<double> d(a.size());
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d[i] = a[i] - b[i];
    if (d[i] != 0.0) ++nonzero;
  }
  if (nonzero == 0) return 1.0;
  return nonzero <= kWilcoxonExactLimit ? wilcoxon_exact(d) : wilcoxon_normal(d);
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_std(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

std::map<std::string, double> mean_ranks(
    const std::map<std::string, std::map<std::string, double>>& rows,
    const std::vector<std::string>& variants) {
  std::map<std::string, double> out;
  if (rows.empty()) throw std::invalid_argument("mean_ranks: no instances");
  for (const auto& v : variants) {
    double sum = 0.0;
    for (const auto& [instance, ranks] : rows) {
      auto it = ranks.find(v);
      if (it == ranks.end()) {
        throw std::invalid_argument("mean_ranks: missing cell (" + instance + ", " + v + ")");
      }
      sum += it->second;
    }
    out[v] = sum / static_cast<double>(rows.size());
  }
  return out;
}

}  // namespace aos
