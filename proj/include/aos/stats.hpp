#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace aos {

// Two-sided Wilcoxon signed-rank p-value for paired samples. Zero
// differences are dropped and tied magnitudes share their mean rank. The
// null distribution is exact (enumerated over sign patterns by dynamic
// programming) for up to kWilcoxonExactLimit non-zero pairs and a normal
// approximation with continuity and tie correction above. All-zero
// differences give p = 1.
inline constexpr std::size_t kWilcoxonExactLimit = 25;

double wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

// Branch-specific entry points, exposed for cross-checking.
double wilcoxon_exact(std::span<const double> differences);
double wilcoxon_normal(std::span<const double> differences);

// Ranks 1..n of values, largest first when descending; ties share the mean rank.
std::vector<double> tied_ranks(std::span<const double> values, bool descending = true);

double mean(std::span<const double> values);
// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_std(std::span<const double> values);

// rows[instance][variant] = per-instance rank. Returns the mean rank per
// variant; throws std::invalid_argument when a cell is missing.
std::map<std::string, double> mean_ranks(
    const std::map<std::string, std::map<std::string, double>>& rows,
    const std::vector<std::string>& variants);

// Standard normal upper tail, P(Z > z).
double normal_upper_tail(double z);

}  // namespace aos
