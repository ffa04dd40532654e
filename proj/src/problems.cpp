#include "aos/problems.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "aos/text.hpp"

namespace aos {

BinaryVector Problem::random_solution(RandomStream& rng, double* fitness) const {
  BinaryVector x(dimension());
  for (std::size_t i = 0; i < x.size(); ++i) x.set(i, rng.bernoulli(0.5));
  const double f = evaluate(x);
  if (fitness != nullptr) *fitness = f;
  return x;
}

// ---------------------------------------------------------------- OneMax

OneMax::OneMax(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw std::invalid_argument("OneMax dimension must be positive");
}

std::string OneMax::id() const { return "onemax-" + std::to_string(dimension_); }

double OneMax::evaluate(BinaryVector& x) const {
  if (x.size() != dimension_) throw DimensionError("onemax: length mismatch");
  return onemax_evaluate(x);
}

double onemax_evaluate(const BinaryVector& x) { return static_cast<double>(x.count()); }

std::size_t onemax_table_dimension(int id) {
  if (id < 1 || id > 19) throw std::invalid_argument("OneMax instance id must be in 1..19");
  return 500 + 250 * static_cast<std::size_t>(id - 1);
}

// --------------------------------------------------------------- SUKP

namespace {

using ElementLists = std::vector<std::vector<std::uint32_t>>;

ElementLists element_lists(const SukpInstance& inst) {
  ElementLists lists(inst.m);
  for (std::size_t j = 0; j < inst.m; ++j) {
    for (std::size_t e = 0; e < inst.n; ++e) {
      if (inst.incidence[j][e] != 0) lists[j].push_back(static_cast<std::uint32_t>(e));
    }
  }
  return lists;
}

void check_length(const SukpInstance& inst, const BinaryVector& x) {
  if (x.size() != inst.m) {
    throw DimensionError("sukp: vector length " + std::to_string(x.size()) +
                         " does not match item count " + std::to_string(inst.m));
  }
}

double fresh_union_weight(const SukpInstance& inst, const ElementLists& lists,
                          const BinaryVector& x) {
  std::vector<std::uint8_t> covered(inst.n, 0);
  for (std::size_t j = 0; j < inst.m; ++j) {
    if (!x.get(j)) continue;
    for (auto e : lists[j]) covered[e] = 1;
  }
  double total = 0.0;
  for (std::size_t e = 0; e < inst.n; ++e) {
    if (covered[e] != 0) total += inst.weights[e];
  }
  return total;
}

BinaryVector repair_impl(const SukpInstance& inst, const ElementLists& lists, BinaryVector x) {
  std::vector<std::uint32_t> cover(inst.n, 0);
  for (std::size_t j = 0; j < inst.m; ++j) {
    if (!x.get(j)) continue;
    for (auto e : lists[j]) ++cover[e];
  }
  double weight = 0.0;
  for (std::size_t e = 0; e < inst.n; ++e) {
    if (cover[e] != 0) weight += inst.weights[e];
  }

  auto drop_one = [&]() {
    std::size_t worst = inst.m;
    double worst_ratio = 0.0;
    for (std::size_t j = 0; j < inst.m; ++j) {
      if (!x.get(j)) continue;
      double unique = 0.0;
      for (auto e : lists[j]) {
        if (cover[e] == 1) unique += inst.weights[e];
      }
      const double ratio = inst.profits[j] / (unique + 1.0);
      if (worst == inst.m || ratio < worst_ratio) {
        worst = j;
        worst_ratio = ratio;
      }
    }
    if (worst == inst.m) return false;
    x.set(worst, false);
    for (auto e : lists[worst]) {
      if (--cover[e] == 0) weight -= inst.weights[e];
    }
    return true;
  };

  while (weight > inst.capacity && drop_one()) {
  }
  // Incremental sums can drift for non-integral weights; settle on a fresh sum.
  while (fresh_union_weight(inst, lists, x) > inst.capacity && drop_one()) {
  }
  weight = fresh_union_weight(inst, lists, x);

  auto marginal = [&](std::size_t j) {
    double add = 0.0;
    for (auto e : lists[j]) {
      if (cover[e] == 0) add += inst.weights[e];
    }
    return add;
  };

  std::vector<std::size_t> order;
  std::vector<double> ratio(inst.m, 0.0);
  for (std::size_t j = 0; j < inst.m; ++j) {
    if (x.get(j)) continue;
    order.push_back(j);
    ratio[j] = inst.profits[j] / (marginal(j) + 1.0);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ratio[a] > ratio[b]; });
  for (auto j : order) {
    const double add = marginal(j);
    if (weight + add > inst.capacity) continue;
    x.set(j, true);
    for (auto e : lists[j]) ++cover[e];
    weight += add;
  }
  return x;
}

}  // namespace

void validate(const SukpInstance& inst) {
  if (inst.m == 0 || inst.n == 0) throw std::invalid_argument("sukp: m and n must be positive");
  if (inst.profits.size() != inst.m || inst.weights.size() != inst.n ||
      inst.incidence.size() != inst.m) {
    throw std::invalid_argument("sukp: array sizes do not match m and n");
  }
  for (double p : inst.profits) {
    if (!(p > 0.0)) throw std::invalid_argument("sukp: profits must be strictly positive");
  }
  for (double w : inst.weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("sukp: weights must be non-negative");
  }
  for (std::size_t j = 0; j < inst.m; ++j) {
    const auto& row = inst.incidence[j];
    if (row.size() != inst.n) throw std::invalid_argument("sukp: incidence row has wrong length");
    if (std::none_of(row.begin(), row.end(), [](std::uint8_t b) { return b != 0; })) {
      throw std::invalid_argument("sukp: item " + std::to_string(j) + " covers no element");
    }
  }
  if (!(inst.capacity >= 0.0)) throw std::invalid_argument("sukp: capacity must be non-negative");
}

double sukp_union_weight(const SukpInstance& inst, const BinaryVector& x) {
  check_length(inst, x);
  return fresh_union_weight(inst, element_lists(inst), x);
}

double sukp_profit(const SukpInstance& inst, const BinaryVector& x) {
  check_length(inst, x);
  double total = 0.0;
  for (std::size_t j = 0; j < inst.m; ++j) {
    if (x.get(j)) total += inst.profits[j];
  }
  return total;
}

BinaryVector sukp_repair(const SukpInstance& inst, const BinaryVector& x) {
  check_length(inst, x);
  return repair_impl(inst, element_lists(inst), x);
}

SukpEvaluation sukp_evaluate(const SukpInstance& inst, const BinaryVector& x) {
  SukpEvaluation out;
  out.repaired = sukp_repair(inst, x);
  out.profit = sukp_profit(inst, out.repaired);
  return out;
}

double sukp_greedy_profit(const SukpInstance& inst) {
  return sukp_evaluate(inst, BinaryVector(inst.m)).profit;
}

// ------------------------------------------------------------ file format

namespace {

struct LineReader {
  std::istream& in;
  std::size_t line_no = 0;
  SukpInstance* meta = nullptr;

  // Next non-empty, non-comment line. Comments of the form "# key: value"
  // carry optional metadata; every other comment is ignored.
  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line[0] == '#') {
        read_meta(line);
        continue;
      }
      if (split_ws(line).empty()) continue;
      return true;
    }
    return false;
  }

  void read_meta(const std::string& line) {
    if (meta == nullptr) return;
    auto body = std::string_view(line).substr(1);
    auto colon = body.find(':');
    if (colon == std::string_view::npos) return;
    auto keys = split_ws(body.substr(0, colon));
    auto vals = split_ws(body.substr(colon + 1));
    if (keys.size() != 1 || vals.size() != 1) return;
    if (keys[0] == "id") {
      meta->id = std::string(vals[0]);
      return;
    }
    auto v = parse_number<double>(vals[0]);
    if (!v) throw ParseError(line_no, "bad metadata value for '" + std::string(keys[0]) + "'");
    if (keys[0] == "density") meta->density = *v;
    if (keys[0] == "rate") meta->rate = *v;
    if (keys[0] == "best_known") meta->best_known = *v;
  }
};

template <typename T>
T field(std::string_view token, std::size_t line, const char* what) {
  auto v = parse_number<T>(token);
  if (!v) throw ParseError(line, std::string("malformed ") + what + " '" + std::string(token) + "'");
  return *v;
}

}  // namespace

SukpInstance parse_sukp(std::istream& in, std::string id) {
  SukpInstance inst;
  inst.id = std::move(id);
  LineReader reader{in, 0, &inst};
  std::string line;

  if (!reader.next(line)) throw ParseError(reader.line_no, "missing header 'm n capacity'");
  auto header = split_ws(line);
  if (header.size() != 3) throw ParseError(reader.line_no, "header must be 'm n capacity'");
  const auto m = field<std::size_t>(header[0], reader.line_no, "item count");
  const auto n = field<std::size_t>(header[1], reader.line_no, "element count");
  inst.capacity = field<double>(header[2], reader.line_no, "capacity");
  if (m == 0 || n == 0) throw ParseError(reader.line_no, "m and n must be positive");
  if (inst.capacity < 0.0) throw ParseError(reader.line_no, "negative capacity");
  inst.m = m;
  inst.n = n;

  auto read_row = [&](std::size_t expected, const char* what) {
    if (!reader.next(line)) throw ParseError(reader.line_no, std::string("missing ") + what + " line");
    auto tokens = split_ws(line);
    if (tokens.size() != expected) {
      throw ParseError(reader.line_no, std::string(what) + " line has " + std::to_string(tokens.size()) +
                                           " entries, expected " + std::to_string(expected));
    }
    return tokens;
  };

  for (auto tok : read_row(m, "profit")) {
    const double p = field<double>(tok, reader.line_no, "profit");
    if (!(p > 0.0)) throw ParseError(reader.line_no, "profits must be strictly positive");
    inst.profits.push_back(p);
  }
  for (auto tok : read_row(n, "weight")) {
    const double w = field<double>(tok, reader.line_no, "weight");
    if (!(w >= 0.0)) throw ParseError(reader.line_no, "negative weight");
    inst.weights.push_back(w);
  }
  inst.incidence.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    auto tokens = read_row(n, "incidence");
    std::vector<std::uint8_t> row(n, 0);
    bool any = false;
    for (std::size_t e = 0; e < n; ++e) {
      if (tokens[e] == "1") {
        row[e] = 1;
        any = true;
      } else if (tokens[e] != "0") {
        throw ParseError(reader.line_no, "incidence entries must be 0 or 1");
      }
    }
    if (!any) throw ParseError(reader.line_no, "item " + std::to_string(j) + " covers no element");
    inst.incidence.push_back(std::move(row));
  }
  if (reader.next(line)) throw ParseError(reader.line_no, "unexpected trailing data");
  return inst;
}

SukpInstance parse_sukp(std::string_view text, std::string id) {
  std::istringstream in{std::string(text)};
  return parse_sukp(in, std::move(id));
}

SukpInstance load_sukp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open instance file '" + path + "'");
  auto stem = path;
  if (auto slash = stem.find_last_of('/'); slash != std::string::npos) stem = stem.substr(slash + 1);
  if (auto dot = stem.find_last_of('.'); dot != std::string::npos && dot > 0) stem = stem.substr(0, dot);
  try {
    return parse_sukp(in, stem);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail(), path);
  }
}

std::string serialize_sukp(const SukpInstance& inst) {
  std::string out;
  if (!inst.id.empty()) out += "# id: " + inst.id + "\n";
  if (inst.density != 0.0) out += "# density: " + format_double(inst.density) + "\n";
  if (inst.rate != 0.0) out += "# rate: " + format_double(inst.rate) + "\n";
  if (inst.best_known) out += "# best_known: " + format_double(*inst.best_known) + "\n";
  out += std::to_string(inst.m) + " " + std::to_string(inst.n) + " " + format_double(inst.capacity) + "\n";
  auto join = [&](const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i != 0) out += ' ';
      out += format_double(values[i]);
    }
    out += '\n';
  };
  join(inst.profits);
  join(inst.weights);
  for (const auto& row : inst.incidence) {
    for (std::size_t e = 0; e < row.size(); ++e) {
      if (e != 0) out += ' ';
      out += row[e] != 0 ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

void save_sukp(const SukpInstance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write instance file '" + path + "'");
  out << serialize_sukp(inst);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

SukpInstance generate_sukp(std::size_t m, std::size_t n, double density, double rate,
                           std::uint64_t seed, std::string id) {
  if (m < 1 || n < 1) throw std::invalid_argument("generate_sukp: m and n must be at least 1");
  if (!(density > 0.0 && density <= 1.0)) throw std::invalid_argument("generate_sukp: density must be in (0, 1]");
  if (!(rate > 0.0 && rate <= 1.0)) throw std::invalid_argument("generate_sukp: rate must be in (0, 1]");

  RandomStream rng(seed);
  SukpInstance inst;
  inst.id = std::move(id);
  inst.m = m;
  inst.n = n;
  inst.density = density;
  inst.rate = rate;
  for (std::size_t j = 0; j < m; ++j) inst.profits.push_back(static_cast<double>(1 + rng.below(100)));
  for (std::size_t e = 0; e < n; ++e) inst.weights.push_back(static_cast<double>(1 + rng.below(100)));
  inst.incidence.assign(m, std::vector<std::uint8_t>(n, 0));
  for (auto& row : inst.incidence) {
    bool any = false;
    while (!any) {
      for (auto& cell : row) {
        cell = rng.bernoulli(density) ? 1 : 0;
        any = any || cell != 0;
      }
    }
  }
  inst.capacity = rate * std::accumulate(inst.weights.begin(), inst.weights.end(), 0.0);
  return inst;
}

// ------------------------------------------------------------ Sukp problem

Sukp::Sukp(std::shared_ptr<const SukpInstance> inst) : inst_(std::move(inst)) {
  validate(*inst_);
  elements_ = element_lists(*inst_);
}

double Sukp::evaluate(BinaryVector& x) const {
  check_length(*inst_, x);
  x = repair_impl(*inst_, elements_, std::move(x));
  return sukp_profit(*inst_, x);
}

double Sukp::reward_scale(double run_best) const {
  if (inst_->best_known) return *inst_->best_known;
  return std::max(run_best, 1.0);
}

}  // namespace aos
