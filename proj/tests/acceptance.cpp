// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance 4 7        run only the listed criteria

#include <boost/math/distributions/chi_squared.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "aos/experiment.hpp"
#include "aos/stats.hpp"
#include "aos/text.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using aos::ExperimentConfig;
using aos::Variant;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 2) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

const aos::SummaryRow& row_for(const aos::ExperimentTable& t, const std::string& inst, const std::string& v) {
  for (const auto& r : t.rows) {
    if (r.instance_id == inst && r.variant == v) return r;
  }
  throw std::runtime_error("missing summary row " + inst + "/" + v);
}

ExperimentConfig onemax_config(std::vector<std::size_t> dims, std::vector<Variant> variants, int reps) {
  ExperimentConfig cfg;
  cfg.problem = aos::ProblemKind::OneMax;
  cfg.dims = std::move(dims);
  cfg.variants = std::move(variants);
  cfg.reps = reps;
  cfg.seed = 1;
  cfg.population = 20;
  cfg.iterations = 250;
  return cfg;
}

// ------------------------------------------------------------------ 1

Outcome onemax_small_scale() {
  auto cfg = onemax_config({500}, {Variant::Random, Variant::OneRun, Variant::AllRun}, 30);
  const auto res = aos::run_experiment(cfg);
  Outcome out{true, ""};
  bool any_max = false;
  for (const auto& r : res.table.rows) {
    out.pass = out.pass && r.mean >= 498.0;
    any_max = any_max || r.max == 500.0;
    out.detail += r.variant + " mean " + fmt(r.mean) + " max " + fmt(r.max, 0) + "; ";
  }
  out.pass = out.pass && any_max;
  return out;
}

// ------------------------------------------------------------------ 2

Outcome rl_beats_random() {
  auto cfg = onemax_config({1250, 2000}, {Variant::Random, Variant::OneRun, Variant::AllRun}, 10);
  const auto res = aos::run_experiment(cfg);
  Outcome out{true, ""};
  for (std::size_t d : {1250u, 2000u}) {
    const std::string inst = "onemax-" + std::to_string(d);
    const double rnd = row_for(res.table, inst, "random").mean;
    const double one = row_for(res.table, inst, "one-run").mean;
    const double all = row_for(res.table, inst, "all-run").mean;
    out.pass = out.pass && one > rnd && all > rnd;
    out.detail += "D=" + std::to_string(d) + " random " + fmt(rnd) + " one-run " + fmt(one) + " all-run " +
                  fmt(all) + "; ";
  }
  return out;
}

// ------------------------------------------------------------------ 3

Outcome segmentation_benefit() {
  auto five = onemax_config({3000}, {Variant::OneRun}, 10);
  auto one = five;
  one.rl.sections = 1;
  const double m5 = aos::run_experiment(five).table.rows.at(0).mean;
  const double m1 = aos::run_experiment(one).table.rows.at(0).mean;
  return {m5 >= m1 * (1.0 - 0.001), "one-run D=3000 mean M=5 " + fmt(m5) + " vs M=1 " + fmt(m1)};
}

// ------------------------------------------------------------------ 4

Outcome sukp_beats_greedy() {
  auto inst = std::make_shared<const aos::SukpInstance>(aos::generate_sukp(100, 85, 0.10, 0.75, 7, "1_1"));
  const double greedy = aos::sukp_greedy_profit(*inst);
  aos::Sukp problem(inst);
  ExperimentConfig cfg;
  cfg.problem = aos::ProblemKind::Sukp;
  cfg.reps = 10;
  cfg.seed = 1;
  const auto runs = aos::run_variant(problem, Variant::OneRun, cfg, nullptr);
  double best = 0.0;
  for (const auto& r : runs.runs) best = std::max(best, r.best_fitness);
  return {best >= 1.02 * greedy, "best of 10 one-run " + fmt(best, 0) + " vs greedy fill " + fmt(greedy, 0) +
                                     " (ratio " + fmt(best / greedy, 3) + ")"};
}

// ------------------------------------------------------------------ 5

// Operator counts of non-random decisions made during the first iteration.
std::vector<double> first_iteration_choices(const aos::Problem& problem, const aos::SelectorModel& start,
                                            std::size_t wanted) {
  const auto pool = aos::default_pool();
  std::vector<double> counts(pool.size(), 0.0);
  std::size_t total = 0;
  aos::RunOptions opts;
  opts.on_decision = [&](int t, const aos::Decision& d) {
    if (t == 0 && !d.was_random && total < wanted) {
      counts[d.chosen.base] += 1.0;
      ++total;
    }
  };
  aos::ColonyConfig cc;
  cc.population_size = 20;
  cc.max_iterations = 250;
  cc.trial_limit = aos::default_trial_limit(20, problem.dimension());
  aos::RlParams params;
  for (std::uint64_t seed = 1; total < wanted; ++seed) {
    cc.seed = seed;
    aos::SelectorModel model = start;
    aos::RandomStream rng(seed);
    aos::run_colony(problem, cc, pool, model, params, rng, opts);
  }
  return counts;
}

// Chi-square test of homogeneity on a 2 x K table; empty columns are dropped.
double homogeneity_pvalue(const std::vector<double>& a, const std::vector<double>& b) {
  double ta = 0, tb = 0;
  for (double v : a) ta += v;
  for (double v : b) tb += v;
  double stat = 0;
  int columns = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double col = a[k] + b[k];
    if (col == 0) continue;
    ++columns;
    const double ea = col * ta / (ta + tb);
    const double eb = col * tb / (ta + tb);
    stat += (a[k] - ea) * (a[k] - ea) / ea + (b[k] - eb) * (b[k] - eb) / eb;
  }
  if (columns < 2) return 1.0;
  boost::math::chi_squared dist(columns - 1);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

std::string counts_text(const std::vector<double>& c) {
  std::string s = "(";
  for (std::size_t k = 0; k < c.size(); ++k) s += (k ? "/" : "") + fmt(c[k], 0);
  return s + ")";
}

Outcome transfer_is_live() {
  auto cfg = onemax_config({2500}, {Variant::AllRun}, 30);
  aos::OneMax source(2500);
  const auto archive = aos::train_model(source, cfg);
  const aos::SelectorModel untrained({"flip", "n", "ibin", "nb"}, cfg.rl.sections);

  Outcome out{true, ""};
  for (std::size_t d : {1500u, 3500u}) {
    aos::OneMax target(d);
    const auto loaded = first_iteration_choices(target, archive.model, 1000);
    const auto fresh = first_iteration_choices(target, untrained, 1000);
    const double p = homogeneity_pvalue(loaded, fresh);
    out.pass = out.pass && p < 0.01;
    out.detail += "D=" + std::to_string(d) + " loaded " + counts_text(loaded) + " untrained " + counts_text(fresh) +
                  " p=" + aos::format_double(p) + "; ";
  }
  return out;
}

// ------------------------------------------------------------------ 6

double brute_force_optimum(const aos::SukpInstance& inst) {
  double best = 0;
  const std::uint32_t subsets = 1U << inst.m;
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    std::vector<bool> covered(inst.n, false);
    double profit = 0;
    for (std::size_t j = 0; j < inst.m; ++j) {
      if (!(mask >> j & 1U)) continue;
      profit += inst.profits[j];
      for (std::size_t e = 0; e < inst.n; ++e) covered[e] = covered[e] || inst.incidence[j][e];
    }
    double weight = 0;
    for (std::size_t e = 0; e < inst.n; ++e) weight += covered[e] ? inst.weights[e] : 0.0;
    if (weight <= inst.capacity) best = std::max(best, profit);
  }
  return best;
}

Outcome matches_enumeration() {
  aos::RandomStream draw(2024);
  int reached = 0;
  bool exceeded = false;
  const int instances = 50;
  for (int i = 0; i < instances; ++i) {
    const std::size_t m = 4 + draw.below(12);
    const std::size_t n = 4 + draw.below(12);
    const double density = draw.uniform(0.1, 0.5);
    const double rate = draw.uniform(0.3, 0.8);
    auto inst = std::make_shared<const aos::SukpInstance>(
        aos::generate_sukp(m, n, density, rate, 100 + static_cast<std::uint64_t>(i), "small"));
    const double optimum = brute_force_optimum(*inst);

    aos::Sukp problem(inst);
    aos::ColonyConfig cc;
    cc.population_size = static_cast<int>(std::max(m, n));
    cc.max_iterations = 250;
    cc.trial_limit = aos::default_trial_limit(cc.population_size, m);
    cc.seed = static_cast<std::uint64_t>(i);
    aos::SelectorModel model({"flip", "n", "ibin", "nb"}, 5);
    aos::RandomStream rng(cc.seed);
    const auto rec = aos::run_colony(problem, cc, aos::default_pool(), model, aos::RlParams{}, rng);
    if (rec.best_fitness > optimum) exceeded = true;
    if (aos::sukp_union_weight(*inst, rec.best_solution) > inst->capacity) exceeded = true;
    if (rec.best_fitness == optimum) ++reached;
  }
  const double share = static_cast<double>(reached) / instances;
  return {!exceeded && share >= 0.8, "optimum reached on " + std::to_string(reached) + "/" +
                                         std::to_string(instances) + (exceeded ? ", optimum exceeded" : ", never exceeded")};
}

// ------------------------------------------------------------------ 7

Outcome q_fixed_point() {
  aos::SelectorModel model({"flip", "n", "ibin", "nb"}, 1);
  aos::RlParams p;
  p.gamma = 0.0;
  p.sections = 1;
  const double r = 3.7;
  aos::StateFeatures phi{};
  phi.fill(0.25);
  for (int i = 0; i < 200; ++i) aos::learn(model, aos::OperatorId{2, 0}, phi, r, phi, p);
  const double err = std::fabs(model.entry(aos::OperatorId{2, 0}).q - r);
  const double bound = std::pow(1.0 - p.beta, 200) * std::fabs(r) + 1e-9;
  return {err <= bound, "|q - r| = " + aos::format_double(err) + " bound " + aos::format_double(bound)};
}

// ------------------------------------------------------------------ 8

Outcome wilcoxon_matches_enumeration() {
  aos::RandomStream rng(77);
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    const std::size_t n = 1 + static_cast<std::size_t>(s % 10);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (s % 2 == 0) {
        a[i] = static_cast<double>(rng.below(6));
        b[i] = static_cast<double>(rng.below(6));
      } else {
        a[i] = rng.uniform(0.0, 10.0);
        b[i] = rng.uniform(0.0, 10.0);
      }
    }
    worst = std::max(worst, std::fabs(aos::wilcoxon_signed_rank(a, b) - oracle::signed_rank_enumerated(a, b)));
  }
  return {worst <= 1e-12, "max |p - p_enum| over 100 samples = " + aos::format_double(worst)};
}

// ------------------------------------------------------------------ 9

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> snapshot_dir(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = read_file(e.path());
  }
  return files;
}

Outcome cli_is_deterministic() {
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"generate", "generate sukp --m 40 --n 35 --density 0.1 --rate 0.75 --seed 7 --out small.sukp"},
      {"train", "train --problem onemax --dims 300 --reps 3 --iters 60 --save model.aos"},
      {"solve", "solve --problem sukp --instance small.sukp --variant one-run --seed 3 --iters 60 "
                "--trace solve_trace.csv --trace-features --out solve.txt --save-model solved.aos"},
      {"solve-wl", "solve --problem onemax --dims 400 --variant one-run-wl --load-model model.aos --iters 60"},
      {"experiment", "experiment --problem onemax --dims 200,300 --variants random,one-run,all-run,all-run-wl "
                     "--load-model model.aos --reps 4 --iters 60 --seed 9 --out summary.csv --trace traces"},
      {"experiment-sukp", "experiment --problem sukp --instance small.sukp --variants random,one-run --reps 3 --iters 40"},
      {"stats", "stats --runs summary.runs.csv --out restated.csv"},
      {"model inspect", "model inspect model.aos"},
  };
  const fs::path root = fs::temp_directory_path() / "aos_acceptance_cli";
  fs::remove_all(root);
  std::vector<std::map<std::string, std::string>> outputs;
  for (int pass = 0; pass < 2; ++pass) {
    const fs::path dir = root / ("pass" + std::to_string(pass));
    fs::create_directories(dir);
    for (std::size_t c = 0; c < commands.size(); ++c) {
      const std::string cmd = "cd '" + dir.string() + "' && '" + std::string(AOS_CLI) + "' " + commands[c].second +
                              " > stdout_" + std::to_string(c) + ".txt 2>&1";
      if (std::system(cmd.c_str()) != 0) {
        return {false, commands[c].first + " exited with an error: " + read_file(dir / ("stdout_" + std::to_string(c) + ".txt"))};
      }
    }
    outputs.push_back(snapshot_dir(dir));
  }
  fs::remove_all(root);
  if (outputs[0] != outputs[1]) {
    std::string which;
    for (const auto& [name, body] : outputs[0]) {
      auto it = outputs[1].find(name);
      if (it == outputs[1].end() || it->second != body) which += name + " ";
    }
    return {false, "outputs differ: " + which};
  }
  return {true, std::to_string(commands.size()) + " invocations covering every subcommand, " +
                    std::to_string(outputs[0].size()) + " output files identical across two runs"};
}

// ------------------------------------------------------------------ 10

Outcome feature_fuzz() {
  long seen = 0, bad_range = 0, bad_product = 0;
  aos::RunOptions opts;
  const long per_problem = 5000;
  long budget = 0;
  opts.on_state = [&](const aos::StateFeatures& phi) {
    if (budget <= 0) return;
    --budget;
    ++seen;
    if (!aos::within_declared_ranges(phi)) ++bad_range;
    if (!(phi[8] == phi[3] * phi[7])) ++bad_product;
  };
  aos::RandomStream draw(5);
  auto run = [&](const aos::Problem& problem, int n, std::uint64_t seed) {
    aos::ColonyConfig cc;
    cc.population_size = n;
    cc.max_iterations = 60;
    cc.trial_limit = 5;  // short limit so scouts fire
    cc.seed = seed;
    aos::SelectorModel model({"flip", "n", "ibin", "nb"}, 5);
    aos::RandomStream rng(seed);
    aos::run_colony(problem, cc, aos::default_pool(), model, aos::RlParams{}, rng, opts);
  };
  budget = per_problem;
  for (std::uint64_t s = 0; budget > 0; ++s) {
    aos::OneMax problem(5 + draw.below(300));
    run(problem, 2 + static_cast<int>(draw.below(12)), s);
  }
  budget = per_problem;
  for (std::uint64_t s = 0; budget > 0; ++s) {
    auto inst = std::make_shared<const aos::SukpInstance>(
        aos::generate_sukp(5 + draw.below(60), 5 + draw.below(60), draw.uniform(0.05, 0.5), draw.uniform(0.1, 0.9), s));
    aos::Sukp problem(inst);
    run(problem, 2 + static_cast<int>(draw.below(12)), s);
  }
  return {seen == 2 * per_problem && bad_range == 0 && bad_product == 0,
          std::to_string(seen) + " states, " + std::to_string(bad_range) + " out of range, " +
              std::to_string(bad_product) + " with phi9 != phi4*phi8"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"onemax D=500 small-scale reproduction", onemax_small_scale},
      {"rl variants beat random selection at D=1250,2000", rl_beats_random},
      {"five sections no worse than one at D=3000", segmentation_benefit},
      {"sukp one-run beats greedy fill by 2%", sukp_beats_greedy},
      {"transferred model changes first-iteration choices", transfer_is_live},
      {"colony never beats and usually reaches the enumerated optimum", matches_enumeration},
      {"q converges geometrically to a constant reward", q_fixed_point},
      {"wilcoxon exact branch equals sign enumeration", wilcoxon_matches_enumeration},
      {"every subcommand is byte-for-byte deterministic", cli_is_deterministic},
      {"live states stay in range with phi9 = phi4*phi8", feature_fuzz},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int passed = 0, ran = 0;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    const int id = static_cast<int>(c) + 1;
    if (!only.empty() && !only.count(id)) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[c].second();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    passed += out.pass;
    std::cout << (out.pass ? "PASS" : "FAIL") << " [" << id << "] " << criteria[c].first << " -- " << out.detail
              << " (" << fmt(secs, 1) << "s)" << std::endl;
  }
  std::cout << "acceptance: " << passed << "/" << ran << " criteria passed" << std::endl;
  return 0;
}
