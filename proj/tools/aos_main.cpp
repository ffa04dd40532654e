#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "aos/experiment.hpp"
#include "aos/stats.hpp"
#include "aos/text.hpp"

namespace {

using aos::ExperimentConfig;

// Thrown for problems with the invocation itself (exit code 1).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  std::string config;
  std::vector<std::pair<std::string, std::string*>> values;
  std::vector<std::pair<std::string, bool*>> flags;
  std::map<std::string, std::string> storage;
  std::map<std::string, bool> switches;
};

void add_common(CLI::App& cmd, CommonFlags& f, const std::vector<std::string>& names) {
  cmd.add_option("--config", f.config, "key=value settings file; flags override it");
  static const std::map<std::string, std::string> help = {
      {"problem", "onemax or sukp"},
      {"dims", "OneMax dimensions, comma separated"},
      {"ids", "OneMax table ids 1-19, comma separated"},
      {"instance", "SUKP instance files, comma separated"},
      {"variants", "random, one-run, all-run, one-run-wl, all-run-wl"},
      {"variant", "single variant"},
      {"reps", "repetitions"},
      {"seed", "base seed; repetition r uses seed + r"},
      {"sections", "time sections M"},
      {"epsilon", "exploration probability"},
      {"beta", "learning rate"},
      {"gamma", "discount factor"},
      {"pop", "colony size"},
      {"iters", "iterations"},
      {"limit", "scout trial limit"},
      {"load-model", "model archive to start from"},
      {"save-model", "write the final model archive here"},
      {"train", "on or off"},
      {"delta", "blend factor between runs"},
      {"out", "output file"},
      {"trace", "per-iteration trace output"},
  };
  for (const auto& name : names) {
    auto& slot = f.storage[name];
    std::string opt = "--" + name;
    if (name == "save-model") opt += ",--save";
    if (name == "load-model") opt += ",--load";
    cmd.add_option(opt, slot, help.count(name) ? help.at(name) : "");
    f.values.emplace_back(name, &slot);
  }
  for (const char* name : {"trace-features", "timing"}) {
    auto& slot = f.switches[name];
    cmd.add_flag(std::string("--") + name, slot,
                 std::string(name) == "timing" ? "include wall time in outputs" : "add phi_1..phi_19 to traces");
    f.flags.emplace_back(name, &slot);
  }
}

ExperimentConfig build_config(const CLI::App& cmd, const CommonFlags& f) {
  ExperimentConfig cfg;
  try {
    if (!f.config.empty()) {
      for (const auto& [k, v] : aos::read_config_file(f.config)) aos::apply_setting(cfg, k, v);
    }
    for (const auto& [name, slot] : f.values) {
      std::string opt = "--" + name;
      if (cmd.count(opt) > 0) aos::apply_setting(cfg, name, *slot);
    }
    for (const auto& [name, slot] : f.flags) {
      if (*slot) aos::apply_setting(cfg, name, "on");
    }
    cfg.rl.validate();
    cfg.ops.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

std::vector<std::string> operator_names(const ExperimentConfig& cfg) {
  std::vector<std::string> names;
  for (const auto& op : aos::default_pool(cfg.ops)) names.push_back(op.name);
  return names;
}

// Writes to the file, or stdout when path is empty.
template <typename Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(out);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string runs_path_for(const std::string& out) {
  std::filesystem::path p(out);
  std::string stem = p.extension() == ".csv" ? p.stem().string() : p.filename().string();
  return (p.parent_path() / (stem + ".runs.csv")).string();
}

std::shared_ptr<const aos::Problem> single_problem(const ExperimentConfig& cfg) {
  const auto problems = aos::resolve_problems(cfg);
  if (problems.size() != 1) throw UsageError("this command takes exactly one problem instance");
  return problems.front();
}

int cmd_generate(const std::size_t m, const std::size_t n, double density, double rate, std::uint64_t seed,
                 const std::string& id, const std::string& out) {
  std::string inst_id = id;
  if (inst_id.empty()) inst_id = out.empty() ? "generated" : std::filesystem::path(out).stem().string();
  const auto inst = aos::generate_sukp(m, n, density, rate, seed, inst_id);
  emit(out, [&](std::ostream& os) { os << aos::serialize_sukp(inst); });
  return 0;
}

int cmd_train(const ExperimentConfig& cfg) {
  if (cfg.save_model.empty()) throw UsageError("train needs --save");
  const auto problem = single_problem(cfg);
  const auto archive = aos::train_model(*problem, cfg);
  aos::save_model_file(archive, cfg.save_model);
  std::cout << "trained " << problem->id() << " over " << cfg.reps << " runs -> " << cfg.save_model << '\n';
  return 0;
}

int cmd_solve(ExperimentConfig cfg) {
  if (cfg.variants.size() != 1) throw UsageError("solve runs exactly one variant");
  const auto problem = single_problem(cfg);
  cfg.reps = 1;
  std::optional<aos::ModelArchive> saved;
  if (aos::variant_needs_archive(cfg.variants[0])) {
    if (cfg.load_model.empty()) throw UsageError("w/L variants need --load-model");
    aos::ArchiveExpectations expect;
    expect.sections = cfg.rl.sections;
    expect.operators = operator_names(cfg);
    saved = aos::load_model_file(cfg.load_model, expect);
  }
  auto runs = aos::run_variant(*problem, cfg.variants[0], cfg, saved ? &saved->model : nullptr);
  const auto& rec = runs.runs.front();

  emit(cfg.out, [&](std::ostream& os) {
    os << "instance: " << rec.instance_id << '\n'
       << "variant: " << rec.variant << '\n'
       << "seed: " << rec.seed << '\n'
       << "best_fitness: " << aos::format_double(rec.best_fitness) << '\n'
       << "solution: " << rec.best_solution.to_string() << '\n';
    if (cfg.timing) os << "seconds: " << aos::format_double(rec.seconds) << '\n';
  });
  if (!cfg.trace.empty()) {
    const int n = aos::colony_config_for(*problem, cfg, cfg.seed).population_size;
    emit(cfg.trace, [&](std::ostream& os) {
      aos::write_trace_csv(os, rec, operator_names(cfg), n, cfg.trace_features);
    });
  }
  if (!cfg.save_model.empty()) {
    aos::ModelArchive archive{runs.final_model, saved ? saved->provenance : aos::Provenance{}};
    archive.provenance.instance = problem->id();
    archive.provenance.episodes += 1;
    archive.provenance.seeds.push_back(cfg.seed);
    aos::save_model_file(archive, cfg.save_model);
  }
  return 0;
}

int cmd_experiment(const ExperimentConfig& cfg) {
  if (!cfg.save_model.empty()) throw UsageError("experiment does not save models; use train");
  const auto result = aos::run_experiment(cfg);
  emit(cfg.out, [&](std::ostream& os) { aos::write_summary_csv(os, result.table, cfg.timing); });
  if (!cfg.out.empty()) {
    emit(runs_path_for(cfg.out), [&](std::ostream& os) { aos::write_runs_csv(os, result.results, cfg.timing); });
  }
  if (!cfg.trace.empty()) {
    std::filesystem::create_directories(cfg.trace);
    const auto names = operator_names(cfg);
    const auto problems = aos::resolve_problems(cfg);
    std::size_t p = 0;
    for (const auto& runs : result.details) {
      while (p < problems.size() && problems[p]->id() != runs.instance_id) ++p;
      const int n = aos::colony_config_for(*problems.at(p), cfg, cfg.seed).population_size;
      for (std::size_t r = 0; r < runs.runs.size(); ++r) {
        const auto path = std::filesystem::path(cfg.trace) /
                          (runs.instance_id + "_" + aos::variant_label(runs.variant) + "_rep" + std::to_string(r) + ".csv");
        emit(path.string(), [&](std::ostream& os) {
          aos::write_trace_csv(os, runs.runs[r], names, n, cfg.trace_features);
        });
      }
    }
  }
  return 0;
}

int cmd_stats(const std::string& runs_path, const std::string& variants_arg, const std::string& out) {
  std::ifstream in(runs_path);
  if (!in) throw std::runtime_error("cannot open '" + runs_path + "'");
  const auto results = aos::read_runs_csv(in);
  std::vector<std::string> variants;
  if (!variants_arg.empty()) {
    for (const auto& v : aos::split_list(variants_arg)) variants.push_back(aos::variant_label(aos::parse_variant(v)));
  } else {
    for (const auto& r : results) {
      if (std::find(variants.begin(), variants.end(), r.variant) == variants.end()) variants.push_back(r.variant);
    }
  }
  const auto table = aos::summarize(results, variants);
  emit(out, [&](std::ostream& os) { aos::write_summary_csv(os, table, true); });
  return 0;
}

int cmd_inspect(const std::string& path) {
  const auto archive = aos::load_model_file(path);
  const auto& model = archive.model;
  std::cout << "sections: " << model.sections() << '\n'
            << "operators: " << model.operator_count() << '\n'
            << "instance: " << (archive.provenance.instance.empty() ? "-" : archive.provenance.instance) << '\n'
            << "episodes: " << archive.provenance.episodes << '\n';
  std::cout << "operator,successes,usage,mean_q,credit\n";
  const auto credit = aos::snapshot_credit(model);
  for (std::size_t b = 0; b < credit.size(); ++b) {
    const auto& c = credit[b];
    std::cout << model.operator_names()[b] << ',' << c.successes << ',' << c.usage << ',' << aos::format_double(c.q) << ','
              << aos::format_double(c.credit) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive operator selection for binary artificial bee colonies"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "generate a problem instance");
  auto* gen_sukp = gen->add_subcommand("sukp", "random set-union knapsack instance");
  gen->require_subcommand(1);
  std::size_t g_m = 100, g_n = 85;
  double g_density = 0.1, g_rate = 0.75;
  std::uint64_t g_seed = 1;
  std::string g_id, g_out;
  gen_sukp->add_option("--m", g_m, "items")->required();
  gen_sukp->add_option("--n", g_n, "elements")->required();
  gen_sukp->add_option("--density", g_density, "incidence density")->required();
  gen_sukp->add_option("--rate", g_rate, "capacity as a fraction of the total weight")->required();
  gen_sukp->add_option("--seed", g_seed);
  gen_sukp->add_option("--id", g_id, "instance id (default: output file stem)");
  gen_sukp->add_option("--out", g_out);

  const std::vector<std::string> run_keys = {
      "problem", "dims", "ids", "instance", "seed", "sections", "epsilon", "beta", "gamma", "pop", "iters",
      "limit", "load-model", "save-model", "train", "delta", "out", "trace", "reps"};

  CommonFlags train_f, solve_f, exp_f;
  auto* train = app.add_subcommand("train", "train an all-run model and save it");
  add_common(*train, train_f, run_keys);
  auto* solve = app.add_subcommand("solve", "one colony run");
  {
    auto keys = run_keys;
    keys.push_back("variant");
    add_common(*solve, solve_f, keys);
  }
  auto* exp = app.add_subcommand("experiment", "repetitions over instances and variants");
  {
    auto keys = run_keys;
    keys.push_back("variants");
    add_common(*exp, exp_f, keys);
  }

  auto* stats = app.add_subcommand("stats", "summarize a runs CSV");
  std::string s_runs, s_variants, s_out;
  stats->add_option("--runs", s_runs, "runs CSV written by experiment")->required();
  stats->add_option("--variants", s_variants, "variant order; the first is the baseline");
  stats->add_option("--out", s_out);

  auto* model = app.add_subcommand("model", "model archive tools");
  model->require_subcommand(1);
  auto* inspect = model->add_subcommand("inspect", "print an archive summary");
  std::string m_path;
  inspect->add_option("path", m_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen_sukp->parsed()) return cmd_generate(g_m, g_n, g_density, g_rate, g_seed, g_id, g_out);
    if (train->parsed()) return cmd_train(build_config(*train, train_f));
    if (solve->parsed()) return cmd_solve(build_config(*solve, solve_f));
    if (exp->parsed()) return cmd_experiment(build_config(*exp, exp_f));
    if (stats->parsed()) return cmd_stats(s_runs, s_variants, s_out);
    if (inspect->parsed()) return cmd_inspect(m_path);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
