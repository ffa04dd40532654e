#include "aos/experiment.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "aos/stats.hpp"
#include "aos/text.hpp"

namespace aos {

namespace {

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "1" || value == "yes") return true;
  if (value == "off" || value == "false" || value == "0" || value == "no") return false;
  throw std::invalid_argument(key + ": expected on/off, got '" + value + "'");
}

template <typename T>
T parse_value(const std::string& key, const std::string& value) {
  auto v = parse_number<T>(value);
  if (!v) throw std::invalid_argument(key + ": cannot parse '" + value + "'");
  return *v;
}

std::string canonical_key(std::string key) {
  while (!key.empty() && key.front() == '-') key.erase(key.begin());
  std::replace(key.begin(), key.end(), '_', '-');
  // Operator keys keep their underscores.
  if (key == "op.n.p-copy") return "op.n.p_copy";
  if (key == "op.ibin.mr-max") return "op.ibin.mr_max";
  if (key == "op.ibin.mr-min") return "op.ibin.mr_min";
  if (key == "op.nb.seg-min") return "op.nb.seg_min";
  if (key == "op.nb.seg-max") return "op.nb.seg_max";
  if (key.rfind("rl.", 0) == 0) key = key.substr(3);
  if (key == "save") return "save-model";
  if (key == "load") return "load-model";
  return key;
}

}  // namespace

void apply_setting(ExperimentConfig& cfg, const std::string& raw_key, const std::string& value) {
  const std::string key = canonical_key(raw_key);
  if (key == "problem") {
    if (value == "onemax") {
      cfg.problem = ProblemKind::OneMax;
    } else if (value == "sukp") {
      cfg.problem = ProblemKind::Sukp;
    } else {
      throw std::invalid_argument("problem: expected onemax or sukp, got '" + value + "'");
    }
  } else if (key == "dims") {
    cfg.dims.clear();
    for (const auto& d : split_list(value)) {
      const auto dim = parse_value<std::size_t>(key, d);
      if (dim == 0) throw std::invalid_argument("dims: dimensions must be positive");
      cfg.dims.push_back(dim);
    }
  } else if (key == "ids") {
    cfg.dims.clear();
    for (const auto& d : split_list(value)) {
      cfg.dims.push_back(onemax_table_dimension(parse_value<int>(key, d)));
    }
  } else if (key == "instance") {
    cfg.instances = split_list(value);
  } else if (key == "variants" || key == "variant") {
    cfg.variants.clear();
    for (const auto& v : split_list(value)) cfg.variants.push_back(parse_variant(v));
    if (cfg.variants.empty()) throw std::invalid_argument("variants: empty list");
  } else if (key == "reps") {
    cfg.reps = parse_value<int>(key, value);
    if (cfg.reps < 1) throw std::invalid_argument("reps must be at least 1");
  } else if (key == "seed") {
    cfg.seed = parse_value<std::uint64_t>(key, value);
  } else if (key == "sections") {
    cfg.rl.sections = parse_value<int>(key, value);
  } else if (key == "epsilon") {
    cfg.rl.epsilon = parse_value<double>(key, value);
  } else if (key == "beta") {
    cfg.rl.beta = parse_value<double>(key, value);
  } else if (key == "gamma") {
    cfg.rl.gamma = parse_value<double>(key, value);
  } else if (key == "train") {
    cfg.train = parse_bool(key, value);
  } else if (key == "pop") {
    cfg.population = parse_value<int>(key, value);
  } else if (key == "iters") {
    cfg.iterations = parse_value<int>(key, value);
  } else if (key == "limit") {
    cfg.limit = parse_value<int>(key, value);
  } else if (key == "delta") {
    cfg.delta = parse_value<double>(key, value);
    if (!(cfg.delta >= 0.0 && cfg.delta <= 1.0)) throw std::invalid_argument("delta must be in [0, 1]");
  } else if (key == "load-model") {
    cfg.load_model = value;
  } else if (key == "save-model") {
    cfg.save_model = value;
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "trace") {
    cfg.trace = value;
  } else if (key == "trace-features") {
    cfg.trace_features = parse_bool(key, value);
  } else if (key == "timing") {
    cfg.timing = parse_bool(key, value);
  } else if (key == "op.n.p_copy") {
    cfg.ops.p_copy = parse_value<double>(key, value);
  } else if (key == "op.ibin.mr_max") {
    cfg.ops.mr_max = parse_value<double>(key, value);
  } else if (key == "op.ibin.mr_min") {
    cfg.ops.mr_min = parse_value<double>(key, value);
  } else if (key == "op.nb.seg_min") {
    cfg.ops.seg_min = parse_value<double>(key, value);
  } else if (key == "op.nb.seg_max") {
    cfg.ops.seg_max = parse_value<double>(key, value);
  } else {
    throw std::invalid_argument("unknown setting '" + raw_key + "'");
  }
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tokens = split_ws(line);
    if (tokens.empty() || tokens[0][0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    auto key = split_ws(std::string_view(line).substr(0, eq));
    auto val = split_ws(std::string_view(line).substr(eq + 1));
    if (key.size() != 1) throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": bad key");
    std::string joined;
    for (auto v : val) joined += (joined.empty() ? "" : " ") + std::string(v);
    out.emplace_back(std::string(key[0]), joined);
  }
  return out;
}

std::vector<std::shared_ptr<const Problem>> resolve_problems(const ExperimentConfig& cfg) {
  std::vector<std::shared_ptr<const Problem>> out;
  if (cfg.problem == ProblemKind::OneMax) {
    if (cfg.dims.empty()) throw std::invalid_argument("onemax needs --dims (or --ids)");
    for (auto d : cfg.dims) out.push_back(std::make_shared<OneMax>(d));
  } else {
    if (cfg.instances.empty()) throw std::invalid_argument("sukp needs --instance");
    for (const auto& path : cfg.instances) {
      out.push_back(std::make_shared<Sukp>(std::make_shared<const SukpInstance>(load_sukp(path))));
    }
  }
  return out;
}

ColonyConfig colony_config_for(const Problem& problem, const ExperimentConfig& cfg, std::uint64_t seed) {
  ColonyConfig c;
  if (cfg.population) {
    c.population_size = *cfg.population;
  } else if (const auto* sukp = dynamic_cast<const Sukp*>(&problem)) {
    c.population_size = static_cast<int>(std::max(sukp->instance().m, sukp->instance().n));
  } else {
    c.population_size = 20;
  }
  c.max_iterations = cfg.iterations;
  c.trial_limit = cfg.limit.value_or(default_trial_limit(c.population_size, problem.dimension()));
  c.seed = seed;
  c.validate();
  return c;
}

namespace {

struct RepOutcome {
  RunRecord record;
  SelectorModel end_model;
};

RepOutcome run_repetition(const Problem& problem, Variant variant, const ExperimentConfig& cfg,
                          const OperatorPool& pool, const std::vector<std::string>& names,
                          const SelectorModel* saved, const SelectorModel* carried, int rep) {
  VariantStart start = variant_policy(variant, rep, saved, carried, names, cfg.rl.sections);
  RlParams params = cfg.rl;
  params.training_enabled = start.training_enabled && cfg.train.value_or(true) && cfg.delta > 0.0;
  if (start.always_random) {
    params.epsilon = 1.0;
    params.training_enabled = false;
  }
  const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(rep);
  const ColonyConfig colony = colony_config_for(problem, cfg, seed);
  SelectorModel model = start.model;
  RandomStream rng(seed);
  RunOptions options;
  options.record_features = cfg.trace_features;
  RepOutcome out{run_colony(problem, colony, pool, model, params, rng, options), {}};
  out.record.variant = variant_label(variant);
  out.end_model = params.training_enabled ? blend(start.model, model, cfg.delta) : start.model;
  return out;
}

}  // namespace

VariantRuns run_variant(const Problem& problem, Variant variant, const ExperimentConfig& cfg,
                        const SelectorModel* saved) {
  cfg.rl.validate();
  const OperatorPool pool = default_pool(cfg.ops);
  std::vector<std::string> names;
  for (const auto& op : pool) names.push_back(op.name);

  VariantRuns out;
  out.instance_id = problem.id();
  out.variant = variant;
  out.runs.resize(static_cast<std::size_t>(cfg.reps));

  if (variant_carries_model(variant)) {
    std::optional<SelectorModel> carried;
    for (int r = 0; r < cfg.reps; ++r) {
      auto rep = run_repetition(problem, variant, cfg, pool, names, saved, carried ? &*carried : nullptr, r);
      out.runs[static_cast<std::size_t>(r)] = std::move(rep.record);
      carried = std::move(rep.end_model);
    }
    out.final_model = std::move(*carried);
    return out;
  }

  std::vector<SelectorModel> finals(static_cast<std::size_t>(cfg.reps));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.reps));
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < cfg.reps; ++r) {
    const auto ur = static_cast<std::size_t>(r);
    try {
      auto rep = run_repetition(problem, variant, cfg, pool, names, saved, nullptr, r);
      out.runs[ur] = std::move(rep.record);
      finals[ur] = std::move(rep.end_model);
    } catch (...) {
      errors[ur] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  out.final_model = std::move(finals.back());
  return out;
}

ExperimentTable summarize(const std::vector<RunResult>& results, const std::vector<std::string>& variants) {
  if (variants.empty()) throw std::invalid_argument("summarize: no variants");
  std::vector<std::string> instances;
  std::map<std::string, std::map<std::string, std::vector<const RunResult*>>> cells;
  for (const auto& r : results) {
    if (std::find(instances.begin(), instances.end(), r.instance_id) == instances.end()) {
      instances.push_back(r.instance_id);
    }
    cells[r.instance_id][r.variant].push_back(&r);
  }

  ExperimentTable table;
  table.variants = variants;
  std::map<std::string, std::map<std::string, double>> rank_rows;
  for (const auto& inst : instances) {
    std::vector<std::vector<double>> values;
    std::vector<double> means;
    std::vector<double> seconds;
    for (const auto& v : variants) {
      auto it = cells[inst].find(v);
      if (it == cells[inst].end()) {
        throw std::invalid_argument("summarize: missing results for (" + inst + ", " + v + ")");
      }
      auto runs = it->second;
      std::sort(runs.begin(), runs.end(), [](const RunResult* a, const RunResult* b) { return a->rep < b->rep; });
      std::vector<double> vals;
      double secs = 0.0;
      for (const auto* r : runs) {
        vals.push_back(r->best_fitness);
        secs += r->seconds;
      }
      means.push_back(mean(vals));
      seconds.push_back(vals.empty() ? 0.0 : secs / static_cast<double>(vals.size()));
      values.push_back(std::move(vals));
    }
    const auto ranks = tied_ranks(means, true);
    for (std::size_t k = 0; k < variants.size(); ++k) {
      SummaryRow row;
      row.instance_id = inst;
      row.variant = variants[k];
      row.rank = ranks[k];
      row.max = *std::max_element(values[k].begin(), values[k].end());
      row.mean = means[k];
      row.std = sample_std(values[k]);
      if (k > 0) {
        if (values[k].size() != values[0].size()) {
          throw std::invalid_argument("summarize: unpaired repetitions for " + inst);
        }
        row.p_value = wilcoxon_signed_rank(values[k], values[0]);
      }
      row.reps = static_cast<int>(values[k].size());
      row.seconds = seconds[k];
      rank_rows[inst][variants[k]] = ranks[k];
      table.rows.push_back(row);
    }
  }
  if (!rank_rows.empty()) table.mean_rank = mean_ranks(rank_rows, variants);
  return table;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const auto problems = resolve_problems(cfg);
  std::optional<ModelArchive> saved;
  const bool needs_archive =
      std::any_of(cfg.variants.begin(), cfg.variants.end(), [](Variant v) { return variant_needs_archive(v); });
  if (needs_archive) {
    if (cfg.load_model.empty()) throw std::invalid_argument("w/L variants need --load-model");
    ArchiveExpectations expect;
    expect.sections = cfg.rl.sections;
    std::vector<std::string> names;
    for (const auto& op : default_pool(cfg.ops)) names.push_back(op.name);
    expect.operators = names;
    saved = load_model_file(cfg.load_model, expect);
  }

  ExperimentResult result;
  std::vector<std::string> labels;
  for (auto v : cfg.variants) labels.push_back(variant_label(v));
  for (const auto& problem : problems) {
    for (auto v : cfg.variants) {
      auto runs = run_variant(*problem, v, cfg, saved ? &saved->model : nullptr);
      for (std::size_t r = 0; r < runs.runs.size(); ++r) {
        const auto& rec = runs.runs[r];
        result.results.push_back(RunResult{rec.instance_id, rec.variant, static_cast<int>(r), rec.seed,
                                           rec.best_fitness, cfg.timing ? rec.seconds : 0.0});
      }
      result.details.push_back(std::move(runs));
    }
  }
  result.table = summarize(result.results, labels);
  return result;
}

ModelArchive train_model(const Problem& problem, const ExperimentConfig& cfg) {
  ModelArchive archive;
  std::optional<ModelArchive> loaded;
  Variant variant = Variant::AllRun;
  if (!cfg.load_model.empty()) {
    ArchiveExpectations expect;
    expect.sections = cfg.rl.sections;
    loaded = load_model_file(cfg.load_model, expect);
    variant = Variant::AllRunWithLoad;
  }
  ExperimentConfig train_cfg = cfg;
  train_cfg.train = true;
  auto runs = run_variant(problem, variant, train_cfg, loaded ? &loaded->model : nullptr);
  archive.model = std::move(runs.final_model);
  if (loaded) archive.provenance = loaded->provenance;
  archive.provenance.instance = problem.id();
  archive.provenance.episodes += cfg.reps;
  for (int r = 0; r < cfg.reps; ++r) archive.provenance.seeds.push_back(cfg.seed + static_cast<std::uint64_t>(r));
  return archive;
}

// ------------------------------------------------------------------ CSV

void write_summary_csv(std::ostream& out, const ExperimentTable& table, bool timing) {
  out << "instance_id,variant,rank,max,mean,std,p_value,reps,seconds\n";
  for (const auto& row : table.rows) {
    out << row.instance_id << ',' << row.variant << ',' << format_double(row.rank) << ','
        << format_double(row.max) << ',' << format_double(row.mean) << ',' << format_double(row.std) << ','
        << (row.p_value ? format_double(*row.p_value) : std::string("NA")) << ',' << row.reps << ','
        << format_double(timing ? row.seconds : 0.0) << '\n';
  }
  for (const auto& v : table.variants) {
    auto it = table.mean_rank.find(v);
    if (it == table.mean_rank.end()) continue;
    out << "mean_rank," << v << ',' << format_double(it->second) << ",,,,,,\n";
  }
}

std::string summary_csv_string(const ExperimentTable& table, bool timing) {
  std::ostringstream out;
  write_summary_csv(out, table, timing);
  return out.str();
}

void write_runs_csv(std::ostream& out, const std::vector<RunResult>& results, bool timing) {
  out << "instance_id,variant,rep,seed,best_fitness,seconds\n";
  for (const auto& r : results) {
    out << r.instance_id << ',' << r.variant << ',' << r.rep << ',' << r.seed << ','
        << format_double(r.best_fitness) << ',' << format_double(timing ? r.seconds : 0.0) << '\n';
  }
}

std::vector<RunResult> read_runs_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("runs file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "instance_id,variant,rep,seed,best_fitness,seconds") {
    throw std::invalid_argument("runs file: unexpected header '" + line + "'");
  }
  std::vector<RunResult> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = split_list(line);
    auto bad = [&]() { return std::invalid_argument("runs file line " + std::to_string(line_no) + ": malformed row"); };
    if (f.size() != 6) throw bad();
    auto rep = parse_number<int>(f[2]);
    auto seed = parse_number<std::uint64_t>(f[3]);
    auto best = parse_number<double>(f[4]);
    auto secs = parse_number<double>(f[5]);
    if (!rep || !seed || !best || !secs) throw bad();
    out.push_back(RunResult{f[0], f[1], *rep, *seed, *best, *secs});
  }
  return out;
}

void write_trace_csv(std::ostream& out, const RunRecord& record, const std::vector<std::string>& operators,
                     int population_size, bool with_features) {
  out << "iter,gbest";
  for (const auto& op : operators) {
    out << ",usage_" << op << ",success_" << op << ",credit_" << op << ",reward_" << op << ",selectable_pct_" << op;
  }
  if (with_features) {
    for (std::size_t k = 1; k <= kFeatureCount; ++k) out << ",phi_" << k;
  }
  out << '\n';
  const double per_iteration = 2.0 * population_size;
  for (const auto& it : record.trace) {
    out << it.iteration << ',' << format_double(it.global_best);
    for (const auto& op : it.operators) {
      out << ',' << op.usage << ',' << op.successes << ',' << format_double(op.credit) << ','
          << format_double(op.reward) << ',' << format_double(100.0 * static_cast<double>(op.usage) / per_iteration);
    }
    if (with_features) {
      for (std::size_t k = 0; k < kFeatureCount; ++k) {
        out << ',' << (it.mean_features ? format_double((*it.mean_features)[k]) : std::string("0"));
      }
    }
    out << '\n';
  }
}

}  // namespace aos
