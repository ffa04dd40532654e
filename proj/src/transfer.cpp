#include "aos/transfer.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "aos/text.hpp"

namespace aos {

std::string save_model(const ModelArchive& archive) {
  const SelectorModel& m = archive.model;
  std::string out;
  out += kArchiveHeader;
  out += '\n';
  out += "feature_dim " + std::to_string(kFeatureCount) + "\n";
  out += "sections " + std::to_string(m.sections()) + "\n";
  out += "operators";
  for (const auto& name : m.operator_names()) out += " " + name;
  out += '\n';
  for (std::size_t k = 0; k < m.size(); ++k) {
    const auto& e = m.entry(k);
    out += std::to_string(k) + " " + std::to_string(e.successes) + " " + std::to_string(e.usage) + " " +
           format_double(e.q) + " " + format_double(e.credit);
    for (double c : e.centre) out += " " + format_double(c);
    out += '\n';
  }
  const auto& p = archive.provenance;
  out += "meta: instance " + (p.instance.empty() ? std::string("-") : p.instance) + "\n";
  out += "meta: episodes " + std::to_string(p.episodes) + "\n";
  out += "meta: seeds";
  for (auto s : p.seeds) out += " " + std::to_string(s);
  out += '\n';
  return out;
}

void save_model_file(const ModelArchive& archive, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model archive '" + path + "'");
  out << save_model(archive);
  if (!out) throw std::runtime_error("write failed for model archive '" + path + "'");
}

namespace {

template <typename T>
T number(std::string_view token, const std::string& field) {
  auto v = parse_number<T>(token);
  if (!v) throw ArchiveError(field, "corrupt number '" + std::string(token) + "'");
  return *v;
}

std::vector<std::string_view> keyed_line(std::istringstream& in, std::string& line,
                                         const std::string& key) {
  if (!std::getline(in, line)) throw ArchiveError(key, "missing line (truncated archive)");
  auto tokens = split_ws(line);
  if (tokens.empty() || tokens[0] != key) throw ArchiveError(key, "expected '" + key + "' line");
  tokens.erase(tokens.begin());
  return tokens;
}

}  // namespace

ModelArchive load_model(std::string_view text, const ArchiveExpectations& expect) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw ArchiveError("header", "empty archive");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kArchiveHeader) {
    if (line.rfind("AOSMODEL", 0) == 0) throw ArchiveError("version", "unsupported '" + line + "'");
    throw ArchiveError("header", "not a model archive");
  }

  auto dim_tokens = keyed_line(in, line, "feature_dim");
  if (dim_tokens.size() != 1) throw ArchiveError("feature_dim", "expected one value");
  const auto dim = number<std::size_t>(dim_tokens[0], "feature_dim");
  if (dim != kFeatureCount) {
    throw ArchiveError("feature_dim", "archive has " + std::to_string(dim) + " features, run uses " +
                                          std::to_string(kFeatureCount));
  }

  auto sec_tokens = keyed_line(in, line, "sections");
  if (sec_tokens.size() != 1) throw ArchiveError("sections", "expected one value");
  const int sections = number<int>(sec_tokens[0], "sections");
  if (sections < 1) throw ArchiveError("sections", "must be positive");
  if (expect.sections && *expect.sections != sections) {
    throw ArchiveError("sections", "archive has " + std::to_string(sections) + ", run uses " +
                                       std::to_string(*expect.sections));
  }

  auto op_tokens = keyed_line(in, line, "operators");
  std::vector<std::string> names(op_tokens.begin(), op_tokens.end());
  if (names.empty()) throw ArchiveError("operators", "no operators listed");
  if (expect.operators && *expect.operators != names) {
    throw ArchiveError("operators", "archive operator list does not match the run's pool");
  }

  ModelArchive archive{SelectorModel(names, sections), {}};
  for (std::size_t k = 0; k < archive.model.size(); ++k) {
    const std::string field = "entry " + std::to_string(k);
    if (!std::getline(in, line)) throw ArchiveError(field, "missing line (truncated archive)");
    auto tokens = split_ws(line);
    if (tokens.size() != 5 + kFeatureCount) {
      throw ArchiveError(field, "expected " + std::to_string(5 + kFeatureCount) + " values, found " +
                                    std::to_string(tokens.size()));
    }
    if (number<std::size_t>(tokens[0], field + " index") != k) throw ArchiveError(field, "out of order");
    auto& e = archive.model.entry(k);
    e.successes = number<long>(tokens[1], field + " n_k");
    e.usage = number<long>(tokens[2], field + " u_k");
    e.q = number<double>(tokens[3], field + " q_k");
    e.credit = number<double>(tokens[4], field + " cr_k");
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      e.centre[i] = number<double>(tokens[5 + i], field + " c_" + std::to_string(i + 1));
    }
    if (e.successes < 0 || e.usage < 0) throw ArchiveError(field, "negative counter");
  }

  bool saw_instance = false;
  bool saw_episodes = false;
  bool saw_seeds = false;
  while (std::getline(in, line)) {
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens[0] != "meta:" || tokens.size() < 2) throw ArchiveError("meta", "unexpected line '" + line + "'");
    auto& p = archive.provenance;
    if (tokens[1] == "instance" && tokens.size() == 3) {
      p.instance = tokens[2] == "-" ? std::string() : std::string(tokens[2]);
      saw_instance = true;
    } else if (tokens[1] == "episodes" && tokens.size() == 3) {
      p.episodes = number<long>(tokens[2], "meta episodes");
      saw_episodes = true;
    } else if (tokens[1] == "seeds") {
      for (std::size_t i = 2; i < tokens.size(); ++i) p.seeds.push_back(number<std::uint64_t>(tokens[i], "meta seeds"));
      saw_seeds = true;
    } else {
      throw ArchiveError("meta", "unknown key '" + std::string(tokens[1]) + "'");
    }
  }
  if (!saw_instance || !saw_episodes || !saw_seeds) throw ArchiveError("meta", "missing provenance (truncated archive)");
  return archive;
}

ModelArchive load_model_file(const std::string& path, const ArchiveExpectations& expect) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model archive '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return load_model(buf.str(), expect);
  } catch (const ArchiveError& e) {
    throw ArchiveError(e.field(), e.detail(), path);
  }
}

SelectorModel blend(const SelectorModel& alpha, const SelectorModel& beta, double delta) {
  if (alpha.size() != beta.size() || alpha.sections() != beta.sections() ||
      alpha.operator_names() != beta.operator_names()) {
    throw std::invalid_argument("blend: models differ in shape");
  }
  if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("blend: delta must be in [0, 1]");
  if (delta == 0.0) return alpha;
  if (delta == 1.0) return beta;

  // a + delta * (b - a) keeps blend(m, m, delta) == m exactly.
  auto mix = [delta](double a, double b) { return a + delta * (b - a); };
  auto mix_count = [&](long a, long b) {
    return static_cast<long>(std::floor(mix(static_cast<double>(a), static_cast<double>(b)) + 0.5));
  };
  SelectorModel out = alpha;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto& a = alpha.entry(k);
    const auto& b = beta.entry(k);
    auto& e = out.entry(k);
    for (std::size_t i = 0; i < kFeatureCount; ++i) e.centre[i] = mix(a.centre[i], b.centre[i]);
    e.successes = mix_count(a.successes, b.successes);
    e.usage = mix_count(a.usage, b.usage);
    e.q = mix(a.q, b.q);
    e.credit = mix(a.credit, b.credit);
  }
  return out;
}

Variant parse_variant(std::string_view name) {
  std::string key;
  for (char c : name) {
    if (c == '_' || c == ' ') c = '-';
    key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (key == "random") return Variant::Random;
  if (key == "one-run" || key == "onerun" || key == "one-run-wol") return Variant::OneRun;
  if (key == "all-run" || key == "allrun" || key == "all-run-wol") return Variant::AllRun;
  if (key == "one-run-wl" || key == "one-run-w/l" || key == "onerun-wl") return Variant::OneRunWithLoad;
  if (key == "all-run-wl" || key == "all-run-w/l" || key == "allrun-wl") return Variant::AllRunWithLoad;
  throw std::invalid_argument("unknown variant '" + std::string(name) + "'");
}

std::string variant_label(Variant v) {
  switch (v) {
    case Variant::Random: return "random";
    case Variant::OneRun: return "one-run";
    case Variant::AllRun: return "all-run";
    case Variant::OneRunWithLoad: return "one-run-wl";
    case Variant::AllRunWithLoad: return "all-run-wl";
  }
  return "?";
}

bool variant_needs_archive(Variant v) {
  return v == Variant::OneRunWithLoad || v == Variant::AllRunWithLoad;
}

bool variant_carries_model(Variant v) { return v == Variant::AllRun || v == Variant::AllRunWithLoad; }

VariantStart variant_policy(Variant variant, int rep_index, const SelectorModel* saved,
                            const SelectorModel* carried, const std::vector<std::string>& operators,
                            int sections) {
  if (variant_needs_archive(variant) && saved == nullptr) {
    throw std::invalid_argument("variant " + variant_label(variant) + " needs a saved model archive");
  }
  SelectorModel fresh(operators, sections);
  switch (variant) {
    case Variant::Random:
      return {fresh, false, true};
    case Variant::OneRun:
      return {fresh, true, false};
    case Variant::AllRun:
      return {rep_index > 0 && carried != nullptr ? *carried : fresh, true, false};
    case Variant::OneRunWithLoad:
      return {*saved, true, false};
    case Variant::AllRunWithLoad:
      return {rep_index > 0 && carried != nullptr ? *carried : *saved, true, false};
  }
  return {fresh, true, false};
}

}  // namespace aos
