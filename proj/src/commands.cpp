#include "spikefuse/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "spikefuse/config.hpp"
#include "spikefuse/error.hpp"
#include "spikefuse/pipeline.hpp"
#include "spikefuse/report.hpp"
#include "text_util.hpp"

namespace spikefuse {

namespace fs = std::filesystem;
using nlohmann::json;

DatasetSpec parse_dataset_spec(std::string_view text, std::string_view key) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0 || eq + 1 == text.size()) {
    throw ConfigError(fmt::format("{}: expected name=path, got '{}'", key, text));
  }
  return {std::string(detail::trim(text.substr(0, eq))), std::string(detail::trim(text.substr(eq + 1)))};
}

EvalSpec parse_eval_spec(std::string_view text) {
  const auto eq = text.find('=');
  const auto colon = text.find(':', eq == std::string_view::npos ? 0 : eq);
  if (eq == std::string_view::npos || eq == 0 || colon == std::string_view::npos || colon + 1 == text.size()) {
    throw ConfigError(fmt::format("eval: expected name=format:path, got '{}'", text));
  }
  EvalSpec spec;
  spec.name = std::string(detail::trim(text.substr(0, eq)));
  spec.format = parse_eval_format(detail::trim(text.substr(eq + 1, colon - eq - 1)));
  spec.path = std::string(detail::trim(text.substr(colon + 1)));
  return spec;
}

std::pair<std::string, std::vector<std::size_t>> parse_grid_axis(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw ConfigError(fmt::format("grid: expected ss=.. or ts=.., got '{}'", text));
  std::string axis(detail::trim(text.substr(0, eq)));
  if (axis != "ss" && axis != "ts") throw ConfigError(fmt::format("grid: unknown axis '{}'", axis));
  std::vector<std::size_t> values;
  for (const auto& field : detail::split_delimited(text.substr(eq + 1), ',')) {
    const auto v = detail::trim(field);
    if (!detail::is_unsigned_integer(v)) throw ConfigError(fmt::format("grid: '{}' is not a positive integer", v));
    values.push_back(std::stoull(std::string(v)));
    if (values.back() == 0) throw ConfigError("grid: strides must be >= 1");
  }
  if (values.empty()) throw ConfigError(fmt::format("grid: axis {} has no values", axis));
  return {std::move(axis), std::move(values)};
}

fs::path RunManifest::resolve(const std::string& path) const {
  fs::path p(path);
  if (p.is_absolute()) return p;
  if (data_dir) return *data_dir / p;
  if (const char* env = std::getenv("SPIKEFUSE_DATA_DIR"); env != nullptr && *env != '\0') return fs::path(env) / p;
  return p;
}

json RunManifest::to_json() const {
  json j;
  j["command"] = command;
  const auto specs = [](const std::vector<DatasetSpec>& v) {
    json a = json::array();
    for (const auto& s : v) a.push_back(json{{"name", s.name}, {"path", s.path}});
    return a;
  };
  j["norms"] = specs(norms);
  j["embeddings"] = specs(embeddings);
  j["eval"] = json::array();
  for (const auto& e : evals) {
    j["eval"].push_back(json{{"name", e.name}, {"format", std::string(to_string(e.format))}, {"path", e.path}});
  }
  j["case_study"] = case_study;
  j["encoding"] = spikefuse::to_json(encoding);
  j["lif"] = spikefuse::to_json(lif);
  j["cooperate"] = spikefuse::to_json(cooperate);
  j["metric"] = std::string(to_string(metric));
  j["grid"] = json{{"ss", ss_values}, {"ts", ts_values}};
  std::vector<std::string> op_names;
  for (auto op : ops) op_names.emplace_back(to_string(op));
  j["ops"] = op_names;
  j["seeds"] = seeds;
  j["write_codes"] = write_codes;
  return j;
}

namespace {

/// Output written under "<dir>.partial" and renamed into place by commit().
class StagedOutput {
 public:
  StagedOutput(fs::path final_dir, bool overwrite, bool resume) : final_(std::move(final_dir)) {
    if (final_.empty()) throw ConfigError("no output directory given (--out)");
    if (fs::exists(final_) && !fs::is_directory(final_)) {
      throw ConfigError("output path " + final_.string() + " exists and is not a directory");
    }
    if (fs::exists(final_) && !fs::is_empty(final_) && !overwrite) {
      throw ConfigError("output directory " + final_.string() + " is not empty; pass --overwrite to replace it");
    }
    staging_ = final_;
    staging_ += ".partial";
    if (fs::exists(staging_) && !resume) fs::remove_all(staging_);
    fs::create_directories(staging_);
  }

  const fs::path& dir() const noexcept { return staging_; }

  void commit() {
    if (fs::exists(final_)) fs::remove_all(final_);
    if (final_.has_parent_path()) fs::create_directories(final_.parent_path());
    fs::rename(staging_, final_);
  }

 private:
  fs::path final_;
  fs::path staging_;
};

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
  if (!out) throw DataError("failed writing " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

struct LoadedData {
  std::vector<std::pair<std::string, NormDataset>> norms;
  std::vector<std::pair<std::string, EmbeddingDataset>> embeddings;
  std::vector<EvalDataset> evals;
};

LoadedData load_data(const RunManifest& m, bool need_evals) {
  if (m.norms.empty()) throw ConfigError("manifest key 'norms' is missing: name at least one norms file (name=path)");
  if (m.embeddings.empty()) {
    throw ConfigError("manifest key 'embeddings' is missing: name at least one embeddings file (name=path)");
  }
  if (need_evals && m.evals.empty()) {
    throw ConfigError("manifest key 'eval' is missing: name at least one eval dataset (name=format:path)");
  }
  std::set<std::string> names;
  const auto unique = [&names](const std::string& key, const std::string& name) {
    if (name.empty()) throw ConfigError(key + ": empty dataset name");
    if (!names.insert(key + "/" + name).second) throw ConfigError(key + ": duplicate dataset name '" + name + "'");
  };

  LoadedData data;
  std::set<std::string, std::less<>> wanted;
  for (const auto& spec : m.norms) {
    unique("norms", spec.name);
    const auto path = m.resolve(spec.path);
    spdlog::info("loading norms {} from {}", spec.name, path.string());
    data.norms.emplace_back(spec.name, load_norms(path, norm_format_for(path)));
    for (const auto& v : data.norms.back().second.vectors) wanted.insert(v.name);
  }
  for (const auto& spec : m.embeddings) {
    unique("embeddings", spec.name);
    const auto path = m.resolve(spec.path);
    spdlog::info("loading embeddings {} from {}", spec.name, path.string());
    data.embeddings.emplace_back(spec.name,
                                 load_embeddings(path, [&wanted](std::string_view t) { return wanted.contains(t); }));
  }
  if (need_evals) {
    for (const auto& spec : m.evals) {
      unique("eval", spec.name);
      data.evals.push_back(load_eval_pairs(m.resolve(spec.path), spec.format, spec.name));
    }
  }
  return data;
}

std::vector<PreparedCombo> prepare_all(const LoadedData& data) {
  std::vector<PreparedCombo> combos;
  for (const auto& [emb_name, emb] : data.embeddings) {
    for (const auto& [norm_name, norms] : data.norms) {
      combos.push_back(prepare_combo(emb_name + "-" + norm_name, norms, emb, norm_name, emb_name));
    }
  }
  return combos;
}

std::string file_stem(std::size_t index, const std::string& token) {
  std::string safe;
  for (char c : token) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '_' || c == '.';
    safe.push_back(ok ? c : '_');
  }
  return fmt::format("{:05d}_{}", index, safe);
}

FusionConfig fusion_config(const RunManifest& m, const PreparedCombo& combo) {
  FusionConfig fc;
  fc.encoding = m.encoding;
  fc.lif = m.lif;
  fc.cooperate = m.cooperate;
  fc.norms_id = combo.norms_id;
  fc.embeddings_id = combo.embeddings_id;
  for (const auto& e : m.evals) fc.eval_ids.push_back(e.name);
  return fc;
}

std::string codes_file_name(const CooperateConfig& cc) {
  return fmt::format("codes_ss{}_ts{}_{}.txt", cc.ss, cc.ts, to_string(cc.op));
}

std::vector<BinaryRepresentation> named_codes(const PreparedCombo& combo, std::vector<BitVector> bits,
                                              std::uint64_t fingerprint) {
  std::vector<BinaryRepresentation> out;
  out.reserve(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) out.push_back({combo.vocabulary[i], std::move(bits[i]), fingerprint});
  return out;
}

std::string codes_text(const std::vector<BinaryRepresentation>& codes) {
  std::ostringstream out;
  write_codes(out, codes);
  return out.str();
}

void check_single_seed(const RunManifest& m) {
  if (m.seeds.size() > 1) {
    spdlog::warn("{} uses only the first seed ({}); multi-seed averaging is a sweep feature", m.command,
                 m.seeds.front());
  }
}

EncodingConfig first_seed_encoding(const RunManifest& m) {
  EncodingConfig cfg = m.encoding;
  if (!m.seeds.empty()) cfg.rng_seed = m.seeds.front();
  return cfg;
}

std::vector<ComboInput> combo_inputs(const LoadedData& data) {
  std::vector<ComboInput> inputs;
  for (const auto& [emb_name, emb] : data.embeddings) {
    for (const auto& [norm_name, norms] : data.norms) {
      inputs.push_back({emb_name + "-" + norm_name, norm_name, emb_name, &norms, &emb});
    }
  }
  return inputs;
}

}  // namespace

void write_codes(std::ostream& out, const std::vector<BinaryRepresentation>& codes) {
  for (const auto& c : codes) {
    out << c.name << ' ' << c.bits.size() << ' ' << fmt::format("{:016x}", c.config_fingerprint) << ' '
        << c.bits.to_hex() << '\n';
  }
}

std::vector<BinaryRepresentation> read_codes(std::istream& in) {
  std::vector<BinaryRepresentation> codes;
  std::string line;
  std::vector<std::string_view> fields;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    detail::split_whitespace(line, fields);
    if (fields.size() != 4 || !detail::is_unsigned_integer(fields[1])) {
      throw DataError("<codes>", line_no, "expected 'name n_bits fingerprint hex'");
    }
    BinaryRepresentation r;
    r.name = std::string(fields[0]);
    const std::size_t n_bits = std::stoull(std::string(fields[1]));
    try {
      r.config_fingerprint = std::stoull(std::string(fields[2]), nullptr, 16);
      r.bits = BitVector::from_hex(fields[3], n_bits);
    } catch (const std::exception& e) {
      throw DataError("<codes>", line_no, e.what());
    }
    codes.push_back(std::move(r));
  }
  return codes;
}

void cmd_encode(const RunManifest& m) {
  check_single_seed(m);
  const EncodingConfig cfg = first_seed_encoding(m);
  cfg.validate();
  m.lif.validate();
  StagedOutput out(m.output_dir, m.overwrite, false);
  const auto data = load_data(m, false);
  for (const auto& combo : prepare_all(data)) {
    const auto rasters = encode_vocabulary(combo, cfg, m.lif, m.workers);
    const fs::path dir = out.dir() / combo.name;
    fs::create_directories(dir / "rasters" / "text");
    fs::create_directories(dir / "rasters" / "am");
    std::string summary = "index\tconcept\ttext_spikes\tam_spikes\n";
    for (std::size_t i = 0; i < combo.vocabulary.size(); ++i) {
      const auto stem = file_stem(i, combo.vocabulary[i]) + ".txt";
      write_raster(dir / "rasters" / "text" / stem, rasters.text[i]);
      write_raster(dir / "rasters" / "am" / stem, rasters.am[i]);
      summary += fmt::format("{}\t{}\t{}\t{}\n", i, combo.vocabulary[i], rasters.text[i].count(),
                             rasters.am[i].count());
    }
    write_file(dir / "vocabulary.tsv", summary);
  }
  write_json(out.dir() / "manifest.json", m.to_json());
  out.commit();
}

void cmd_fuse(const RunManifest& m) {
  check_single_seed(m);
  const EncodingConfig cfg = first_seed_encoding(m);
  cfg.validate();
  m.lif.validate();
  StagedOutput out(m.output_dir, m.overwrite, false);
  const auto data = load_data(m, false);
  for (const auto& combo : prepare_all(data)) {
    m.cooperate.validate(combo.d_ms(), cfg.t_steps);
    const auto rasters = encode_vocabulary(combo, cfg, m.lif, m.workers);
    FusionConfig fc = fusion_config(m, combo);
    fc.encoding = cfg;
    auto codes = named_codes(combo, fuse_vocabulary(rasters, m.cooperate, m.workers), fc.fingerprint());
    write_file(out.dir() / combo.name / codes_file_name(m.cooperate), codes_text(codes));
    spdlog::info("{}: {} codes of {} bits, diversity {}", combo.name, codes.size(),
                 codes.empty() ? 0 : codes.front().bits.size(), fixed9(diversity(codes)));
  }
  write_json(out.dir() / "manifest.json", m.to_json());
  out.commit();
}

void cmd_eval(const RunManifest& m) {
  check_single_seed(m);
  const EncodingConfig cfg = first_seed_encoding(m);
  cfg.validate();
  m.lif.validate();
  StagedOutput out(m.output_dir, m.overwrite, false);
  const auto data = load_data(m, true);
  std::optional<EvalDataset> case_subset;
  if (!m.case_study.empty()) {
    case_subset = load_eval_pairs(m.resolve(m.case_study), EvalFormat::generic_tsv, "case_study");
  }

  EvalReport report;
  report.manifest = m.to_json();
  for (const auto& combo : prepare_all(data)) {
    m.cooperate.validate(combo.d_ms(), cfg.t_steps);
    const auto rasters = encode_vocabulary(combo, cfg, m.lif, m.workers);
    const auto codes = fuse_vocabulary(rasters, m.cooperate, m.workers);
    const std::set<std::string, std::less<>> tokens(combo.vocabulary.begin(), combo.vocabulary.end());
    const std::string label = to_label(GridPoint{m.cooperate.ss, m.cooperate.ts, m.cooperate.op});
    for (const auto& eval : data.evals) {
      std::size_t dropped = 0;
      const auto usable = usable_pairs(tokens, eval, &dropped);
      if (usable.pairs.size() < 3) {
        throw EvalEmptyError(fmt::format("{} on {}: only {} usable pairs ({} dropped as out of vocabulary)",
                                         eval.name, combo.name, usable.pairs.size(), dropped));
      }
      auto baselines = evaluate_baselines(combo, usable);
      auto coo = evaluate_codes(combo, codes, usable, label, m.metric);
      for (auto* r : {&baselines.text, &baselines.multisensory, &baselines.concatenate, &coo}) {
        r->dropped_pairs += dropped;
        report.add(combo.name, *r);
      }
    }
    if (case_subset) {
      const std::vector<CaseStudyMethod> methods{{"Multisensory", multisensory_scorer(combo)},
                                                 {"Text", text_scorer(combo)},
                                                 {"COO", code_scorer(combo, codes, m.metric)}};
      std::ostringstream tsv;
      write_case_study_tsv(tsv, case_study_table(*case_subset, methods));
      write_file(out.dir() / (combo.name + "_case_study.tsv"), tsv.str());
    }
  }
  report = eval_report_from_json(to_json(report));
  write_json(out.dir() / "report.json", to_json(report));
  std::ostringstream text;
  write_report_text(text, report);
  write_file(out.dir() / "report.txt", text.str());
  out.commit();
}

void cmd_sweep(const RunManifest& m, const SweepHooks& hooks) {
  StagedOutput out(m.output_dir, m.overwrite, m.resume);
  const auto data = load_data(m, true);

  SweepPlan plan;
  plan.combos = combo_inputs(data);
  plan.evals = data.evals;
  plan.ss_values = m.ss_values;
  plan.ts_values = m.ts_values;
  plan.ops = m.ops;
  plan.seeds = m.seeds;
  plan.encoding = m.encoding;
  plan.lif = m.lif;
  plan.workers = m.workers;
  plan.validate();
  const json plan_json = plan.describe();

  const fs::path progress_path = out.dir() / "progress.jsonl";
  std::vector<SweepCell> completed;
  if (m.resume && fs::exists(progress_path)) {
    std::ifstream in(progress_path);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
      json j;
      try {
        j = json::parse(line);
      } catch (const json::exception&) {
        break;  // torn last line of an interrupted run
      }
      if (header) {
        if (j.value("plan", json()) != plan_json) {
          throw ConfigError("cannot resume: " + progress_path.string() + " was written by a different sweep plan");
        }
        header = false;
        continue;
      }
      completed.push_back(cell_from_json(j));
    }
    spdlog::info("resuming sweep with {} completed cells", completed.size());
  }

  // Rewrite the log from the parsed cells so a torn tail never survives.
  std::ofstream progress(progress_path, std::ios::binary | std::ios::trunc);
  if (!progress) throw DataError("cannot write " + progress_path.string());
  progress << json{{"plan", plan_json}}.dump() << '\n';
  for (const auto& c : completed) progress << to_json(c, false).dump() << '\n';
  progress.flush();

  SweepHooks chained;
  chained.on_cell = [&](const SweepCell& cell) {
    progress << to_json(cell, false).dump() << '\n';
    progress.flush();
    if (hooks.on_cell) hooks.on_cell(cell);
  };
  chained.on_codes = [&](const PreparedCombo& combo, const GridPoint& p, std::uint64_t seed,
                         const std::vector<BitVector>& codes) {
    if (m.write_codes) {
      FusionConfig fc = fusion_config(m, combo);
      fc.encoding.rng_seed = seed;
      fc.cooperate = CooperateConfig{p.ss, p.ts, p.op};
      const auto named = named_codes(combo, codes, fc.fingerprint());
      write_file(out.dir() / "codes" / combo.name /
                     fmt::format("ss{}_ts{}_{}_seed{}.txt", p.ss, p.ts, to_string(p.op), seed),
                 codes_text(named));
    }
    if (hooks.on_codes) hooks.on_codes(combo, p, seed, codes);
  };

  const SweepResult result = run_sweep(plan, completed, chained);
  progress.close();

  json results = to_json(result);
  results["manifest"] = m.to_json();
  write_json(out.dir() / "results.json", results);
  std::ostringstream diversity_tsv;
  write_diversity_tsv(diversity_tsv, result);
  write_file(out.dir() / "diversity.tsv", diversity_tsv.str());
  std::ostringstream best_tsv;
  write_best_tsv(best_tsv, result);
  write_file(out.dir() / "best.tsv", best_tsv.str());
  if (result.baselines.size() * plan.evals.size() >= 2) {
    std::ostringstream ratio_tsv;
    write_best_ratio_tsv(ratio_tsv, best_ratio_analysis(result));
    write_file(out.dir() / "best_ratio.tsv", ratio_tsv.str());
  } else {
    spdlog::info("best-ratio analysis skipped: needs at least two (dataset, combo) cells");
  }
  const auto report = report_from_sweep(result);
  write_json(out.dir() / "report.json", to_json(report));
  std::ostringstream text;
  write_report_text(text, report);
  write_file(out.dir() / "report.txt", text.str());
  fs::remove(progress_path);
  out.commit();
}

void cmd_report(const RunManifest& m) {
  if (m.input_dir.empty()) throw ConfigError("report needs an input run directory (--input)");
  const auto read_json = [](const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read " + path.string());
    try {
      return json::parse(in);
    } catch (const json::exception& e) {
      throw DataError(path.string(), 0, e.what());
    }
  };
  StagedOutput out(m.output_dir, m.overwrite, false);
  EvalReport report;
  if (fs::exists(m.input_dir / "results.json")) {
    SweepResult result;
    try {
      result = sweep_result_from_json(read_json(m.input_dir / "results.json"));
    } catch (const json::exception& e) {
      throw DataError((m.input_dir / "results.json").string(), 0, e.what());
    }
    std::ostringstream diversity_tsv;
    write_diversity_tsv(diversity_tsv, result);
    write_file(out.dir() / "diversity.tsv", diversity_tsv.str());
    std::ostringstream best_tsv;
    write_best_tsv(best_tsv, result);
    write_file(out.dir() / "best.tsv", best_tsv.str());
    std::set<std::pair<std::string, std::string>> cells;
    for (const auto& b : result.baselines) {
      for (const auto& [dataset, r] : b.per_dataset) cells.insert({b.combo, dataset});
    }
    if (cells.size() >= 2) {
      std::ostringstream ratio_tsv;
      write_best_ratio_tsv(ratio_tsv, best_ratio_analysis(result));
      write_file(out.dir() / "best_ratio.tsv", ratio_tsv.str());
    }
    report = report_from_sweep(result);
  } else if (fs::exists(m.input_dir / "report.json")) {
    report = eval_report_from_json(read_json(m.input_dir / "report.json"));
  } else {
    throw DataError("no results.json or report.json in " + m.input_dir.string());
  }
  write_json(out.dir() / "report.json", to_json(report));
  std::ostringstream text;
  write_report_text(text, report);
  write_file(out.dir() / "report.txt", text.str());
  out.commit();
}

int run_command(const RunManifest& m) {
  try {
    if (m.command == "encode") {
      cmd_encode(m);
    } else if (m.command == "fuse") {
      cmd_fuse(m);
    } else if (m.command == "eval") {
      cmd_eval(m);
    } else if (m.command == "sweep") {
      cmd_sweep(m);
    } else if (m.command == "report") {
      cmd_report(m);
    } else {
      throw ConfigError("unknown command '" + m.command + "'");
    }
    return kExitOk;
  } catch (const EvalEmptyError& e) {
    spdlog::error("{}", e.what());
    return kExitEvalEmpty;
  } catch (const ConfigError& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  } catch (const DataError& e) {
    spdlog::error("{}", e.what());
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return kExitData;
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  }
}

}  // namespace spikefuse
