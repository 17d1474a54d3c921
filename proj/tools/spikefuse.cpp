// spikefuse command-line entry point.
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "spikefuse/commands.hpp"
#include "spikefuse/error.hpp"

namespace {

struct RawOptions {
  std::string out;
  std::string input;
  std::string data_dir;
  std::vector<std::string> norms;
  std::vector<std::string> embeddings;
  std::vector<std::string> evals;
  std::string case_study;
  std::vector<std::uint64_t> seeds{42};
  std::size_t t_steps = 1000;
  double dt = 1.0;
  spikefuse::LifParams lif;
  std::vector<std::string> ops;
  std::size_t ss = 1;
  std::size_t ts = 1;
  std::vector<std::string> grid;
  std::string metric = "hamming";
  std::size_t workers = 1;
  bool overwrite = false;
  bool resume = false;
  bool write_codes = false;
  int verbosity = 0;
};

spikefuse::RunManifest build_manifest(const RawOptions& o, const std::string& command, const CLI::App& app) {
  using namespace spikefuse;
  RunManifest m;
  m.command = command;
  if (app.count("--config") > 0) m.config_path = app.get_option("--config")->as<std::string>();
  m.output_dir = o.out;
  m.input_dir = o.input;
  m.verbosity = o.verbosity;
  m.overwrite = o.overwrite;
  m.resume = o.resume;
  m.workers = o.workers;
  if (!o.data_dir.empty()) m.data_dir = o.data_dir;
  for (const auto& s : o.norms) m.norms.push_back(parse_dataset_spec(s, "norms"));
  for (const auto& s : o.embeddings) m.embeddings.push_back(parse_dataset_spec(s, "embeddings"));
  for (const auto& s : o.evals) m.evals.push_back(parse_eval_spec(s));
  m.case_study = o.case_study;
  if (o.seeds.empty()) throw ConfigError("--seed needs at least one value");
  m.seeds = o.seeds;
  m.encoding.t_steps = o.t_steps;
  m.encoding.dt = o.dt;
  m.encoding.rng_seed = o.seeds.front();
  m.lif = o.lif;
  m.metric = parse_metric(o.metric);

  if (!o.ops.empty()) {
    m.ops.clear();
    for (const auto& s : o.ops) m.ops.push_back(parse_op(s));
  }
  const bool ops_given = !o.ops.empty();
  m.cooperate = CooperateConfig{o.ss, o.ts, ops_given ? m.ops.front() : CooperateOp::or_op};
  if (command == "fuse" || command == "eval") {
    if (m.ops.size() > 1 && ops_given) throw ConfigError(command + " takes a single --op");
  }

  if (app.count("--ss") > 0) m.ss_values = {o.ss};
  if (app.count("--ts") > 0) m.ts_values = {o.ts};
  for (const auto& g : o.grid) {
    auto [axis, values] = parse_grid_axis(g);
    (axis == "ss" ? m.ss_values : m.ts_values) = std::move(values);
  }
  m.write_codes = o.write_codes;
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_mt("spikefuse");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);

  CLI::App app{"Multisensory and text representation fusion through spike cooperation"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML manifest; command-line flags override its keys");

  RawOptions o;
  app.add_option("-o,--out", o.out, "Output directory (written atomically)");
  app.add_option("--input", o.input, "Run directory to re-render (report)");
  app.add_option("--data-dir", o.data_dir, "Base for relative dataset paths (default $SPIKEFUSE_DATA_DIR)");
  app.add_option("--norms", o.norms, "Multisensory norms, name=path");
  app.add_option("--embeddings", o.embeddings, "Text embeddings, name=path");
  app.add_option("--eval", o.evals, "Eval dataset, name=format:path (simlex, men, mturk, generic_tsv)");
  app.add_option("--case-study", o.case_study, "Pair subset (word1<TAB>word2<TAB>rating) for ranking tables");
  app.add_option("--seed", o.seeds, "RNG seed(s); sweeps average over all of them")->capture_default_str();
  app.add_option("--t-steps", o.t_steps, "Recording interval T")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--dt", o.dt, "Time step")->capture_default_str();
  app.add_option("--tau-m", o.lif.tau_m, "LIF membrane time constant")->capture_default_str();
  app.add_option("--v-threshold", o.lif.v_threshold, "LIF firing threshold")->capture_default_str();
  app.add_option("--v-reset", o.lif.v_reset, "LIF reset potential")->capture_default_str();
  app.add_option("--v-rest", o.lif.v_rest, "LIF resting potential")->capture_default_str();
  app.add_option("--input-gain", o.lif.input_gain, "Weight of external input spikes")->capture_default_str();
  app.add_option("--synaptic-gain", o.lif.synaptic_gain, "Weight of recurrent spikes")->capture_default_str();
  app.add_option("--op", o.ops, "Cooperate op: AND, OR, NOR (sweep accepts several)");
  app.add_option("--ss", o.ss, "Spatial stride")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--ts", o.ts, "Temporal stride")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--grid", o.grid, "Sweep axis override, e.g. ss=1,2 ts=5");
  app.add_option("--metric", o.metric, "COO similarity: hamming or cosine")->capture_default_str();
  app.add_option("--workers", o.workers, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_flag("--overwrite", o.overwrite, "Replace a non-empty output directory");
  app.add_flag("--resume", o.resume, "Continue an interrupted sweep");
  app.add_flag("--write-codes", o.write_codes, "Sweep: also write every code file");
  app.add_flag("-v,--verbose", o.verbosity, "More logging (repeatable)");

  for (const auto* name : {"encode", "fuse", "eval", "sweep", "report"}) {
    app.add_subcommand(name, std::string(name) == "encode"   ? "Write debug rasters and a vocabulary summary"
                             : std::string(name) == "fuse"   ? "Write fused code files"
                             : std::string(name) == "eval"   ? "Closeness report against human similarity ratings"
                             : std::string(name) == "sweep"  ? "Grid sweep over ss, ts and op"
                                                             : "Re-render an eval or sweep directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return spikefuse::kExitConfig;
  }

  spdlog::set_level(o.verbosity > 0 ? spdlog::level::debug : spdlog::level::info);
  const std::string command = app.get_subcommands().front()->get_name();
  spikefuse::RunManifest manifest;
  try {
    manifest = build_manifest(o, command, app);
  } catch (const spikefuse::Error& e) {
    spdlog::error("{}", e.what());
    return spikefuse::kExitConfig;
  }
  return spikefuse::run_command(manifest);
}
