#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spikefuse/am_network.hpp"
#include "spikefuse/cooperate.hpp"
#include "spikefuse/encoding.hpp"
#include "spikefuse/eval.hpp"
#include "spikefuse/ingest.hpp"
#include "spikefuse/sweep.hpp"

namespace spikefuse {

struct DatasetSpec {
  std::string name;
  std::string path;  // as written in the manifest; resolved against the data dir
};

struct EvalSpec {
  std::string name;
  EvalFormat format = EvalFormat::generic_tsv;
  std::string path;
};

/// "name=path".
DatasetSpec parse_dataset_spec(std::string_view text, std::string_view key);
/// "name=format:path".
EvalSpec parse_eval_spec(std::string_view text);
/// "ss=1,2,3" or "ts=5". Returns the axis name and its values.
std::pair<std::string, std::vector<std::size_t>> parse_grid_axis(std::string_view text);

/// Everything one command needs. Everything except the run-control fields
/// (output, overwrite, resume, workers, verbosity) is recorded in the outputs.
struct RunManifest {
  std::string command;
  std::string config_path;
  std::filesystem::path output_dir;
  std::filesystem::path input_dir;  // report only
  int verbosity = 0;
  bool overwrite = false;
  bool resume = false;
  std::size_t workers = 1;

  std::optional<std::filesystem::path> data_dir;  // defaults to $SPIKEFUSE_DATA_DIR
  std::vector<DatasetSpec> norms;
  std::vector<DatasetSpec> embeddings;
  std::vector<EvalSpec> evals;
  std::string case_study;  // generic_tsv pair subset, eval only

  EncodingConfig encoding;
  LifParams lif;
  CooperateConfig cooperate;
  Metric metric = Metric::hamming;

  std::vector<std::size_t> ss_values = kDefaultStrides;
  std::vector<std::size_t> ts_values = kDefaultStrides;
  std::vector<CooperateOp> ops{kAllOps.begin(), kAllOps.end()};
  std::vector<std::uint64_t> seeds{42};
  bool write_codes = false;

  std::filesystem::path resolve(const std::string& path) const;
  nlohmann::json to_json() const;
};

/// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitEvalEmpty = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;

/// Debug rasters and a vocabulary summary per dataset combination.
void cmd_encode(const RunManifest& m);
/// Fused code files per dataset combination.
void cmd_fuse(const RunManifest& m);
/// Closeness report (report.json, report.txt) and optional case-study tables.
void cmd_eval(const RunManifest& m);
/// Grid sweep. `hooks` are chained after the command's own bookkeeping.
void cmd_sweep(const RunManifest& m, const SweepHooks& hooks = {});
/// Re-renders a finished eval or sweep directory (input_dir) into output_dir.
void cmd_report(const RunManifest& m);

/// Dispatches on m.command and maps exceptions to exit codes, logging the
/// message.
int run_command(const RunManifest& m);

/// One line per concept: "name n_bits fingerprint hex".
void write_codes(std::ostream& out, const std::vector<BinaryRepresentation>& codes);
std::vector<BinaryRepresentation> read_codes(std::istream& in);

}  // namespace spikefuse
