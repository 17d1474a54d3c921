#include "spikefuse/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "spikefuse/config.hpp"
#include "spikefuse/error.hpp"
#include "spikefuse/parallel.hpp"

namespace spikefuse {

using nlohmann::json;

namespace {

int op_rank(CooperateOp op) {
  switch (op) {
    case CooperateOp::and_op: return 0;
    case CooperateOp::nor: return 1;
    case CooperateOp::or_op: return 2;
  }
  return 3;
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::vector<std::size_t> sorted_unique(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

using CellKey = std::tuple<std::string, std::size_t, std::size_t, int>;

CellKey key_of(const std::string& combo, const GridPoint& p) { return {combo, p.ss, p.ts, op_rank(p.op)}; }

json closeness_json(const ClosenessResult& r, bool rounded) {
  const auto fix = [rounded](double x) { return rounded ? round9(x) : x; };
  json j{{"dataset", r.dataset},   {"method", r.method},   {"config", r.config},
         {"spearman", fix(r.spearman)}, {"n_pairs", r.n_pairs}, {"dropped_pairs", r.dropped_pairs}};
  j["diversity"] = r.diversity ? json(fix(*r.diversity)) : json(nullptr);
  return j;
}

}  // namespace

std::strong_ordering operator<=>(const GridPoint& a, const GridPoint& b) {
  if (auto c = a.ss <=> b.ss; c != 0) return c;
  if (auto c = a.ts <=> b.ts; c != 0) return c;
  return op_rank(a.op) <=> op_rank(b.op);
}

std::string to_label(const GridPoint& p) { return fmt::format("ss={} ts={} op={}", p.ss, p.ts, to_string(p.op)); }

void SweepPlan::validate() const {
  if (combos.empty()) throw ConfigError("sweep needs at least one dataset combination");
  if (evals.empty()) throw ConfigError("sweep needs at least one eval dataset");
  if (ss_values.empty() || ts_values.empty() || ops.empty()) throw ConfigError("sweep grid is empty");
  if (seeds.empty()) throw ConfigError("sweep needs at least one seed");
  for (auto s : ss_values) {
    if (s < 1) throw ConfigError("spatial strides must be >= 1");
  }
  for (auto t : ts_values) {
    if (t < 1) throw ConfigError("temporal strides must be >= 1");
  }
  for (const auto& c : combos) {
    if (c.norms == nullptr || c.embeddings == nullptr) throw ConfigError("combo " + c.name + " has no data");
  }
  std::set<std::string> names;
  for (const auto& e : evals) {
    if (!names.insert(e.name).second) throw ConfigError("duplicate eval dataset name " + e.name);
  }
  encoding.validate();
  lif.validate();
}

json SweepPlan::describe() const {
  json j;
  j["encoding"] = json{{"t_steps", encoding.t_steps}, {"dt", encoding.dt}};
  j["lif"] = to_json(lif);
  j["ss_values"] = sorted_unique(ss_values);
  j["ts_values"] = sorted_unique(ts_values);
  std::vector<std::string> op_names;
  for (auto op : ops) op_names.emplace_back(to_string(op));
  j["ops"] = op_names;
  j["seeds"] = seeds;
  j["combos"] = json::array();
  for (const auto& c : combos) {
    j["combos"].push_back(json{{"name", c.name}, {"norms", c.norms_id}, {"embeddings", c.embeddings_id}});
  }
  j["evals"] = json::array();
  for (const auto& e : evals) j["evals"].push_back(e.name);
  j["min_diversity"] = kMinDiversity;
  return j;
}

SweepResult run_sweep(const SweepPlan& plan, const std::vector<SweepCell>& completed, const SweepHooks& hooks) {
  plan.validate();
  std::map<CellKey, const SweepCell*> done;
  for (const auto& cell : completed) done.emplace(key_of(cell.combo, cell.point), &cell);

  const auto ss_values = sorted_unique(plan.ss_values);
  const auto ts_values = sorted_unique(plan.ts_values);
  std::vector<CooperateOp> ops = plan.ops;
  std::sort(ops.begin(), ops.end(), [](auto a, auto b) { return op_rank(a) < op_rank(b); });
  ops.erase(std::unique(ops.begin(), ops.end()), ops.end());

  SweepResult result;
  result.plan = plan.describe();

  for (const auto& input : plan.combos) {
    const PreparedCombo combo =
        prepare_combo(input.name, *input.norms, *input.embeddings, input.norms_id, input.embeddings_id);
    const std::set<std::string, std::less<>> tokens(combo.vocabulary.begin(), combo.vocabulary.end());

    std::vector<EvalDataset> usable;
    ComboBaselines baselines{combo.name, {}};
    for (const auto& eval : plan.evals) {
      usable.push_back(usable_pairs(tokens, eval));
      baselines.per_dataset.emplace(eval.name, evaluate_baselines(combo, usable.back()));
    }
    result.baselines.push_back(std::move(baselines));

    const std::size_t d_ms = combo.d_ms();
    const std::size_t t_steps = plan.encoding.t_steps;
    const std::size_t block_bits = d_ms * t_steps;
    std::vector<std::size_t> valid_ts;
    for (auto ts : ts_values) {
      if (ts > block_bits) {
        result.skipped.push_back(fmt::format("{}: ts={} exceeds d_ms*t_steps={}", combo.name, ts, block_bits));
        spdlog::warn("{}", result.skipped.back());
      } else {
        valid_ts.push_back(ts);
      }
    }

    std::map<std::uint64_t, ConceptRasters> raster_cache;
    const auto rasters_for = [&](std::uint64_t seed) -> ConceptRasters {
      EncodingConfig cfg = plan.encoding;
      cfg.rng_seed = seed;
      if (!plan.cache_rasters) return encode_vocabulary(combo, cfg, plan.lif, plan.workers);
      auto it = raster_cache.find(seed);
      if (it == raster_cache.end()) {
        it = raster_cache.emplace(seed, encode_vocabulary(combo, cfg, plan.lif, plan.workers)).first;
      }
      return it->second;
    };

    for (auto ss : ss_values) {
      for (auto op : ops) {
        const bool group_done = std::all_of(valid_ts.begin(), valid_ts.end(), [&](std::size_t ts) {
          return done.contains(key_of(combo.name, GridPoint{ss, ts, op}));
        });
        if (group_done) {
          for (auto ts : valid_ts) result.cells.push_back(*done.at(key_of(combo.name, GridPoint{ss, ts, op})));
          continue;
        }

        std::vector<SweepCell> group(valid_ts.size());
        for (std::size_t k = 0; k < valid_ts.size(); ++k) {
          group[k].combo = combo.name;
          group[k].point = GridPoint{ss, valid_ts[k], op};
          group[k].output_dims = expected_output_dims(combo.d_text(), d_ms, t_steps, ss, valid_ts[k]);
        }
        for (auto seed : plan.seeds) {
          const ConceptRasters rasters = rasters_for(seed);
          const auto unit = fuse_vocabulary(rasters, CooperateConfig{ss, 1, op}, plan.workers);
          for (std::size_t k = 0; k < valid_ts.size(); ++k) {
            const std::size_t ts = valid_ts[k];
            std::vector<BitVector> reduced;
            if (ts != 1) {
              reduced.resize(unit.size());
              parallel_for(unit.size(), plan.workers,
                           [&](std::size_t i) { reduced[i] = reduce_blocks(unit[i], block_bits, ts); });
            }
            const auto& codes = ts == 1 ? unit : reduced;
            if (hooks.on_codes) hooks.on_codes(combo, group[k].point, seed, codes);
            group[k].diversity_per_seed.push_back(diversity(codes));
            for (const auto& eval : usable) {
              const auto r = evaluate_codes(combo, codes, eval);
              auto& score = group[k].scores[eval.name];
              score.per_seed.push_back(r.spearman);
              score.n_pairs = r.n_pairs;
            }
          }
        }
        for (auto& cell : group) {
          cell.diversity = mean_of(cell.diversity_per_seed);
          for (auto& [name, score] : cell.scores) {
            score.mean = mean_of(score.per_seed);
            score.std_dev = sample_std(score.per_seed);
          }
          if (hooks.on_cell) hooks.on_cell(cell);
          result.cells.push_back(std::move(cell));
        }
        spdlog::info("{}: ss={} op={} done ({} ts values)", combo.name, ss, to_string(op), valid_ts.size());
      }
    }
  }

  std::stable_sort(result.cells.begin(), result.cells.end(), [](const SweepCell& a, const SweepCell& b) {
    return key_of(a.combo, a.point) < key_of(b.combo, b.point);
  });
  result.best = select_best(result.cells);
  return result;
}

std::vector<BestEntry> select_best(const std::vector<SweepCell>& cells, double min_diversity) {
  std::map<std::pair<std::string, std::string>, BestEntry> best;
  const auto better = [](const BestEntry& cand, const BestEntry& cur) {
    if (cand.spearman != cur.spearman) return cand.spearman > cur.spearman;
    if (cand.output_dims != cur.output_dims) return cand.output_dims < cur.output_dims;
    if (cand.point.ss != cur.point.ss) return cand.point.ss > cur.point.ss;
    if (cand.point.ts != cur.point.ts) return cand.point.ts > cur.point.ts;
    return op_rank(cand.point.op) < op_rank(cur.point.op);
  };
  for (const auto& cell : cells) {
    if (!(cell.diversity > min_diversity)) continue;
    for (const auto& [dataset, score] : cell.scores) {
      BestEntry cand{cell.combo, dataset, cell.point, cell.output_dims, score.mean, score.std_dev, cell.diversity};
      auto [it, inserted] = best.try_emplace({cell.combo, dataset}, cand);
      if (!inserted && better(cand, it->second)) it->second = cand;
    }
  }
  std::vector<BestEntry> out;
  for (auto& [key, entry] : best) out.push_back(std::move(entry));
  return out;
}

std::vector<DiversityPoint> diversity_surface(const SweepResult& result) {
  std::vector<DiversityPoint> surface;
  surface.reserve(result.cells.size());
  for (const auto& cell : result.cells) surface.push_back({cell.combo, cell.point, cell.diversity});
  return surface;
}

double non_increasing_fraction(const std::vector<DiversityPoint>& surface) {
  std::map<CellKey, double> lookup;
  std::map<std::string, std::set<std::size_t>> ss_axis;
  std::map<std::string, std::set<std::size_t>> ts_axis;
  std::set<std::pair<std::string, CooperateOp>> families;
  for (const auto& p : surface) {
    lookup[key_of(p.combo, p.point)] = p.diversity;
    ss_axis[p.combo].insert(p.point.ss);
    ts_axis[p.combo].insert(p.point.ts);
    families.insert({p.combo, p.point.op});
  }
  constexpr double kTolerance = 1e-12;
  std::size_t steps = 0;
  std::size_t good = 0;
  const auto check = [&](const std::string& combo, GridPoint from, GridPoint to) {
    const auto a = lookup.find(key_of(combo, from));
    const auto b = lookup.find(key_of(combo, to));
    if (a == lookup.end() || b == lookup.end()) return;
    ++steps;
    if (b->second <= a->second + kTolerance) ++good;
  };
  for (const auto& [combo, op] : families) {
    const std::vector<std::size_t> ss(ss_axis[combo].begin(), ss_axis[combo].end());
    const std::vector<std::size_t> ts(ts_axis[combo].begin(), ts_axis[combo].end());
    for (auto t : ts) {
      for (std::size_t i = 1; i < ss.size(); ++i) check(combo, {ss[i - 1], t, op}, {ss[i], t, op});
    }
    for (auto s : ss) {
      for (std::size_t i = 1; i < ts.size(); ++i) check(combo, {s, ts[i - 1], op}, {s, ts[i], op});
    }
  }
  return steps == 0 ? 1.0 : static_cast<double>(good) / static_cast<double>(steps);
}

BestRatioReport best_ratio_analysis(const SweepResult& result) {
  // (dataset, combo) -> (ss, ts) -> op -> rho
  std::map<std::pair<std::string, std::string>, std::map<std::pair<std::size_t, std::size_t>, std::map<int, double>>>
      grid;
  std::set<CooperateOp> ops;
  for (const auto& cell : result.cells) {
    ops.insert(cell.point.op);
    for (const auto& [dataset, score] : cell.scores) {
      grid[{dataset, cell.combo}][{cell.point.ss, cell.point.ts}][op_rank(cell.point.op)] = score.mean;
    }
  }
  if (grid.size() < 2) {
    throw ConfigError("best-ratio analysis needs at least two (dataset, combo) cells, got " +
                      std::to_string(grid.size()));
  }
  const auto op_from_rank = [](int r) {
    return r == 0 ? CooperateOp::and_op : (r == 1 ? CooperateOp::nor : CooperateOp::or_op);
  };

  BestRatioReport report;
  for (const auto& [key, points] : grid) {
    BestRatioCell cell;
    cell.dataset = key.first;
    cell.combo = key.second;
    for (auto op : ops) cell.ratio[op] = 0.0;
    for (const auto& [point, by_op] : points) {
      // by_op iterates in op-name order, so the first maximum is the tie winner
      int winner = by_op.begin()->first;
      double best_rho = by_op.begin()->second;
      for (const auto& [rank, rho] : by_op) {
        if (rho > best_rho) {
          best_rho = rho;
          winner = rank;
        }
      }
      cell.ratio[op_from_rank(winner)] += 1.0;
    }
    cell.grid_points = points.size();
    for (auto& [op, r] : cell.ratio) r /= static_cast<double>(cell.grid_points);
    for (const auto& b : result.baselines) {
      if (b.combo != cell.combo) continue;
      const auto it = b.per_dataset.find(cell.dataset);
      if (it != b.per_dataset.end()) {
        cell.closeness_difference = std::abs(it->second.text.spearman - it->second.multisensory.spearman);
      }
    }
    report.cells.push_back(std::move(cell));
  }

  std::set<std::string> datasets;
  for (const auto& c : report.cells) datasets.insert(c.dataset);
  std::vector<std::string> groups(datasets.begin(), datasets.end());
  groups.push_back("*");
  for (const auto& group : groups) {
    for (auto op : kAllOps) {
      if (!ops.contains(op)) continue;
      std::vector<double> ratio;
      std::vector<double> diff;
      for (const auto& c : report.cells) {
        if (group != "*" && c.dataset != group) continue;
        ratio.push_back(c.ratio.at(op));
        diff.push_back(c.closeness_difference);
      }
      report.correlations.push_back({group, op, pearson(ratio, diff), ratio.size()});
    }
  }
  return report;
}

json to_json(const ClosenessResult& r) { return closeness_json(r, true); }

ClosenessResult closeness_from_json(const json& j) {
  ClosenessResult r;
  r.dataset = j.at("dataset").get<std::string>();
  r.method = j.at("method").get<std::string>();
  r.config = j.value("config", std::string{});
  r.spearman = j.at("spearman").get<double>();
  r.n_pairs = j.at("n_pairs").get<std::size_t>();
  r.dropped_pairs = j.value("dropped_pairs", std::size_t{0});
  if (j.contains("diversity") && !j.at("diversity").is_null()) r.diversity = j.at("diversity").get<double>();
  return r;
}

json to_json(const SweepCell& cell, bool rounded) {
  const auto fix = [rounded](double x) { return rounded ? round9(x) : x; };
  json j{{"combo", cell.combo},
         {"ss", cell.point.ss},
         {"ts", cell.point.ts},
         {"op", std::string(to_string(cell.point.op))},
         {"output_dims", cell.output_dims},
         {"diversity", fix(cell.diversity)}};
  json per_seed = json::array();
  for (double d : cell.diversity_per_seed) per_seed.push_back(fix(d));
  j["diversity_per_seed"] = per_seed;
  json scores = json::object();
  for (const auto& [name, s] : cell.scores) {
    json seeds = json::array();
    for (double r : s.per_seed) seeds.push_back(fix(r));
    scores[name] = json{{"spearman", fix(s.mean)}, {"spearman_std", fix(s.std_dev)}, {"per_seed", seeds},
                        {"n_pairs", s.n_pairs}};
  }
  j["scores"] = scores;
  return j;
}

SweepCell cell_from_json(const json& j) {
  SweepCell cell;
  cell.combo = j.at("combo").get<std::string>();
  cell.point = GridPoint{j.at("ss").get<std::size_t>(), j.at("ts").get<std::size_t>(),
                         parse_op(j.at("op").get<std::string>())};
  cell.output_dims = j.at("output_dims").get<std::size_t>();
  cell.diversity = j.at("diversity").get<double>();
  cell.diversity_per_seed = j.at("diversity_per_seed").get<std::vector<double>>();
  for (const auto& [name, s] : j.at("scores").items()) {
    DatasetScore score;
    score.mean = s.at("spearman").get<double>();
    score.std_dev = s.at("spearman_std").get<double>();
    score.per_seed = s.at("per_seed").get<std::vector<double>>();
    score.n_pairs = s.at("n_pairs").get<std::size_t>();
    cell.scores.emplace(name, std::move(score));
  }
  return cell;
}

json to_json(const SweepResult& result) {
  json j;
  j["plan"] = result.plan;
  j["baselines"] = json::array();
  for (const auto& b : result.baselines) {
    for (const auto& [dataset, r] : b.per_dataset) {
      j["baselines"].push_back(json{{"combo", b.combo},
                                    {"dataset", dataset},
                                    {"Text", to_json(r.text)},
                                    {"Multisensory", to_json(r.multisensory)},
                                    {"Concatenate", to_json(r.concatenate)}});
    }
  }
  j["cells"] = json::array();
  for (const auto& c : result.cells) j["cells"].push_back(to_json(c, true));
  j["best"] = json::array();
  for (const auto& b : result.best) {
    j["best"].push_back(json{{"combo", b.combo},
                             {"dataset", b.dataset},
                             {"ss", b.point.ss},
                             {"ts", b.point.ts},
                             {"op", std::string(to_string(b.point.op))},
                             {"output_dims", b.output_dims},
                             {"spearman", round9(b.spearman)},
                             {"spearman_std", round9(b.spearman_std)},
                             {"diversity", round9(b.diversity)}});
  }
  j["skipped"] = result.skipped;
  return j;
}

SweepResult sweep_result_from_json(const json& j) {
  SweepResult result;
  result.plan = j.value("plan", json::object());
  for (const auto& b : j.at("baselines")) {
    const auto combo = b.at("combo").get<std::string>();
    auto it = std::find_if(result.baselines.begin(), result.baselines.end(),
                           [&](const ComboBaselines& c) { return c.combo == combo; });
    if (it == result.baselines.end()) {
      result.baselines.push_back({combo, {}});
      it = std::prev(result.baselines.end());
    }
    it->per_dataset.emplace(b.at("dataset").get<std::string>(),
                            BaselineResults{closeness_from_json(b.at("Text")), closeness_from_json(b.at("Multisensory")),
                                            closeness_from_json(b.at("Concatenate"))});
  }
  for (const auto& c : j.at("cells")) result.cells.push_back(cell_from_json(c));
  for (const auto& b : j.at("best")) {
    result.best.push_back(BestEntry{b.at("combo").get<std::string>(), b.at("dataset").get<std::string>(),
                                    GridPoint{b.at("ss").get<std::size_t>(), b.at("ts").get<std::size_t>(),
                                              parse_op(b.at("op").get<std::string>())},
                                    b.at("output_dims").get<std::size_t>(), b.at("spearman").get<double>(),
                                    b.at("spearman_std").get<double>(), b.at("diversity").get<double>()});
  }
  result.skipped = j.value("skipped", std::vector<std::string>{});
  return result;
}

}  // namespace spikefuse
