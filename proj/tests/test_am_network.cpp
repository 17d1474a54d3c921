#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "spikefuse/am_network.hpp"
#include "spikefuse/error.hpp"
#include "test_support.hpp"

using namespace spikefuse;

namespace {

NormDataset make_norms(const std::vector<std::string>& modalities, const std::vector<std::vector<double>>& rows) {
  NormDataset d;
  d.modality_names = modalities;
  for (std::size_t i = 0; i < rows.size(); ++i) d.vectors.add({"c" + std::to_string(i), rows[i], VectorKind::multisensory});
  return d;
}

ModalityCorrelation uniform_weights(std::size_t n, double w) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("m" + std::to_string(i));
  std::vector<double> m(n * n, w);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1.0;
  return ModalityCorrelation(labels, m);
}

/// Straight transcription of the update rule, one neuron row at a time.
testkit::Matrix reference_lif(const SpikeRaster& input, const ModalityCorrelation& w, const LifParams& p) {
  const std::size_t n = input.rows();
  const std::size_t steps = input.t_steps();
  testkit::Matrix out(n, std::vector<int>(steps, 0));
  std::vector<double> v(n, p.v_rest);
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      double drive = p.input_gain * (input.at(i, t) ? 1 : 0);
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i && t > 0) drive += p.synaptic_gain * w.at(i, j) * out[j][t - 1];
      }
      v[i] += (-(v[i] - p.v_rest) + drive) / p.tau_m;
      v[i] = std::max(v[i], p.v_rest - p.floor_factor * (p.v_threshold - p.v_rest));
      if (v[i] >= p.v_threshold) {
        out[i][t] = 1;
        v[i] = p.v_reset;
      }
    }
  }
  return out;
}

testkit::Matrix to_matrix(const SpikeRaster& r) {
  testkit::Matrix m(r.rows(), std::vector<int>(r.t_steps()));
  for (std::size_t i = 0; i < r.rows(); ++i) {
    for (std::size_t t = 0; t < r.t_steps(); ++t) m[i][t] = r.at(i, t) ? 1 : 0;
  }
  return m;
}

}  // namespace

TEST(Correlation, IdenticalAndNegatedColumns) {
  const auto norms = make_norms({"A", "B", "C"}, {{1, 1, -1}, {2, 2, -2}, {4, 4, -4}, {3, 3, -3}});
  const auto c = compute_modality_correlations(norms);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_NEAR(c.at(0, 1), 1.0, 1e-12);
  EXPECT_NEAR(c.at(0, 2), -1.0, 1e-12);
  EXPECT_EQ(c.at(1, 0), c.at(0, 1));
  EXPECT_EQ(c.labels(), (std::vector<std::string>{"A", "B", "C"}));
}

TEST(Correlation, MatchesTextbookPearsonOnToyNorms) {
  const auto norms = load_norms(testkit::data_dir() / "toy_norms.csv", NormFormat::csv);
  const auto c = compute_modality_correlations(norms);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      if (i == j) continue;
      std::vector<double> x;
      std::vector<double> y;
      for (const auto& v : norms.vectors) {
        x.push_back(v.values[i]);
        y.push_back(v.values[j]);
      }
      EXPECT_NEAR(c.at(i, j), testkit::textbook_pearson(x, y), 1e-12) << i << "," << j;
    }
  }
}

TEST(Correlation, ConstantColumnGivesZero) {
  const auto c = compute_modality_correlations(make_norms({"A", "B"}, {{1, 5}, {2, 5}, {3, 5}}));
  EXPECT_EQ(c.at(0, 1), 0.0);
}

TEST(Correlation, NeedsThreeConcepts) {
  EXPECT_THROW(compute_modality_correlations(make_norms({"A", "B"}, {{1, 2}, {2, 1}})), ConfigError);
}

TEST(Correlation, MatrixValidation) {
  EXPECT_THROW(ModalityCorrelation({"a", "b"}, {1, 0.5, 0.4, 1}), ConfigError);
  EXPECT_THROW(ModalityCorrelation({"a", "b"}, {1, 1.5, 1.5, 1}), ConfigError);
  EXPECT_THROW(ModalityCorrelation({"a", "b"}, {1, 0.5}), ConfigError);
  EXPECT_NO_THROW(ModalityCorrelation({"a", "b"}, {1, -0.5, -0.5, 1}));
}

TEST(LifParams, Validation) {
  EXPECT_NO_THROW(LifParams{}.validate());
  LifParams p;
  p.tau_m = 0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = LifParams{};
  p.v_reset = 2.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = LifParams{};
  p.input_gain = std::numeric_limits<double>::infinity();
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(RunAm, ZeroInputIsSilent) {
  const auto corr = uniform_weights(5, 0.9);
  LifParams strong;
  strong.synaptic_gain = 50;
  const auto out = run_am({"quiet", std::vector<double>(5, 0.0), VectorKind::multisensory}, corr, strong,
                          EncodingConfig{500, 1.0, 1});
  EXPECT_EQ(out.rows(), 5u);
  EXPECT_EQ(out.t_steps(), 500u);
  EXPECT_EQ(out.count(), 0u);
}

TEST(RunAm, MatchesReferenceSimulation) {
  const auto norms = load_norms(testkit::data_dir() / "toy_norms.csv", NormFormat::csv);
  const auto corr = compute_modality_correlations(norms);
  const auto normalized = min_max_normalize(norms);
  LifParams p;
  p.input_gain = 4.0;
  p.synaptic_gain = 2.0;
  const EncodingConfig cfg{400, 1.0, 8};
  std::vector<std::string> labels;
  for (const auto& l : corr.labels()) labels.push_back("ms:" + l);
  for (const auto& concept_vector : normalized.vectors) {
    const auto input = poisson_encode(concept_vector.values, cfg, concept_vector.name, labels);
    const auto out = run_am(concept_vector, corr, p, cfg);
    EXPECT_EQ(to_matrix(out), reference_lif(input, corr, p)) << concept_vector.name;
  }
}

TEST(RunAm, SingleModalityIsPlainLif) {
  const ModalityCorrelation one({"A"}, {1.0});
  LifParams p;
  p.input_gain = 6.0;
  const EncodingConfig cfg{1000, 1.0, 4};
  const ConceptVector cv{"solo", {0.7}, VectorKind::multisensory};
  const std::vector<std::string> labels{"ms:A"};
  const auto input = poisson_encode(cv.values, cfg, cv.name, labels);
  const auto out = run_am(cv, one, p, cfg);
  EXPECT_EQ(to_matrix(out), reference_lif(input, one, p));
  EXPECT_GT(out.count(), 0u);
}

TEST(RunAm, ExcitatoryCouplingRaisesSilentNeuronRate) {
  LifParams p;
  p.input_gain = 15.0;
  p.synaptic_gain = 15.0;
  const ConceptVector cv{"pair", {0.6, 0.0}, VectorKind::multisensory};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const EncodingConfig cfg{200, 1.0, seed};
    const auto coupled = run_am(cv, uniform_weights(2, 1.0), p, cfg);
    const auto isolated = run_am(cv, uniform_weights(2, 0.0), p, cfg);
    EXPECT_GT(coupled.row_count(1), isolated.row_count(1)) << seed;
  }
}

TEST(RunAm, NoCouplingMeansIndependentRows) {
  LifParams p;
  p.input_gain = 5.0;
  p.synaptic_gain = 3.0;
  const EncodingConfig cfg{500, 1.0, 12};
  const ConceptVector cv{"iso", {0.2, 0.5, 0.9}, VectorKind::multisensory};
  const auto joint = run_am(cv, uniform_weights(3, 0.0), p, cfg);
  const std::vector<std::string> names{"m0", "m1", "m2"};
  for (std::size_t i = 0; i < 3; ++i) {
    const ModalityCorrelation single({names[i]}, {1.0});
    const auto alone = run_am({"iso", {cv.values[i]}, VectorKind::multisensory}, single, p, cfg);
    for (std::size_t t = 0; t < cfg.t_steps; ++t) ASSERT_EQ(joint.at(i, t), alone.at(0, t)) << i << "," << t;
  }
}

TEST(RunAm, PermutationEquivariance) {
  LifParams p;
  p.input_gain = 4.0;
  p.synaptic_gain = 2.0;
  const EncodingConfig cfg{300, 1.0, 21};
  const ModalityCorrelation abc({"A", "B", "C"}, {1, 0.6, -0.3, 0.6, 1, 0.2, -0.3, 0.2, 1});
  // order (C, A, B)
  const ModalityCorrelation cab({"C", "A", "B"}, {1, -0.3, 0.2, -0.3, 1, 0.6, 0.2, 0.6, 1});
  const auto x = run_am({"k", {0.9, 0.4, 0.7}, VectorKind::multisensory}, abc, p, cfg);
  const auto y = run_am({"k", {0.7, 0.9, 0.4}, VectorKind::multisensory}, cab, p, cfg);
  const std::size_t perm[] = {2, 0, 1};  // row r of y is row perm[r] of x
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t t = 0; t < cfg.t_steps; ++t) ASSERT_EQ(y.at(r, t), x.at(perm[r], t));
  }
}

TEST(RunAm, DeterministicAndShapeChecked) {
  const auto corr = uniform_weights(3, 0.5);
  const ConceptVector cv{"d", {0.3, 0.6, 0.9}, VectorKind::multisensory};
  const EncodingConfig cfg{100, 1.0, 2};
  EXPECT_EQ(run_am(cv, corr, LifParams{}, cfg), run_am(cv, corr, LifParams{}, cfg));
  EXPECT_THROW(run_am({"bad", {0.1, 0.2}, VectorKind::multisensory}, corr, LifParams{}, cfg), ConfigError);
}

TEST(RunAm, InhibitionIsFloored) {
  // Strong inhibition from an always-firing neighbour cannot push the
  // potential below the floor, so the neuron recovers quickly once released.
  LifParams p;
  p.input_gain = 20.0;
  p.synaptic_gain = 100.0;
  const ModalityCorrelation w({"A", "B"}, {1, -1, -1, 1});
  SpikeRaster input(2, 60);
  for (std::size_t t = 0; t < 30; ++t) input.set(0, t);
  for (std::size_t t = 0; t < 60; ++t) input.set(1, t);
  const auto out = simulate_lif_network(input, w, p);
  EXPECT_EQ(to_matrix(out), reference_lif(input, w, p));
  // neuron B fires again within a few steps after A goes quiet
  bool fired_late = false;
  for (std::size_t t = 31; t < 60; ++t) fired_late = fired_late || out.at(1, t);
  EXPECT_TRUE(fired_late);
}
