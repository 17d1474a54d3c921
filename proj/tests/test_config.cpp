#include <gtest/gtest.h>

#include "spikefuse/config.hpp"
#include "spikefuse/error.hpp"

using namespace spikefuse;

namespace {

FusionConfig sample() {
  FusionConfig c;
  c.encoding = EncodingConfig{500, 0.5, 7};
  c.lif.tau_m = 12.5;
  c.cooperate = CooperateConfig{10, 50, CooperateOp::nor};
  c.norms_id = "LC823";
  c.embeddings_id = "glove";
  c.eval_ids = {"SimLex999", "MEN"};
  return c;
}

}  // namespace

TEST(FusionConfig, JsonRoundTrip) {
  const auto c = sample();
  EXPECT_EQ(FusionConfig::from_json(c.to_json()), c);
  EXPECT_EQ(FusionConfig::from_json(nlohmann::json::parse(c.to_json().dump())), c);
}

TEST(FusionConfig, MissingKeysTakeDefaults) {
  EXPECT_EQ(FusionConfig::from_json(nlohmann::json::object()), FusionConfig{});
}

TEST(FusionConfig, BadValuesAreConfigErrors) {
  auto j = sample().to_json();
  j["cooperate"]["op"] = "XOR";
  EXPECT_THROW(FusionConfig::from_json(j), ConfigError);
  j = sample().to_json();
  j["encoding"]["t_steps"] = "many";
  EXPECT_THROW(FusionConfig::from_json(j), ConfigError);
}

TEST(FusionConfig, FingerprintIsStableAndSensitive) {
  const auto c = sample();
  EXPECT_EQ(c.fingerprint(), sample().fingerprint());
  EXPECT_EQ(c.fingerprint(), FusionConfig::from_json(c.to_json()).fingerprint());

  auto d = c;
  d.cooperate.ts = 60;
  EXPECT_NE(d.fingerprint(), c.fingerprint());
  d = c;
  d.encoding.rng_seed = 8;
  EXPECT_NE(d.fingerprint(), c.fingerprint());
  d = c;
  d.lif.synaptic_gain = 0.25;
  EXPECT_NE(d.fingerprint(), c.fingerprint());
  d = c;
  d.eval_ids.pop_back();
  EXPECT_NE(d.fingerprint(), c.fingerprint());
}

TEST(FusionConfig, SerializationIsCanonical) {
  // key order is sorted regardless of construction order
  const auto dumped = sample().to_json().dump();
  EXPECT_LT(dumped.find("\"cooperate\""), dumped.find("\"datasets\""));
  EXPECT_LT(dumped.find("\"datasets\""), dumped.find("\"encoding\""));
  EXPECT_NE(dumped.find("\"dt\":0.5"), std::string::npos);
  EXPECT_NE(dumped.find("\"op\":\"NOR\""), std::string::npos);
}

TEST(Round9, NinePlaces) {
  EXPECT_DOUBLE_EQ(round9(0.1234567894), 0.123456789);
  EXPECT_DOUBLE_EQ(round9(0.1234567896), 0.12345679);
  EXPECT_DOUBLE_EQ(round9(-0.5), -0.5);
}
