#include <gtest/gtest.h>

#include "pulsesim/config.hpp"

using namespace pulsesim;

TEST(Config, SpinChainWithScalarT2) {
  const DeviceConfig cfg =
      parse_device_config(R"({"model": "spinchain", "num_qubits": 3, "params": {"sx": 0.25}, "t2": 30})");
  EXPECT_EQ(cfg.model, "spinchain");
  ASSERT_EQ(cfg.decoherence.t2.size(), 3u);
  EXPECT_EQ(*cfg.decoherence.t2[2], 30.0);
  EXPECT_TRUE(cfg.decoherence.t1.empty());
  Processor p = make_processor(cfg);
  EXPECT_EQ(p.num_qubits(), 3);
  EXPECT_TRUE(p.has_noise());
  EXPECT_EQ(p.model().param("sx"), 0.25);
}

TEST(Config, ListTimesWithNull) {
  const DeviceConfig cfg = parse_device_config(R"({"model": "scqubits", "num_qubits": 2, "t1": [50, null]})");
  ASSERT_EQ(cfg.decoherence.t1.size(), 2u);
  EXPECT_TRUE(cfg.decoherence.t1[0]);
  EXPECT_FALSE(cfg.decoherence.t1[1]);
  Processor p = make_processor(cfg);
  p.load_circuit(QubitCircuit(2));
  EXPECT_EQ(p.system().c_ops.size(), 1u);
}

TEST(Config, CavityAndRing) {
  auto m = make_model(parse_device_config(R"({"model": "cavityqed", "num_qubits": 2, "params": {"levels": 4}})"));
  EXPECT_EQ(m->dims().total(), 16);
  auto ring = make_model(parse_device_config(R"({"model": "spinchain", "num_qubits": 4, "boundary": "closed"})"));
  EXPECT_TRUE(ring->has_control("g3"));
  EXPECT_EQ(ring->topology(), Topology::Ring);
}

TEST(Config, Errors) {
  const char* bad[] = {
      "not json",
      "[]",
      R"({"num_qubits": 2})",
      R"({"model": "trapped_ion", "num_qubits": 2})",
      R"({"model": "spinchain"})",
      R"({"model": "spinchain", "num_qubits": 0})",
      R"({"model": "spinchain", "num_qubits": 2, "params": {"alpha": 1}})",
      R"({"model": "spinchain", "num_qubits": 2, "params": {"sx": "fast"}})",
      R"({"model": "spinchain", "num_qubits": 2, "t1": [1]})",
      R"({"model": "spinchain", "num_qubits": 2, "t1": -1})",
      R"({"model": "spinchain", "num_qubits": 2, "t1": 10, "t2": 30})",
      R"({"model": "spinchain", "num_qubits": 2, "extra": 1})",
      R"({"model": "scqubits", "num_qubits": 2, "boundary": "closed"})",
      R"({"model": "spinchain", "num_qubits": 2, "interpolation": "linear"})",
  };
  for (const char* text : bad) EXPECT_THROW(parse_device_config(text), ConfigError) << text;
  EXPECT_THROW(make_model(parse_device_config(R"({"model": "spinchain", "num_qubits": 2, "params": {"sx": -1}})")),
               ConfigError);
  EXPECT_THROW(make_model(parse_device_config(R"({"model": "scqubits", "num_qubits": 2, "params": {"levels": 2.5}})")),
               ConfigError);
  EXPECT_THROW(load_device_config("/nonexistent/device.json"), ConfigError);
}

TEST(Config, NormalizedJsonRoundTrip) {
  const DeviceConfig cfg = parse_device_config(
      R"({"model": "spinchain", "num_qubits": 2, "params": {"sz": 2}, "t1": [40, null], "interpolation": "cubic"})");
  const std::string text = device_config_to_json(cfg);
  const DeviceConfig again = parse_device_config(text);
  EXPECT_EQ(device_config_to_json(again), text);
  EXPECT_EQ(again.interp, Interpolation::Cubic);
}
