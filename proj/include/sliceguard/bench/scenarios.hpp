#pragma once

#include <optional>

#include "sliceguard/bench/report.hpp"

namespace sliceguard::bench {

struct UnknownScenario : std::runtime_error {
  explicit UnknownScenario(const std::string& what) : std::runtime_error(what) {}
};

struct ScenarioOverrides {
  uint64_t seed = 1;
  std::optional<double> throughput_duration_s;
  std::optional<int> latency_count;
  std::optional<int> srt_attaches;
};

const std::vector<std::string>& scenario_names();

// Instantiates per the named recipe, runs the probe battery (S1-C, S1-U,
// S6a latency+throughput; Uu user plane; SRT), scans taps for identifier
// needles, evaluates KPIs, terminates, and returns the report.
BenchReport run_scenario(const std::string& name,
                         const ScenarioOverrides& overrides = {});

}  // namespace sliceguard::bench
