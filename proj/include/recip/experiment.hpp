#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "recip/core_model.hpp"
#include "recip/matchmakers.hpp"
#include "recip/protocol.hpp"

namespace recip {

struct BatchSpec {
  std::vector<std::string> policies;
  std::map<std::string, PolicyParams> params;  // by policy name; missing means defaults
  std::uint64_t horizon = 0;
  std::vector<std::uint64_t> seeds;
  std::uint64_t curve_stride = 1;
  bool record_trace = false;
};

struct BatchResult {
  std::vector<std::vector<RunResult>> runs;  // [policy][seed index], in spec order
  std::vector<std::uint64_t> optimal;        // M*_T per seed index
  Rational delta;                            // Delta(M, T)
  std::size_t total_matches = 0;             // M
};

// Every (policy, seed) run is independent; the parallel version spreads them over OpenMP threads.
// Both throw AssertionFailure if a run beats the yardstick on its own trace.
BatchResult run_batch(const PreferenceMatrices& prefs, const BatchSpec& spec);
BatchResult run_batch_serial(const PreferenceMatrices& prefs, const BatchSpec& spec);

}  // namespace recip
