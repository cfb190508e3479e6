#include "recip/experiment.hpp"

#include <exception>

#include "recip/errors.hpp"
#include "recip/omniscient.hpp"

namespace recip {

namespace {

BatchResult batch(const PreferenceMatrices& prefs, const BatchSpec& spec, bool parallel) {
  if (spec.policies.empty()) throw InputError("at least one policy is required");
  if (spec.seeds.empty()) throw InputError("at least one seed is required");
  if (spec.horizon < 1) throw InputError("T must be at least 1");
  for (const auto& name : spec.policies) {
    const auto it = spec.params.find(name);
    make_policy(name, it == spec.params.end() ? PolicyParams{} : it->second);
  }

  const std::size_t np = spec.policies.size(), ns = spec.seeds.size();
  BatchResult out;
  out.runs.assign(np, std::vector<RunResult>(ns));
  std::vector<std::exception_ptr> errors(np * ns);
  const RunOptions options{spec.record_trace, spec.curve_stride};
  const auto jobs = static_cast<std::ptrdiff_t>(np * ns);

#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (std::ptrdiff_t j = 0; j < jobs; ++j) {
    const std::size_t p = static_cast<std::size_t>(j) / ns, s = static_cast<std::size_t>(j) % ns;
    try {
      const auto it = spec.params.find(spec.policies[p]);
      auto policy = make_policy(spec.policies[p], it == spec.params.end() ? PolicyParams{} : it->second);
      out.runs[p][s] = run_protocol(prefs, *policy, spec.horizon, spec.seeds[s], options);
    } catch (...) {
      errors[static_cast<std::size_t>(j)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  const MatchingGraph graph = build_matching_graph(prefs);
  out.total_matches = graph.match_count();
  out.delta = delta_overload(graph, spec.horizon);
  out.optimal.resize(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    const auto& first = out.runs[0][s];
    ArrivalCounts counts{std::vector<std::uint64_t>(first.boy_arrivals.begin(), first.boy_arrivals.end()),
                         std::vector<std::uint64_t>(first.girl_arrivals.begin(), first.girl_arrivals.end())};
    out.optimal[s] = optimal_matches(graph, counts);
    for (std::size_t p = 0; p < np; ++p) {
      const auto& r = out.runs[p][s];
      if (r.boy_arrivals != first.boy_arrivals || r.girl_arrivals != first.girl_arrivals) {
        throw AssertionFailure("arrival sequence differs between policies for seed " + std::to_string(spec.seeds[s]));
      }
      if (r.final_matches() > out.optimal[s]) {
        throw AssertionFailure(r.policy_name + " uncovered " + std::to_string(r.final_matches()) +
                               " matches, above the yardstick " + std::to_string(out.optimal[s]) + " for seed " +
                               std::to_string(spec.seeds[s]));
      }
    }
  }
  return out;
}

}  // namespace

BatchResult run_batch(const PreferenceMatrices& prefs, const BatchSpec& spec) { return batch(prefs, spec, true); }

BatchResult run_batch_serial(const PreferenceMatrices& prefs, const BatchSpec& spec) {
  return batch(prefs, spec, false);
}

}  // namespace recip
