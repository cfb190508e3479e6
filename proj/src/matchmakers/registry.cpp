#include "recip/errors.hpp"
#include "recip/matchmakers.hpp"

namespace recip {

const std::vector<std::string>& policy_names() {
  static const std::vector<std::string> names = {"uromm", "oomm", "smile", "ismile"};
  return names;
}

std::unique_ptr<MatchmakerPolicy> make_policy(const std::string& name, const PolicyParams& params) {
  if (params.gamma && !(*params.gamma > 0.0)) throw InputError("gamma must be positive");
  if (params.s && *params.s < 1) throw InputError("S must be at least 1");
  if (params.tolerance && !(*params.tolerance >= 0.0 && *params.tolerance <= 1.0)) {
    throw InputError("tolerance must lie in [0, 1]");
  }
  if (name == "uromm") return std::make_unique<UrommPolicy>();
  if (name == "oomm") return std::make_unique<OommPolicy>();
  if (name == "smile") return std::make_unique<SmilePolicy>(SmileParams{params.gamma.value_or(1.0), params.s, params.tolerance.value_or(0.0)});
  if (name == "ismile") return std::make_unique<IsmilePolicy>(IsmileParams{params.s, params.tolerance});
  throw InputError("unknown policy '" + name + "'");
}

}  // namespace recip
