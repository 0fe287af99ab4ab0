#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "metapop/dynamics.hpp"
#include "metapop/equilibria.hpp"
#include "metapop/model.hpp"

namespace metapop {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One JSON document describing a run: exactly one of the physical/normalized
// parameter blocks (selected by "form"), the reaction, coupling, integrator
// and solver settings, and the sampling seed. Unknown keys are rejected with
// their path.
struct RunConfig {
  bool physical_form = true;
  PatchParams physical;
  NormalizedParams normalized;
  ReactionKind reaction = ReactionKind::cubic_allee();
  Coupling coupling = Coupling::Standard;
  IntegratorOptions integrator;
  SolverOptions solver;
  std::uint64_t seed = 1;

  // Normalized parameters regardless of the input form.
  NormalizedParams as_normalized() const {
    return physical_form ? normalize(physical) : normalized;
  }
};

RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

}  // namespace metapop
