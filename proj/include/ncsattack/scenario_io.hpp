#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "ncsattack/attack.hpp"
#include "ncsattack/laprec.hpp"
#include "ncsattack/ncs.hpp"

namespace ncsattack::harness {

/// Everything a run needs: the plant plus the attacker's settings.
struct Experiment {
  ncs::Scenario scenario;
  attack::AttackConfig attack;
  int dmd_width = dmd::kDefaultWidth;
  double svd_tol = dmd::kDefaultSvdTol;
  int reach_horizon = 1;
  int reach_directions = reach::kDefaultDirections;
  laprec::RecoveryOptions recovery;
  double initial_lo = -10.0;
  double initial_hi = 10.0;
  /// False when the initial states are drawn from rng_seed.
  bool explicit_initial_states = false;

  /// Throws InvalidInput naming the offending key.
  void validate() const;
  /// Sets rng_seed and, unless the states were given explicitly, redraws them.
  void reseed(std::uint64_t seed);
};

/// Five UAVs on the path graph 1-2, 1-3, 2-4, 3-5 (1-based), dt = 0.2 s,
/// 500 steps, default gain, rho = 0.05 on an 8-sided polygon, attacks from
/// step 51, DoS at step 100.
Experiment default_experiment(std::uint64_t seed = 0);

/// `key = value` lines over the defaults; '#' starts a comment. Unknown
/// keys and malformed values raise InvalidInput naming the key.
Experiment parse_experiment(std::string_view text);

/// Throws IoError when the file cannot be read.
Experiment load_experiment(const std::filesystem::path& path);

/// Text that parse_experiment maps back to the same experiment.
std::string format_experiment(const Experiment& e);

}  // namespace ncsattack::harness
