#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sparc/dictionary.hpp"
#include "sparc/samp.hpp"

namespace sparc {

struct DecoderSpec {
  std::string kind;  // mlmp | bomp | mbomp | samp
  std::string label;
  int paths = 1;          // greedy decoders
  bool online_se = false; // samp
  int se_draws = 2000;    // samp offline SE Monte Carlo size
  int t_max = 25;
  double rel_tol = 1e-3;
};

struct SimConfig {
  int schema_version = 1;
  std::string config_id = "run";
  std::string dict_source;  // "prime:P" or "file:PATH"
  int n_sections = 1;
  int n_antennas = 1;
  double sigma_h_sq = -1.0;  // < 0 means the 1/D default
  std::vector<double> ebn0_grid_db;
  long max_trials = 10000;
  long min_errors = 200;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = hardware
  std::vector<DecoderSpec> decoders;

  double sigma_h() const { return sigma_h_sq < 0 ? 1.0 / n_antennas : sigma_h_sq; }
};

SimConfig parse_sim_config(std::istream& in, const std::string& origin = "<stream>");
SimConfig load_sim_config(const std::string& path);
void validate(const SimConfig& cfg);

Dictionary build_dictionary(const SimConfig& cfg);

struct BlerRecord {
  std::string config_id;
  std::string decoder;
  double ebn0_db = 0.0;
  long trials = 0;
  long block_errors = 0;
  double bler = 0.0;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
  bool low_confidence = false;  // fewer than 10 block errors
};

// Paired Monte Carlo sweep: at a grid point every decoder sees the same
// (message, channel, noise) for trial t, generated from a counter RNG keyed
// by (seed, point, trial) so replay is bit-exact regardless of thread count.
// A point stops once every decoder has min_errors block errors (checked in
// trial order) or at max_trials.
std::vector<BlerRecord> run_bler_sweep(const SimConfig& cfg);

// CSV with fixed column order; floats carry 10 significant digits.
std::string bler_csv(const std::vector<BlerRecord>& records);

struct SeTracePoint {
  int t = 0;
  double tau_sq_predicted = 0.0;
  double tau_sq_empirical = 0.0;
};

// Offline SE prediction vs. empirical sigma_v^2 + MSE/(ND) averaged over
// decode trials at one Eb/N0 point. Uses the first samp decoder spec in the
// config (or defaults when none is present).
std::vector<SeTracePoint> run_se_trace(const SimConfig& cfg, double ebn0_db, long trials);
std::string se_trace_csv(const std::vector<SeTracePoint>& trace);

struct Theorem1Row {
  int p = 0;
  int k = 0;
  long trials = 0;
  long failures = 0;
};

// Noiseless theorem1-mode MLMP over every K up to floor((1+mu)/(2mu)),
// mu = 1/sqrt(p). All rows must come back with zero failures.
std::vector<Theorem1Row> run_theorem1_check(const std::vector<int>& primes, long trials,
                                            int n_antennas, std::uint64_t seed,
                                            int threads = 0);
std::string theorem1_csv(const std::vector<Theorem1Row>& rows);

// 95% (z = 1.96) score interval for a binomial proportion.
std::pair<double, double> wilson_interval(long errors, long trials, double z = 1.96);

int cli_main(int argc, char** argv);

}  // namespace sparc
