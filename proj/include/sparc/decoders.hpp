#pragma once

#include <Eigen/Dense>

#include "sparc/channel.hpp"
#include "sparc/codec.hpp"
#include "sparc/dictionary.hpp"

namespace sparc {

struct DecoderConfig {
  double sigma_h_sq = 1.0;
  double sigma_v_sq = 1.0;
  int paths = 1;                // parallel paths for pmlmp / bomp / mbomp
  bool theorem1_mode = false;   // fix beta = 1, gamma = 0; permits sigma_v_sq = 0
};

struct DecodeResult {
  SupportSet support;  // section order
  double metric = 0.0; // full ML metric of the decoded codeword
  int path_id = 0;     // winning path (0 when single-path)
};

// beta_s * sum_i |<y_i, s>|^2 - D * gamma_s with
//   beta_s  = (sigma_h^2 / sigma_v^2) / (sigma_v^2 + sigma_h^2 ||s||^2)
//   gamma_s = log(sigma_h^2 ||s||^2 / sigma_v^2 + 1)
// theorem1_mode drops beta/gamma (plain correlation energy).
double ml_metric(const Observation& obs, const Eigen::VectorXcd& s, const DecoderConfig& cfg);

// Exact ML over every codeword; guarded to product-of-section-sizes <= 1e6.
// Ties resolve to the lexicographically smallest support.
DecodeResult ml_bruteforce(const Observation& obs, const Dictionary& dict,
                           const DecoderConfig& cfg);

// Greedy successive-combining decoder: K iterations, iteration k maximizes
// the partial ML metric of (already-chosen columns + candidate) with effective
// noise sigma_v^2 + sigma_h^2 (K - k) / N, candidates drawn from sections not
// yet used. No cancellation step.
DecodeResult mlmp(const Observation& obs, const Dictionary& dict, const DecoderConfig& cfg);

// mlmp with the first detected column forced (building block of the parallel
// search); iteration numbering continues at k = 2.
DecodeResult mlmp_seeded(const Observation& obs, const Dictionary& dict,
                         const DecoderConfig& cfg, int first_column);

// Parallel-MLMP: seed P paths with the top-P first-iteration correlations
// q(m) = sum_i |<y_i, a_m>|^2, run MLMP per seed, keep the codeword with the
// largest full ML metric (ties: lower path index).
DecodeResult pmlmp(const Observation& obs, const Dictionary& dict, const DecoderConfig& cfg);

// Successive-cancellation baselines. Both honor the section-exclusion rule
// and the same top-P first-column seeding as pmlmp (cfg.paths > 1).
// bomp: least-squares coefficients per detected column, residual = projection
// error. mbomp: single joint gain per antenna h_i = <y_i, u>/||u||^2 over the
// running column sum u.
DecodeResult bomp(const Observation& obs, const Dictionary& dict, const DecoderConfig& cfg);
DecodeResult mbomp(const Observation& obs, const Dictionary& dict, const DecoderConfig& cfg);

}  // namespace sparc
