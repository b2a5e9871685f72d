#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "sparc/channel.hpp"
#include "sparc/decoders.hpp"
#include "sparc/dictionary.hpp"
#include "sparc/rng.hpp"

namespace sparc {

// State-evolution schedule driving the AMP iterations. Offline: a
// pre-computed tau_t^2 list whose length fixes the iteration count. Online:
// tau is re-estimated from the residual every iteration and the recursion
// stops at the tau fixed point or t_max.
struct SeSchedule {
  enum class Mode { offline, online };
  Mode mode = Mode::online;
  std::vector<double> taus;  // offline: tau_0^2 .. tau_T^2
  int t_max = 25;
  double rel_tol = 1e-3;
};

struct SeParams {
  double sigma_h_sq = 1.0;
  double sigma_v_sq = 1.0;
  int n_antennas = 1;
  int t_max = 25;
  double rel_tol = 1e-3;
  int threads = 0;  // 0 = hardware
};

// AMP working set, one per decode.
struct AmpState {
  Eigen::MatrixXcd G_hat;    // active x D estimate of G = x h^T
  Eigen::MatrixXcd Z;        // N x D residual
  Eigen::MatrixXcd B;        // active x D effective observation
  Eigen::MatrixXcd onsager;  // D x D averaged denoiser Jacobian
  double tau_sq = 0.0;
  int t = 0;
};

// Section-wise MMSE denoiser: row k gets posterior weight
// softmax_{section}(sigma_h^2 ||B_l||^2 / (tau^2 (tau^2 + sigma_h^2))) times
// the linear shrinkage sigma_h^2/(tau^2 + sigma_h^2). Softmax runs in the log
// domain with per-section max subtraction. Rows outside any section are
// zeroed. B may carry one row per column or per active column.
Eigen::MatrixXcd mmse_denoise(const Eigen::MatrixXcd& B, double tau_sq,
                              const Dictionary& dict, double sigma_h_sq);

// Onsager correction (L/N) * Z_prev * <<J>> where <<J>> averages the per-row
// D x D denoiser Jacobians at B_prev. Empty Z_prev (iteration 0) gives zeros.
Eigen::MatrixXcd onsager_term(const Eigen::MatrixXcd& Z_prev, const Eigen::MatrixXcd& B_prev,
                              double tau_prev_sq, const Dictionary& dict, double sigma_h_sq);

// <<J>> alone: (i, j) entry of row k's Jacobian is d eta(B_ki)/d B_kj in the
// Wirtinger sense (conjugate coordinates held fixed), averaged over rows.
Eigen::MatrixXcd denoiser_jacobian_avg(const Eigen::MatrixXcd& B, double tau_sq,
                                       const Dictionary& dict, double sigma_h_sq);

// Per-iteration trace for state-evolution experiments.
struct SampTrace {
  std::vector<double> tau_sq_used;    // tau fed to the denoiser at each t
  std::vector<double> tau_sq_online;  // ||Z^t||^2/(ND)
  std::vector<double> mse_vs_truth;   // ||G_hat^t - G||^2, t = 0..T (needs g_true)
};

// Full AMP recursion; support = per-section argmax row energy of the final
// estimate (ties to the smallest index). Aborts with NumericGuard if the
// online tau estimate grows past 10x its initial value.
DecodeResult samp_decode(const Observation& obs, const Dictionary& dict, double sigma_h_sq,
                         const SeSchedule& schedule, SampTrace* trace = nullptr,
                         const Eigen::MatrixXcd* g_true = nullptr);

// Offline state evolution by Monte Carlo: tau_0^2 = sigma_v^2 + E||G||^2/(ND),
// tau_{t+1}^2 = sigma_v^2 + E||eta_t(G + tau_t W) - G||^2/(ND) over n_mc fresh
// (G, W) draws per iteration; stops at the fixed point (rel_tol) or t_max.
SeSchedule se_offline(const Dictionary& dict, const SeParams& params, int n_mc,
                      std::uint64_t seed, std::uint32_t stream_payload = 0);

// Online estimate tau~^2 = ||Z||^2 / (N D)
inline double se_online(const Eigen::MatrixXcd& Z) {
  return Z.squaredNorm() / (static_cast<double>(Z.rows()) * static_cast<double>(Z.cols()));
}

}  // namespace sparc
