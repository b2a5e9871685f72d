#include "sparc/samp.hpp"

#include <cmath>
#include <limits>

#include "sparc/errors.hpp"
#include "sparc/parallel.hpp"

namespace sparc {

namespace {

using Eigen::MatrixXcd;

// Shared denoiser kernel over the active rows. Optionally accumulates the
// average D x D Jacobian used by the Onsager term:
//   J_k = d w_k I + c d w_k (1 - w_k) B_k^T conj(B_k)
// with c = sigma_h^2/(tau^2(tau^2+sigma_h^2)), d = sigma_h^2/(tau^2+sigma_h^2)
// and w_k the softmax weight of row k inside its section. The rank-one part
// is the softmax derivative; rows outside sections have zero prior mass and
// contribute nothing.
void denoise_kernel(const MatrixXcd& B, double tau_sq, const Dictionary& dict,
                    double sigma_h_sq, MatrixXcd* g_out, MatrixXcd* j_avg) {
  if (tau_sq <= 0) throw ConfigError("mmse_denoise: tau_sq must be positive");
  const int d = static_cast<int>(B.cols());
  const double c = sigma_h_sq / (tau_sq * (tau_sq + sigma_h_sq));
  const double shrink = sigma_h_sq / (tau_sq + sigma_h_sq);
  g_out->setZero(B.rows(), d);
  if (j_avg) j_avg->setZero(d, d);
  Eigen::VectorXd lw;
  for (int s = 0; s < dict.n_sections(); ++s) {
    const SectionRange& sec = dict.section(s);
    lw.resize(sec.size());
    double lmax = -std::numeric_limits<double>::infinity();
    for (int m = sec.begin; m < sec.end; ++m) {
      double v = c * B.row(m).squaredNorm();
      lw(m - sec.begin) = v;
      if (v > lmax) lmax = v;
    }
    double z = 0.0;
    for (int i = 0; i < sec.size(); ++i) z += std::exp(lw(i) - lmax);
    for (int m = sec.begin; m < sec.end; ++m) {
      double w = std::exp(lw(m - sec.begin) - lmax) / z;
      g_out->row(m) = (shrink * w) * B.row(m);
      if (j_avg) {
        double dw = shrink * w;
        j_avg->diagonal().array() += dw;
        j_avg->noalias() +=
            (c * dw * (1.0 - w)) * (B.row(m).transpose() * B.row(m).conjugate());
      }
    }
  }
  if (j_avg) *j_avg /= static_cast<double>(B.rows());
}

void check_b_rows(const MatrixXcd& B, const Dictionary& dict, const char* who) {
  if (B.rows() != dict.n_cols() && B.rows() != dict.active_cols())
    throw ConfigError(std::string(who) + ": row count matches neither L nor the active columns");
}

}  // namespace

Eigen::MatrixXcd mmse_denoise(const Eigen::MatrixXcd& B, double tau_sq,
                              const Dictionary& dict, double sigma_h_sq) {
  check_b_rows(B, dict, "mmse_denoise");
  MatrixXcd g;
  denoise_kernel(B, tau_sq, dict, sigma_h_sq, &g, nullptr);
  return g;
}

Eigen::MatrixXcd onsager_term(const Eigen::MatrixXcd& Z_prev, const Eigen::MatrixXcd& B_prev,
                              double tau_prev_sq, const Dictionary& dict, double sigma_h_sq) {
  if (Z_prev.size() == 0)
    return MatrixXcd::Zero(dict.n_rows(), B_prev.cols() ? B_prev.cols() : 1);
  check_b_rows(B_prev, dict, "onsager_term");
  MatrixXcd g, j_avg;
  denoise_kernel(B_prev, tau_prev_sq, dict, sigma_h_sq, &g, &j_avg);
  double ratio = static_cast<double>(B_prev.rows()) / dict.n_rows();
  return ratio * (Z_prev * j_avg);
}

Eigen::MatrixXcd denoiser_jacobian_avg(const Eigen::MatrixXcd& B, double tau_sq,
                                       const Dictionary& dict, double sigma_h_sq) {
  check_b_rows(B, dict, "denoiser_jacobian_avg");
  MatrixXcd g, j_avg;
  denoise_kernel(B, tau_sq, dict, sigma_h_sq, &g, &j_avg);
  return j_avg;
}

DecodeResult samp_decode(const Observation& obs, const Dictionary& dict, double sigma_h_sq,
                         const SeSchedule& schedule, SampTrace* trace,
                         const Eigen::MatrixXcd* g_true) {
  if (dict.n_sections() == 0) throw ConfigError("samp_decode: dictionary has no sections");
  const int la = dict.active_cols();
  const int n = dict.n_rows();
  const int d = static_cast<int>(obs.Y.cols());
  if (obs.Y.rows() != n) throw ConfigError("samp_decode: observation/dictionary mismatch");
  if (schedule.mode == SeSchedule::Mode::offline && schedule.taus.size() < 2)
    throw ConfigError("samp_decode: offline schedule needs at least tau_0 and tau_1");
  const auto A = dict.columns().leftCols(la);
  const double nd = static_cast<double>(n) * d;

  AmpState st;
  st.G_hat = MatrixXcd::Zero(la, d);
  st.onsager.resize(0, 0);
  MatrixXcd z_prev;
  double tau_ref = -1.0;   // divergence guard baseline
  double tau_last = -1.0;  // online stop rule
  const int t_end = schedule.mode == SeSchedule::Mode::offline
                        ? static_cast<int>(schedule.taus.size()) - 1
                        : schedule.t_max;

  auto record_mse = [&]() {
    if (trace && g_true) trace->mse_vs_truth.push_back((st.G_hat - *g_true).squaredNorm());
  };
  record_mse();  // t = 0, all-zero estimate

  for (st.t = 0; st.t < t_end; ++st.t) {
    st.Z.noalias() = obs.Y - A * st.G_hat;
    if (st.t > 0) st.Z.noalias() += (static_cast<double>(la) / n) * (z_prev * st.onsager);
    double tau_online = st.Z.squaredNorm() / nd;
    if (tau_ref < 0) tau_ref = tau_online;
    if (tau_online > 10.0 * tau_ref)
      throw NumericGuard("samp_decode: residual energy grew past 10x its initial value");
    if (schedule.mode == SeSchedule::Mode::online) {
      if (tau_last > 0 && std::abs(tau_online - tau_last) / tau_last < schedule.rel_tol) break;
      tau_last = tau_online;
      st.tau_sq = tau_online;
    } else {
      st.tau_sq = schedule.taus[st.t];
    }
    if (trace) {
      trace->tau_sq_used.push_back(st.tau_sq);
      trace->tau_sq_online.push_back(tau_online);
    }
    st.B.noalias() = st.G_hat + A.adjoint() * st.Z;
    denoise_kernel(st.B, st.tau_sq, dict, sigma_h_sq, &st.G_hat, &st.onsager);
    z_prev.swap(st.Z);
    record_mse();
  }

  DecodeResult res;
  res.support.indices.reserve(dict.n_sections());
  for (int s = 0; s < dict.n_sections(); ++s) {
    const SectionRange& sec = dict.section(s);
    int best = sec.begin;
    double best_energy = -1.0;
    for (int m = sec.begin; m < sec.end; ++m) {
      double e = st.G_hat.row(m).squaredNorm();
      if (e > best_energy) {
        best_energy = e;
        best = m;
      }
    }
    res.support.indices.push_back(best);
  }
  Eigen::VectorXcd s_hat = Eigen::VectorXcd::Zero(n);
  for (int idx : res.support.indices) s_hat += dict.columns().col(idx);
  DecoderConfig mcfg;
  mcfg.sigma_h_sq = sigma_h_sq;
  mcfg.sigma_v_sq = obs.sigma_v_sq;
  mcfg.theorem1_mode = obs.sigma_v_sq <= 0;
  res.metric = ml_metric(obs, s_hat, mcfg);
  res.path_id = 0;
  return res;
}

SeSchedule se_offline(const Dictionary& dict, const SeParams& params, int n_mc,
                      std::uint64_t seed, std::uint32_t stream_payload) {
  if (n_mc < 1) throw ConfigError("se_offline: need at least one draw");
  if (dict.n_sections() == 0) throw ConfigError("se_offline: dictionary has no sections");
  const int la = dict.active_cols();
  const int n = dict.n_rows();
  const int d = params.n_antennas;
  const int k = dict.n_sections();
  const double nd = static_cast<double>(n) * d;

  SeSchedule sched;
  sched.mode = SeSchedule::Mode::offline;
  sched.t_max = params.t_max;
  sched.rel_tol = params.rel_tol;

  // tau_0^2 = sigma_v^2 + E||G||^2/(ND); ||G||^2 = K ||h||^2 since the K
  // nonzero rows all equal h^T
  {
    double acc = 0.0;
    Philox rng(seed, stream_id(StreamKind::se_draw, stream_payload), 0xFFFFFFFFu);
    for (int i = 0; i < n_mc; ++i) {
      double hn = 0.0;
      for (int a = 0; a < d; ++a) hn += std::norm(rng.cnormal(params.sigma_h_sq));
      acc += k * hn;
    }
    sched.taus.push_back(params.sigma_v_sq + acc / (n_mc * nd));
  }

  std::vector<double> mse(n_mc);
  for (int t = 0; t < params.t_max; ++t) {
    const double tau_t = sched.taus.back();
    const double tau = std::sqrt(tau_t);
    parallel_for(n_mc, params.threads, [&](long i) {
      Philox rng(seed, stream_id(StreamKind::se_draw, stream_payload),
                 static_cast<std::uint32_t>((t << 16) | i));
      Eigen::MatrixXcd b(la, d);
      for (int r = 0; r < la; ++r)
        for (int a = 0; a < d; ++a) b(r, a) = tau * rng.cnormal(1.0);
      Eigen::RowVectorXcd h(d);
      for (int a = 0; a < d; ++a) h(a) = rng.cnormal(params.sigma_h_sq);
      std::vector<int> rows(k);
      for (int s = 0; s < k; ++s) {
        const SectionRange& sec = dict.section(s);
        rows[s] = sec.begin + static_cast<int>(rng.uniform() * sec.size());
        b.row(rows[s]) += h;
      }
      Eigen::MatrixXcd g;
      denoise_kernel(b, tau_t, dict, params.sigma_h_sq, &g, nullptr);
      for (int s = 0; s < k; ++s) g.row(rows[s]) -= h;
      mse[i] = g.squaredNorm();
    });
    double acc = 0.0;
    for (double v : mse) acc += v;
    double tau_next = params.sigma_v_sq + acc / (n_mc * nd);
    sched.taus.push_back(tau_next);
    if (std::abs(tau_next - tau_t) / tau_t < params.rel_tol) break;
  }
  return sched;
}

}  // namespace sparc
