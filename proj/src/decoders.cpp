#include "sparc/decoders.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "sparc/errors.hpp"

namespace sparc {

namespace {

using Eigen::MatrixXcd;
using Eigen::RowVectorXcd;
using Eigen::VectorXcd;
using cxd = std::complex<double>;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_cfg(const Dictionary& dict, const DecoderConfig& cfg) {
  if (dict.n_sections() == 0) throw ConfigError("decoder: dictionary has no sections");
  if (cfg.sigma_v_sq < 0) throw ConfigError("decoder: negative noise variance");
  if (!cfg.theorem1_mode && cfg.sigma_v_sq == 0)
    throw ConfigError("decoder: ML metric undefined at sigma_v_sq = 0 (use theorem1_mode)");
  if (cfg.paths < 1) throw ConfigError("decoder: paths must be >= 1");
}

// Per-decode context shared by every greedy variant: correlations of all
// in-section columns with all antennas, plus first-iteration energies.
struct Ctx {
  const Dictionary& dict;
  const Observation& obs;
  const DecoderConfig& cfg;
  int la;   // in-section (active) columns
  int d;    // antennas
  int k;    // sections
  MatrixXcd corr;    // la x d, corr(m, i) = a_m^H y_i
  Eigen::VectorXd q; // q(m) = sum_i |corr(m, i)|^2

  Ctx(const Observation& o, const Dictionary& dic, const DecoderConfig& c)
      : dict(dic), obs(o), cfg(c) {
    check_cfg(dic, c);
    la = dic.active_cols();
    d = static_cast<int>(o.Y.cols());
    k = dic.n_sections();
    if (o.Y.rows() != dic.n_rows())
      throw ConfigError("decoder: observation row count does not match dictionary");
    corr.noalias() = dic.columns().leftCols(la).adjoint() * o.Y;
    q = corr.rowwise().squaredNorm();
  }

  // <a_m, a_col> for all active m, added into dst
  void add_gram_column(VectorXcd& dst, int col) const {
    if (dict.has_fast_gram()) {
      for (int m = 0; m < la; ++m) dst(m) += dict.gram(m, col);
    } else {
      dst.noalias() += dict.columns().leftCols(la).adjoint() * dict.columns().col(col);
    }
  }
};

// Greedy path state. partial = sum of chosen columns;
//   acc(i)  = <a-sum, y_i> accumulated from corr rows
//   w(m)    = <a_m, partial>
//   norm_sq = ||partial||^2
struct Path {
  std::vector<int> chosen;
  std::vector<char> used;  // per section
  RowVectorXcd acc;
  VectorXcd w;
  double norm_sq = 0.0;

  explicit Path(const Ctx& c)
      : used(c.k, 0), acc(RowVectorXcd::Zero(c.d)), w(VectorXcd::Zero(c.la)) {}

  void pick(const Ctx& c, int col) {
    norm_sq += 1.0 + 2.0 * std::real(w(col));
    acc += c.corr.row(col);
    used[c.dict.section_of(col)] = 1;
    chosen.push_back(col);
    c.add_gram_column(w, col);
  }
};

double final_metric(const Ctx& c, const Path& p) {
  double energy = p.acc.squaredNorm();
  if (c.cfg.theorem1_mode) return energy;
  double sh = c.cfg.sigma_h_sq, sv = c.cfg.sigma_v_sq;
  double beta = (sh / sv) / (sv + sh * p.norm_sq);
  double gamma = std::log1p(sh * p.norm_sq / sv);
  return beta * energy - c.d * gamma;
}

DecodeResult make_result(const Ctx& c, const Path& p, int path_id) {
  DecodeResult res;
  res.support.indices = p.chosen;
  std::sort(res.support.indices.begin(), res.support.indices.end());
  res.metric = final_metric(c, p);
  res.path_id = path_id;
  return res;
}

// One MLMP iteration (1-based k_iter): argmax over columns of unused sections
// of the partial ML metric with effective noise variance
// sigma_v^2 + sigma_h^2 (K - k) / N.
int mlmp_select(const Ctx& c, const Path& p, int k_iter) {
  const double sh = c.cfg.sigma_h_sq;
  const double sv_eff =
      c.cfg.sigma_v_sq + sh * static_cast<double>(c.k - k_iter) / c.dict.n_rows();
  int best = -1;
  double best_val = kNegInf;
  for (int sec = 0; sec < c.k; ++sec) {
    if (p.used[sec]) continue;
    const SectionRange& rng = c.dict.section(sec);
    for (int m = rng.begin; m < rng.end; ++m) {
      double energy = 0.0;
      for (int i = 0; i < c.d; ++i) energy += std::norm(p.acc(i) + c.corr(m, i));
      double val;
      if (c.cfg.theorem1_mode) {
        val = energy;
      } else {
        double n2 = p.norm_sq + 1.0 + 2.0 * std::real(p.w(m));
        double beta = (sh / sv_eff) / (sv_eff + sh * n2);
        double gamma = std::log1p(sh * n2 / sv_eff);
        val = beta * energy - c.d * gamma;
      }
      if (val > best_val) {
        best_val = val;
        best = m;
      }
    }
  }
  return best;
}

Path run_mlmp_path(const Ctx& c, int seed_col) {
  Path p(c);
  int k0 = 1;
  if (seed_col >= 0) {
    p.pick(c, seed_col);
    k0 = 2;
  }
  for (int k_iter = k0; k_iter <= c.k; ++k_iter) p.pick(c, mlmp_select(c, p, k_iter));
  return p;
}

std::vector<int> top_p_seeds(const Ctx& c, int paths) {
  if (paths > c.la)
    throw ConfigError("decoder: more parallel paths than dictionary columns");
  std::vector<int> order(c.la);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + paths, order.end(),
                    [&](int a, int b) {
                      if (c.q(a) != c.q(b)) return c.q(a) > c.q(b);
                      return a < b;
                    });
  order.resize(paths);
  return order;
}

// MBOMP iteration: joint per-antenna gain over the running column sum, pick
// the largest residual correlation among unused sections.
int mbomp_select(const Ctx& c, const Path& p) {
  RowVectorXcd h_hat = RowVectorXcd::Zero(c.d);
  if (!p.chosen.empty()) h_hat = p.acc / p.norm_sq;
  int best = -1;
  double best_val = kNegInf;
  for (int sec = 0; sec < c.k; ++sec) {
    if (p.used[sec]) continue;
    const SectionRange& rng = c.dict.section(sec);
    for (int m = rng.begin; m < rng.end; ++m) {
      double val = 0.0;
      for (int i = 0; i < c.d; ++i)
        val += std::norm(c.corr(m, i) - h_hat(i) * p.w(m));
      if (val > best_val) {
        best_val = val;
        best = m;
      }
    }
  }
  return best;
}

Path run_mbomp_path(const Ctx& c, int seed_col) {
  Path p(c);
  if (seed_col >= 0) p.pick(c, seed_col);
  while (static_cast<int>(p.chosen.size()) < c.k) p.pick(c, mbomp_select(c, p));
  return p;
}

// BOMP iteration: per-column least-squares coefficients over the detected
// set, residual correlation against the remaining sections. Needs individual
// gram columns of the chosen set, which Path does not keep, so they are
// cached here.
struct BompState {
  Path p;
  std::vector<VectorXcd> gram_cols;  // per chosen column: <a_m, a_c> for all m
  explicit BompState(const Ctx& c) : p(c) {}

  void pick(const Ctx& c, int col) {
    VectorXcd g = VectorXcd::Zero(c.la);
    c.add_gram_column(g, col);
    gram_cols.push_back(std::move(g));
    p.pick(c, col);
  }
};

int bomp_select(const Ctx& c, const BompState& s) {
  const int nc = static_cast<int>(s.p.chosen.size());
  MatrixXcd coeff;  // nc x d least-squares coefficients
  if (nc > 0) {
    MatrixXcd gram(nc, nc);
    MatrixXcd rhs(nc, c.d);
    for (int a = 0; a < nc; ++a) {
      rhs.row(a) = c.corr.row(s.p.chosen[a]);
      for (int b = 0; b < nc; ++b) gram(a, b) = c.dict.gram(s.p.chosen[a], s.p.chosen[b]);
    }
    coeff = gram.ldlt().solve(rhs);
  }
  int best = -1;
  double best_val = kNegInf;
  for (int sec = 0; sec < c.k; ++sec) {
    if (s.p.used[sec]) continue;
    const SectionRange& rng = c.dict.section(sec);
    for (int m = rng.begin; m < rng.end; ++m) {
      double val = 0.0;
      for (int i = 0; i < c.d; ++i) {
        cxd r = c.corr(m, i);
        for (int a = 0; a < nc; ++a) r -= coeff(a, i) * s.gram_cols[a](m);
        val += std::norm(r);
      }
      if (val > best_val) {
        best_val = val;
        best = m;
      }
    }
  }
  return best;
}

Path run_bomp_path(const Ctx& c, int seed_col) {
  BompState s(c);
  if (seed_col >= 0) s.pick(c, seed_col);
  while (static_cast<int>(s.p.chosen.size()) < c.k) s.pick(c, bomp_select(c, s));
  return s.p;
}

template <typename RunPath>
DecodeResult parallel_paths(const Ctx& c, const RunPath& run) {
  if (c.cfg.paths == 1) return make_result(c, run(c, -1), 0);
  std::vector<int> seeds = top_p_seeds(c, c.cfg.paths);
  DecodeResult best;
  double best_metric = kNegInf;
  for (int n = 0; n < static_cast<int>(seeds.size()); ++n) {
    Path p = run(c, seeds[n]);
    double metric = final_metric(c, p);
    if (metric > best_metric) {
      best_metric = metric;
      best = make_result(c, p, n);
    }
  }
  return best;
}

}  // namespace

double ml_metric(const Observation& obs, const Eigen::VectorXcd& s, const DecoderConfig& cfg) {
  if (cfg.sigma_v_sq < 0) throw ConfigError("ml_metric: negative noise variance");
  if (!cfg.theorem1_mode && cfg.sigma_v_sq == 0)
    throw ConfigError("ml_metric: undefined at sigma_v_sq = 0 (use theorem1_mode)");
  double energy = (obs.Y.adjoint() * s).squaredNorm();
  if (cfg.theorem1_mode) return energy;
  double n2 = s.squaredNorm();
  double sh = cfg.sigma_h_sq, sv = cfg.sigma_v_sq;
  double beta = (sh / sv) / (sv + sh * n2);
  double gamma = std::log1p(sh * n2 / sv);
  return beta * energy - static_cast<double>(obs.Y.cols()) * gamma;
}

DecodeResult ml_bruteforce(const Observation& obs, const Dictionary& dict,
                           const DecoderConfig& cfg) {
  Ctx c(obs, dict, cfg);
  double space = 1.0;
  for (const auto& sec : dict.sections()) space *= sec.size();
  if (space > 1e6)
    throw NumericGuard("ml_bruteforce: search space " + std::to_string(space) +
                       " exceeds 1e6 codewords");
  const double sh = cfg.sigma_h_sq, sv = cfg.sigma_v_sq;
  std::vector<int> current(c.k, 0);
  std::vector<int> best;
  double best_val = kNegInf;
  // DFS over sections; index order makes the first maximum the
  // lexicographically smallest tie-winner.
  RowVectorXcd acc = RowVectorXcd::Zero(c.d);
  VectorXcd partial = VectorXcd::Zero(dict.n_rows());
  double norm_sq = 0.0;
  std::function<void(int)> walk = [&](int sec) {
    if (sec == c.k) {
      double energy = acc.squaredNorm();
      double val;
      if (cfg.theorem1_mode) {
        val = energy;
      } else {
        double beta = (sh / sv) / (sv + sh * norm_sq);
        double gamma = std::log1p(sh * norm_sq / sv);
        val = beta * energy - c.d * gamma;
      }
      if (val > best_val) {
        best_val = val;
        best = current;
      }
      return;
    }
    const SectionRange& rng = dict.section(sec);
    for (int m = rng.begin; m < rng.end; ++m) {
      double saved_norm = norm_sq;
      norm_sq += 1.0 + 2.0 * std::real(dict.columns().col(m).dot(partial));
      partial += dict.columns().col(m);
      acc += c.corr.row(m);
      current[sec] = m;
      walk(sec + 1);
      acc -= c.corr.row(m);
      partial -= dict.columns().col(m);
      norm_sq = saved_norm;
    }
  };
  walk(0);
  DecodeResult res;
  res.support.indices = best;
  res.metric = best_val;
  res.path_id = 0;
  return res;
}

DecodeResult mlmp(const Observation& obs, const Dictionary& dict, const DecoderConfig& cfg) {
  Ctx c(obs, dict, cfg);
  return make_result(c, run_mlmp_path(c, -1), 0);
}

DecodeResult mlmp_seeded(const Observation& obs, const Dictionary& dict,
                         const DecoderConfig& cfg, int first_column) {
  Ctx c(obs, dict, cfg);
  if (first_column < 0 || first_column >= c.la || dict.section_of(first_column) < 0)
    throw ConfigError("mlmp_seeded: seed column outside the sectioned range");
  return make_result(c, run_mlmp_path(c, first_column), 0);
}

DecodeResult pmlmp(const Observation& obs, const Dictionary& dict, const DecoderConfig& cfg) {
  Ctx c(obs, dict, cfg);
  return parallel_paths(c, [](const Ctx& cc, int seed) { return run_mlmp_path(cc, seed); });
}

DecodeResult bomp(const Observation& obs, const Dictionary& dict, const DecoderConfig& cfg) {
  Ctx c(obs, dict, cfg);
  return parallel_paths(c, [](const Ctx& cc, int seed) { return run_bomp_path(cc, seed); });
}

DecodeResult mbomp(const Observation& obs, const Dictionary& dict, const DecoderConfig& cfg) {
  Ctx c(obs, dict, cfg);
  return parallel_paths(c, [](const Ctx& cc, int seed) { return run_mbomp_path(cc, seed); });
}

}  // namespace sparc
