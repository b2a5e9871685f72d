#include "sparc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "sparc/channel.hpp"
#include "sparc/codec.hpp"
#include "sparc/decoders.hpp"
#include "sparc/errors.hpp"
#include "sparc/parallel.hpp"

namespace sparc {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(trim(tok));
  return out;
}

long parse_long(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    long r = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer for '" + key + "': " + v);
  }
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    double r = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw ConfigError("config: bad number for '" + key + "': " + v);
  }
}

DecoderSpec parse_decoder(const std::string& text) {
  std::stringstream ss(text);
  DecoderSpec spec;
  ss >> spec.kind;
  if (spec.kind != "mlmp" && spec.kind != "bomp" && spec.kind != "mbomp" &&
      spec.kind != "samp")
    throw ConfigError("config: unknown decoder kind '" + spec.kind + "'");
  std::string opt;
  while (ss >> opt) {
    size_t eq = opt.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: decoder option '" + opt + "' is not key=value");
    std::string key = opt.substr(0, eq), val = opt.substr(eq + 1);
    if (key == "paths")
      spec.paths = static_cast<int>(parse_long(val, key));
    else if (key == "label")
      spec.label = val;
    else if (key == "se" && spec.kind == "samp")
      spec.online_se = (val == "online");
    else if (key == "se_draws" && spec.kind == "samp")
      spec.se_draws = static_cast<int>(parse_long(val, key));
    else if (key == "t_max" && spec.kind == "samp")
      spec.t_max = static_cast<int>(parse_long(val, key));
    else if (key == "rel_tol" && spec.kind == "samp")
      spec.rel_tol = parse_double(val, key);
    else
      throw ConfigError("config: unknown decoder option '" + key + "' for " + spec.kind);
  }
  if (spec.label.empty()) {
    spec.label = spec.kind;
    if (spec.kind == "samp") {
      spec.label += spec.online_se ? "_online" : "_offline";
    } else if (spec.paths > 1) {
      spec.label += std::to_string(spec.paths);
    }
  }
  return spec;
}

std::string fmt10(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

SimConfig parse_sim_config(std::istream& in, const std::string& origin) {
  SimConfig cfg;
  bool saw_version = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key == "schema_version") {
      if (parse_long(val, key) != 1)
        throw ConfigError(origin + ": unsupported schema_version " + val);
      saw_version = true;
    } else if (key == "config_id") {
      cfg.config_id = val;
    } else if (key == "dict") {
      cfg.dict_source = val;
    } else if (key == "sections") {
      cfg.n_sections = static_cast<int>(parse_long(val, key));
    } else if (key == "antennas") {
      cfg.n_antennas = static_cast<int>(parse_long(val, key));
    } else if (key == "sigma_h_sq") {
      cfg.sigma_h_sq = parse_double(val, key);
    } else if (key == "ebn0_db") {
      cfg.ebn0_grid_db.clear();
      for (const auto& tok : split(val, ',')) cfg.ebn0_grid_db.push_back(parse_double(tok, key));
    } else if (key == "trials") {
      cfg.max_trials = parse_long(val, key);
    } else if (key == "min_errors") {
      cfg.min_errors = parse_long(val, key);
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_long(val, key));
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(parse_long(val, key));
    } else if (key == "decoder") {
      cfg.decoders.push_back(parse_decoder(val));
    } else {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!saw_version) throw ConfigError(origin + ": missing schema_version");
  validate(cfg);
  return cfg;
}

SimConfig load_sim_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  return parse_sim_config(in, path);
}

void validate(const SimConfig& cfg) {
  if (cfg.dict_source.empty()) throw ConfigError("config: missing dict source");
  if (cfg.n_sections < 1) throw ConfigError("config: sections must be >= 1");
  if (cfg.n_antennas < 1) throw ConfigError("config: antennas must be >= 1");
  if (cfg.ebn0_grid_db.empty()) throw ConfigError("config: empty ebn0_db grid");
  if (cfg.max_trials < 1) throw ConfigError("config: trials must be >= 1");
  if (cfg.min_errors < 1) throw ConfigError("config: min_errors must be >= 1");
  if (cfg.decoders.empty()) throw ConfigError("config: need at least one decoder");
  for (const auto& d : cfg.decoders)
    if (d.paths < 1) throw ConfigError("config: decoder paths must be >= 1");
  for (size_t i = 0; i < cfg.decoders.size(); ++i)
    for (size_t j = i + 1; j < cfg.decoders.size(); ++j)
      if (cfg.decoders[i].label == cfg.decoders[j].label)
        throw ConfigError("config: duplicate decoder label '" + cfg.decoders[i].label +
                          "' (set label=...)");
}

Dictionary build_dictionary(const SimConfig& cfg) {
  Dictionary base = [&]() {
    if (cfg.dict_source.rfind("prime:", 0) == 0) {
      int p = static_cast<int>(parse_long(cfg.dict_source.substr(6), "dict"));
      return Dictionary::build_mub_prime(p);
    }
    if (cfg.dict_source.rfind("file:", 0) == 0)
      return Dictionary::load(cfg.dict_source.substr(5));
    throw ConfigError("config: dict must be prime:<p> or file:<path>, got " + cfg.dict_source);
  }();
  return base.with_sections(partition_sections(base.n_cols(), cfg.n_sections));
}

namespace {

using DecodeFn = std::function<DecodeResult(const Observation&)>;

struct PointDecoder {
  std::string label;
  DecodeFn fn;
};

// Decoder closures for one grid point (sigma_v fixed); samp offline decoders
// precompute their SE schedule here, keyed deterministically by point index.
std::vector<PointDecoder> make_decoders(const SimConfig& cfg, const Dictionary& dict,
                                        double sigma_v_sq, int point) {
  std::vector<PointDecoder> out;
  const double sh = cfg.sigma_h();
  for (size_t di = 0; di < cfg.decoders.size(); ++di) {
    const DecoderSpec& spec = cfg.decoders[di];
    if (spec.kind == "samp") {
      SeSchedule sched;
      if (spec.online_se) {
        sched.mode = SeSchedule::Mode::online;
        sched.t_max = spec.t_max;
        sched.rel_tol = spec.rel_tol;
      } else {
        SeParams params;
        params.sigma_h_sq = sh;
        params.sigma_v_sq = sigma_v_sq;
        params.n_antennas = cfg.n_antennas;
        params.t_max = spec.t_max;
        params.rel_tol = spec.rel_tol;
        params.threads = cfg.threads;
        sched = se_offline(dict, params, spec.se_draws, cfg.seed,
                           static_cast<std::uint32_t>(point * 16 + di));
      }
      out.push_back({spec.label, [&dict, sh, sched](const Observation& obs) {
                       return samp_decode(obs, dict, sh, sched);
                     }});
    } else {
      DecoderConfig dc;
      dc.sigma_h_sq = sh;
      dc.sigma_v_sq = sigma_v_sq;
      dc.paths = spec.paths;
      const std::string kind = spec.kind;
      out.push_back({spec.label, [&dict, dc, kind](const Observation& obs) {
                       if (kind == "mlmp") return pmlmp(obs, dict, dc);
                       if (kind == "bomp") return bomp(obs, dict, dc);
                       return mbomp(obs, dict, dc);
                     }});
    }
  }
  return out;
}

struct TrialData {
  SupportSet tx;
  ChannelRealization ch;
  Observation obs;
};

TrialData make_trial(const SimConfig& cfg, const Dictionary& dict, double sigma_v_sq,
                     int point, long trial) {
  Philox rng(cfg.seed, stream_id(StreamKind::trial, static_cast<std::uint32_t>(point)),
             static_cast<std::uint32_t>(trial));
  const int n_bits = dict.total_bits();
  std::vector<std::uint8_t> bits(n_bits);
  for (int b = 0; b < n_bits; ++b) bits[b] = static_cast<std::uint8_t>(rng.next_u32() >> 31);
  TrialData td;
  td.tx = encode(bits, dict);
  Eigen::VectorXcd s = to_codeword(td.tx, dict);
  td.ch = sample_channel(cfg.n_antennas, cfg.sigma_h(), rng);
  td.obs = transmit(s, td.ch, sigma_v_sq, rng);
  return td;
}

}  // namespace

std::vector<BlerRecord> run_bler_sweep(const SimConfig& cfg) {
  validate(cfg);
  Dictionary dict = build_dictionary(cfg);
  const int n_bits = dict.total_bits();
  const double es = static_cast<double>(dict.n_sections());  // E_s = K convention
  const int nd = static_cast<int>(cfg.decoders.size());
  std::vector<BlerRecord> records;

  for (int point = 0; point < static_cast<int>(cfg.ebn0_grid_db.size()); ++point) {
    const double ebn0 = cfg.ebn0_grid_db[point];
    const double sigma_v_sq = ebn0_to_sigma_v(ebn0, n_bits, es);
    auto decoders = make_decoders(cfg, dict, sigma_v_sq, point);

    std::vector<std::vector<std::uint8_t>> errs(nd);
    std::vector<std::vector<double>> secs(nd);
    for (int d = 0; d < nd; ++d) {
      errs[d].assign(cfg.max_trials, 0);
      secs[d].assign(cfg.max_trials, 0.0);
    }

    const long wave = std::max<long>(64, 16L * resolve_threads(cfg.threads));
    long done = 0;
    long stop_at = cfg.max_trials;
    while (done < stop_at) {
      long end = std::min(stop_at, done + wave);
      parallel_for(end - done, cfg.threads, [&](long i) {
        long t = done + i;
        TrialData td = make_trial(cfg, dict, sigma_v_sq, point, t);
        for (int d = 0; d < nd; ++d) {
          auto t0 = std::chrono::steady_clock::now();
          bool err;
          try {
            err = decoders[d].fn(td.obs).support != td.tx;
          } catch (const NumericGuard&) {
            err = true;  // diverged decodes count as block errors
          }
          secs[d][t] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          errs[d][t] = err ? 1 : 0;
        }
      });
      done = end;
      // earliest trial count (in order) at which every decoder has
      // min_errors; deterministic regardless of thread scheduling
      std::vector<long> cum(nd, 0);
      for (long t = 0; t < done; ++t) {
        bool all = true;
        for (int d = 0; d < nd; ++d) {
          cum[d] += errs[d][t];
          if (cum[d] < cfg.min_errors) all = false;
        }
        if (all) {
          stop_at = std::min(stop_at, t + 1);
          break;
        }
      }
    }

    for (int d = 0; d < nd; ++d) {
      BlerRecord rec;
      rec.config_id = cfg.config_id;
      rec.decoder = decoders[d].label;
      rec.ebn0_db = ebn0;
      rec.trials = stop_at;
      rec.block_errors = 0;
      rec.wall_seconds = 0.0;
      for (long t = 0; t < stop_at; ++t) {
        rec.block_errors += errs[d][t];
        rec.wall_seconds += secs[d][t];
      }
      rec.bler = static_cast<double>(rec.block_errors) / static_cast<double>(rec.trials);
      rec.seed = cfg.seed;
      rec.low_confidence = rec.block_errors < 10;
      records.push_back(std::move(rec));
    }
  }
  return records;
}

std::string bler_csv(const std::vector<BlerRecord>& records) {
  std::string out =
      "config_id,decoder,ebn0_db,trials,block_errors,bler,wall_seconds,seed,low_confidence\n";
  for (const auto& r : records) {
    out += r.config_id + ',' + r.decoder + ',' + fmt10(r.ebn0_db) + ',' +
           std::to_string(r.trials) + ',' + std::to_string(r.block_errors) + ',' +
           fmt10(r.bler) + ',' + fmt10(r.wall_seconds) + ',' + std::to_string(r.seed) + ',' +
           (r.low_confidence ? "1" : "0") + '\n';
  }
  return out;
}

std::vector<SeTracePoint> run_se_trace(const SimConfig& cfg, double ebn0_db, long trials) {
  validate(cfg);
  if (trials < 1) throw ConfigError("se trace: trials must be >= 1");
  Dictionary dict = build_dictionary(cfg);
  const double sh = cfg.sigma_h();
  const double sigma_v_sq = ebn0_to_sigma_v(ebn0_db, dict.total_bits(),
                                            static_cast<double>(dict.n_sections()));
  DecoderSpec spec;
  spec.kind = "samp";
  for (const auto& d : cfg.decoders)
    if (d.kind == "samp") spec = d;

  SeParams params;
  params.sigma_h_sq = sh;
  params.sigma_v_sq = sigma_v_sq;
  params.n_antennas = cfg.n_antennas;
  params.t_max = spec.t_max;
  params.rel_tol = spec.rel_tol;
  params.threads = cfg.threads;
  SeSchedule sched = se_offline(dict, params, spec.se_draws, cfg.seed, 0xBEEF);

  const int t_len = static_cast<int>(sched.taus.size());
  const double nd = static_cast<double>(dict.n_rows()) * cfg.n_antennas;
  std::vector<std::vector<double>> mse(trials);
  parallel_for(trials, cfg.threads, [&](long t) {
    TrialData td = make_trial(cfg, dict, sigma_v_sq, 0, t);
    Eigen::MatrixXcd g_true = Eigen::MatrixXcd::Zero(dict.active_cols(), cfg.n_antennas);
    for (int idx : td.tx.indices) g_true.row(idx) = td.ch.h.transpose();
    SampTrace trace;
    samp_decode(td.obs, dict, sh, sched, &trace, &g_true);
    mse[t] = trace.mse_vs_truth;
  });

  std::vector<SeTracePoint> out(t_len);
  for (int t = 0; t < t_len; ++t) {
    double acc = 0.0;
    for (long i = 0; i < trials; ++i) acc += mse[i][t];
    out[t].t = t;
    out[t].tau_sq_predicted = sched.taus[t];
    out[t].tau_sq_empirical = sigma_v_sq + acc / (trials * nd);
  }
  return out;
}

std::string se_trace_csv(const std::vector<SeTracePoint>& trace) {
  std::string out = "t,tau_sq_predicted,tau_sq_empirical\n";
  for (const auto& p : trace)
    out += std::to_string(p.t) + ',' + fmt10(p.tau_sq_predicted) + ',' +
           fmt10(p.tau_sq_empirical) + '\n';
  return out;
}

std::vector<Theorem1Row> run_theorem1_check(const std::vector<int>& primes, long trials,
                                            int n_antennas, std::uint64_t seed, int threads) {
  if (trials < 1) throw ConfigError("theorem1: trials must be >= 1");
  std::vector<Theorem1Row> rows;
  for (size_t pi = 0; pi < primes.size(); ++pi) {
    int p = primes[pi];
    Dictionary base = Dictionary::build_mub_prime(p);
    double mu = 1.0 / std::sqrt(static_cast<double>(p));
    int k_max = static_cast<int>(std::floor((1.0 + mu) / (2.0 * mu) + 1e-12));
    for (int k = 1; k <= k_max; ++k) {
      Dictionary dict = base.with_sections(partition_sections(base.n_cols(), k));
      DecoderConfig dc;
      dc.sigma_h_sq = 1.0 / n_antennas;
      dc.sigma_v_sq = 0.0;
      dc.theorem1_mode = true;
      std::vector<std::uint8_t> fail(trials, 0);
      const int point = static_cast<int>(pi * 64 + k);
      parallel_for(trials, threads, [&](long t) {
        Philox rng(seed, stream_id(StreamKind::trial, static_cast<std::uint32_t>(point)),
                   static_cast<std::uint32_t>(t));
        std::vector<std::uint8_t> bits(dict.total_bits());
        for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u32() >> 31);
        SupportSet tx = encode(bits, dict);
        Eigen::VectorXcd s = to_codeword(tx, dict);
        ChannelRealization ch = sample_channel(n_antennas, dc.sigma_h_sq, rng);
        Observation obs = transmit(s, ch, 0.0, rng);
        fail[t] = mlmp(obs, dict, dc).support != tx ? 1 : 0;
      });
      Theorem1Row row;
      row.p = p;
      row.k = k;
      row.trials = trials;
      for (auto f : fail) row.failures += f;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string theorem1_csv(const std::vector<Theorem1Row>& rows) {
  std::string out = "p,K,trials,failures,pass\n";
  for (const auto& r : rows)
    out += std::to_string(r.p) + ',' + std::to_string(r.k) + ',' + std::to_string(r.trials) +
           ',' + std::to_string(r.failures) + ',' + (r.failures == 0 ? "1" : "0") + '\n';
  return out;
}

std::pair<double, double> wilson_interval(long errors, long trials, double z) {
  if (trials < 1) throw ConfigError("wilson_interval: trials must be >= 1");
  double n = static_cast<double>(trials);
  double p = static_cast<double>(errors) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2.0 * n)) / denom;
  double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace sparc
