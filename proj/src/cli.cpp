#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "sparc/bounds.hpp"
#include "sparc/codec.hpp"
#include "sparc/errors.hpp"
#include "sparc/harness.hpp"

namespace sparc {

namespace {

void write_or_print(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw ConfigError("cannot open output file " + out_path);
  f << text;
}

std::vector<double> parse_grid(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigError("bad number in list: " + tok);
    }
  }
  if (out.empty()) throw ConfigError("empty number list");
  return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  for (double v : parse_grid(csv)) out.push_back(static_cast<int>(v));
  return out;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"SPARC non-coherent SIMO simulator"};
  app.name("sparc_sim");
  app.require_subcommand(1);

  // dict gen / dict check
  auto* dict_cmd = app.add_subcommand("dict", "build or validate dictionary files");
  dict_cmd->require_subcommand(1);
  auto* gen = dict_cmd->add_subcommand("gen", "generate a prime MUB dictionary file");
  int gen_prime = 7;
  int gen_sections = 0;
  std::string gen_out = "dict.txt";
  gen->add_option("--prime", gen_prime, "odd prime N (L = N^2 columns)")->required();
  gen->add_option("--sections", gen_sections, "partition into K sections");
  gen->add_option("--out", gen_out, "output path")->required();

  auto* check = dict_cmd->add_subcommand("check", "validate a dictionary file");
  std::string check_in;
  bool check_mub = false;
  check->add_option("--in", check_in, "dictionary file")->required();
  check->add_flag("--mub", check_mub, "also require the two-valued MUB correlation profile");

  // partition
  auto* part = app.add_subcommand("partition", "power-of-two section plan for (L, K)");
  int part_cols = 0, part_sections = 0;
  part->add_option("--cols", part_cols, "number of columns L")->required();
  part->add_option("--sections", part_sections, "number of sections K")->required();

  // simulate
  auto* sim = app.add_subcommand("simulate", "run a BLER sweep from a config file");
  std::string sim_cfg_path, sim_out;
  std::int64_t sim_seed = -1;
  int sim_threads = -1;
  sim->add_option("--config", sim_cfg_path, "simulation config file")->required();
  sim->add_option("--seed", sim_seed, "override the config seed");
  sim->add_option("--out", sim_out, "write CSV here instead of stdout");
  sim->add_option("--threads", sim_threads, "worker threads (0 = hardware)");

  // se trace
  auto* se = app.add_subcommand("se", "state-evolution trace (predicted vs empirical)");
  std::string se_cfg_path, se_out;
  double se_ebn0 = 10.0;
  long se_trials = 500;
  std::int64_t se_seed = -1;
  int se_threads = -1;
  se->add_option("--config", se_cfg_path, "simulation config file")->required();
  se->add_option("--ebn0", se_ebn0, "Eb/N0 operating point in dB")->required();
  se->add_option("--trials", se_trials, "decode trials for the empirical average");
  se->add_option("--seed", se_seed, "override the config seed");
  se->add_option("--out", se_out, "write CSV here instead of stdout");
  se->add_option("--threads", se_threads, "worker threads (0 = hardware)");

  // theorem1
  auto* th = app.add_subcommand("theorem1", "noiseless perfect-recovery sweep");
  std::string th_primes = "13,31,61";
  long th_trials = 1000;
  int th_antennas = 1;
  std::uint64_t th_seed = 1;
  std::string th_out;
  int th_threads = 0;
  th->add_option("--primes", th_primes, "comma list of odd primes");
  th->add_option("--trials", th_trials, "trials per (p, K)");
  th->add_option("--antennas", th_antennas, "receive antennas D");
  th->add_option("--seed", th_seed, "master seed");
  th->add_option("--out", th_out, "write CSV here instead of stdout");
  th->add_option("--threads", th_threads, "worker threads (0 = hardware)");

  // bound
  auto* bd = app.add_subcommand("bound", "coherent sphere-packing lower bound");
  int bd_n = 64, bd_bits = 40, bd_antennas = 4, bd_quad = 96;
  double bd_energy = 4.0;
  std::string bd_grid = "2,4,6,8,10,12,14";
  std::string bd_out;
  bd->add_option("--n", bd_n, "complex code length N")->required();
  bd->add_option("--bits", bd_bits, "information bits N_b")->required();
  bd->add_option("--energy", bd_energy, "codeword energy E_s (= K)")->required();
  bd->add_option("--antennas", bd_antennas, "receive antennas D");
  bd->add_option("--ebn0", bd_grid, "comma list of Eb/N0 points in dB");
  bd->add_option("--quad", bd_quad, "Gauss-Laguerre points");
  bd->add_option("--out", bd_out, "write CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      Dictionary d = Dictionary::build_mub_prime(gen_prime);
      if (gen_sections > 0)
        d = d.with_sections(partition_sections(d.n_cols(), gen_sections));
      d.save(gen_out);
      std::cout << "wrote " << gen_out << ": N=" << d.n_rows() << " L=" << d.n_cols()
                << " K=" << d.n_sections() << " mu=" << d.coherence() << "\n";
    } else if (*check) {
      Dictionary d = Dictionary::load(check_in);
      double mu = mutual_coherence(d);
      std::cout << "ok: N=" << d.n_rows() << " L=" << d.n_cols() << " K=" << d.n_sections()
                << " bits=" << d.total_bits() << " mu=" << mu << "\n";
      if (check_mub) {
        double inv = 1.0 / std::sqrt(static_cast<double>(d.n_rows()));
        if (std::abs(mu - inv) > 1e-10)
          throw ConfigError("not a MUB dictionary: mu != 1/sqrt(N)");
        std::cout << "mub: mu matches 1/sqrt(N)\n";
      }
    } else if (*part) {
      SectionPlan plan = partition_sections(part_cols, part_sections);
      std::cout << "sizes:";
      for (int s : plan.sizes) std::cout << ' ' << s;
      std::cout << "\nbits: " << plan.total_bits << "\n";
    } else if (*sim) {
      SimConfig cfg = load_sim_config(sim_cfg_path);
      if (sim_seed >= 0) cfg.seed = static_cast<std::uint64_t>(sim_seed);
      if (sim_threads >= 0) cfg.threads = sim_threads;
      write_or_print(bler_csv(run_bler_sweep(cfg)), sim_out);
    } else if (*se) {
      SimConfig cfg = load_sim_config(se_cfg_path);
      if (se_seed >= 0) cfg.seed = static_cast<std::uint64_t>(se_seed);
      if (se_threads >= 0) cfg.threads = se_threads;
      write_or_print(se_trace_csv(run_se_trace(cfg, se_ebn0, se_trials)), se_out);
    } else if (*th) {
      auto rows = run_theorem1_check(parse_int_list(th_primes), th_trials, th_antennas,
                                     th_seed, th_threads);
      write_or_print(theorem1_csv(rows), th_out);
      for (const auto& r : rows)
        if (r.failures != 0) return 1;
    } else if (*bd) {
      auto grid = parse_grid(bd_grid);
      auto pe = spb_curve(bd_n, bd_bits, bd_energy, bd_antennas, grid, bd_quad);
      std::string csv = "ebn0_db,pe_lower_bound\n";
      char buf[64];
      for (size_t i = 0; i < grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.10g,%.10g\n", grid[i], pe[i]);
        csv += buf;
      }
      write_or_print(csv, bd_out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericGuard& e) {
    std::cerr << "numerical guard: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace sparc
