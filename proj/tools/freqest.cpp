#include <bit>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sdft/bench.hpp"
#include "sdft/estimators.hpp"
#include "sdft/sliding_dft.hpp"

namespace {

using sdft::Complex;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_double(std::string_view text, double& out) {
  const std::string_view t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  return ec == std::errc{} && ptr == t.data() + t.size();
}

// Lines of "index,re,im". One leading header line is tolerated; anything
// undecodable after that is an error.
std::vector<Complex> read_csv_iq(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open input file: " + path);
  }
  std::vector<Complex> out;
  std::string line;
  int line_no = 0;
  bool seen_row = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view sv = trim(line);
    if (sv.empty()) continue;
    const std::size_t c1 = sv.find(',');
    const std::size_t c2 = c1 == std::string_view::npos
                               ? std::string_view::npos
                               : sv.find(',', c1 + 1);
    double re = 0.0;
    double im = 0.0;
    const bool ok = c2 != std::string_view::npos &&
                    parse_double(sv.substr(c1 + 1, c2 - c1 - 1), re) &&
                    parse_double(sv.substr(c2 + 1), im);
    if (!ok) {
      if (!seen_row && line_no == 1) continue;  // header
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": expected 'index,re,im'");
    }
    seen_row = true;
    out.emplace_back(re, im);
  }
  return out;
}

// Interleaved little-endian float64 re,im pairs, no framing.
std::vector<Complex> read_raw_f64le(const std::string& path) {
  static_assert(std::endian::native == std::endian::little,
                "raw-f64le-iq reader assumes a little-endian host");
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open input file: " + path);
  }
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  if (bytes.size() % 16 != 0) {
    throw std::runtime_error(path + ": raw-f64le-iq payload is " +
                             std::to_string(bytes.size()) +
                             " bytes, not a multiple of 16");
  }
  std::vector<Complex> out(bytes.size() / 16);
  std::memcpy(out.data(), bytes.data(), bytes.size());
  return out;
}

struct EstimateOptions {
  std::string input;
  std::string format = "csv-iq";
  double sample_rate_hz = 0.0;
  int n_bins = 128;
  double damping = 0.9;
  std::string estimator = "proposed";
};

int run_estimate(const EstimateOptions& opt) {
  const auto est = sdft::estimator_from_string(opt.estimator);
  if (!est) {
    throw std::runtime_error("unknown estimator: " + opt.estimator);
  }
  const std::vector<Complex> samples = opt.format == "csv-iq"
                                           ? read_csv_iq(opt.input)
                                           : read_raw_f64le(opt.input);
  if (std::cmp_less(samples.size(), opt.n_bins)) {
    throw std::runtime_error("need at least " + std::to_string(opt.n_bins) +
                             " samples, got " +
                             std::to_string(samples.size()));
  }
  sdft::SlidingDft dft(
      sdft::SdftConfig(opt.n_bins, opt.damping, std::nullopt));
  for (std::size_t i = samples.size() - opt.n_bins; i < samples.size(); ++i) {
    dft.push(samples[i]);
  }
  const sdft::EstimateResult res =
      sdft::estimate(dft.snapshot(),
                     sdft::EstimatorParams{opt.n_bins, opt.damping}, *est,
                     opt.sample_rate_hz);
  std::printf("%s,%d,%.17g,%.17g,%.17g,%d\n",
              std::string(sdft::to_string(*est)).c_str(), res.peak_index,
              res.delta, res.omega, *res.freq_hz, res.clamped ? 1 : 0);
  return 0;
}

struct BenchCli {
  std::string config_path;
  std::string output;
  bool use_defaults = false;
  bool randomize_phase = false;
  int n_bins = 0;
  double sample_rate_hz = 0.0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> freqs;
  std::vector<double> dampings;
  std::vector<std::string> snrs;
  std::vector<std::string> estimators;
  CLI::Option* config_o = nullptr;
  CLI::Option* nbins_o = nullptr;
  CLI::Option* fs_o = nullptr;
  CLI::Option* freqs_o = nullptr;
  CLI::Option* damp_o = nullptr;
  CLI::Option* snr_o = nullptr;
  CLI::Option* trials_o = nullptr;
  CLI::Option* seed_o = nullptr;
  CLI::Option* est_o = nullptr;
  CLI::Option* out_o = nullptr;
};

void add_bench_options(CLI::App* cmd, BenchCli& b) {
  b.config_o = cmd->add_option("--config", b.config_path,
                               "key=value experiment config file");
  auto* defaults_o = cmd->add_flag("--defaults", b.use_defaults,
                                   "run the built-in default grid");
  defaults_o->excludes(b.config_o);
  b.out_o = cmd->add_option("--output", b.output,
                            "write CSV here instead of stdout");
  b.nbins_o = cmd->add_option("--n-bins", b.n_bins, "window length");
  b.fs_o = cmd->add_option("--sample-rate", b.sample_rate_hz, "Hz");
  b.freqs_o =
      cmd->add_option("--freqs", b.freqs, "tone frequencies, Hz")
          ->delimiter(',');
  b.damp_o = cmd->add_option("--damping", b.dampings, "damping values")
                 ->delimiter(',');
  b.snr_o = cmd->add_option("--snr-db", b.snrs,
                            "SNR values in dB; 'none' disables noise")
                ->delimiter(',');
  b.trials_o = cmd->add_option("--trials", b.trials, "trials per cell");
  b.seed_o = cmd->add_option("--seed", b.seed, "base RNG seed");
  b.est_o = cmd->add_option("--estimators", b.estimators,
                            "proposed, candan, jacobsen")
                ->delimiter(',');
  cmd->add_flag("--randomize-phase", b.randomize_phase,
                "draw a uniform starting phase per trial");
}

int run_bench(const BenchCli& b, bool sweep) {
  sdft::ExperimentSpec spec;
  if (sweep) {
    spec.damping_list = {0.8, 0.9, 0.95, 0.99};
  }
  if (b.config_o->count() > 0) {
    std::ifstream f(b.config_path);
    if (!f) {
      throw std::runtime_error("cannot open config file: " + b.config_path);
    }
    spec = sdft::parse_experiment_config(f);
  }
  if (b.nbins_o->count() > 0) spec.n_bins = b.n_bins;
  if (b.fs_o->count() > 0) spec.sample_rate_hz = b.sample_rate_hz;
  if (b.freqs_o->count() > 0) spec.freq_list_hz = b.freqs;
  if (b.damp_o->count() > 0) spec.damping_list = b.dampings;
  if (b.snr_o->count() > 0) {
    spec.snr_db_list.clear();
    for (const std::string& s : b.snrs) {
      if (s == "none" || s == "inf") {
        spec.snr_db_list.push_back(sdft::kNoNoiseDb);
      } else {
        double v = 0.0;
        if (!parse_double(s, v)) {
          throw std::runtime_error("bad --snr-db value: " + s);
        }
        spec.snr_db_list.push_back(v);
      }
    }
  }
  if (b.trials_o->count() > 0) spec.trials = b.trials;
  if (b.seed_o->count() > 0) spec.base_seed = b.seed;
  if (b.est_o->count() > 0) {
    spec.estimators.clear();
    for (const std::string& name : b.estimators) {
      const auto est = sdft::estimator_from_string(name);
      if (!est) {
        throw std::runtime_error("unknown estimator: " + name);
      }
      spec.estimators.push_back(*est);
    }
  }
  spec.randomize_phase = b.randomize_phase;

  for (const std::string& w : spec.validate()) {
    std::fprintf(stderr, "warning: %s\n", w.c_str());
  }

  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<sdft::TrialStats> stats = sdft::run_experiment(spec);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  if (b.out_o->count() > 0) {
    std::ofstream out(b.output, std::ios::binary);
    if (!out) {
      throw std::runtime_error("cannot open output file: " + b.output);
    }
    sdft::emit_csv(stats, out);
    out.flush();
    if (!out) {
      throw std::runtime_error("failed while writing: " + b.output);
    }
  } else {
    sdft::emit_csv(stats, std::cout);
  }
  std::fprintf(stderr, "cells=%zu elapsed=%.2f s\n", stats.size(), elapsed);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sliding-DFT fine frequency estimation"};
  app.require_subcommand(1);

  EstimateOptions eopt;
  auto* est_cmd = app.add_subcommand(
      "estimate", "estimate the dominant tone frequency in an IQ capture");
  est_cmd->add_option("--input", eopt.input, "sample file")->required();
  est_cmd->add_option("--format", eopt.format, "csv-iq or raw-f64le-iq")
      ->check(CLI::IsMember({"csv-iq", "raw-f64le-iq"}));
  est_cmd->add_option("--sample-rate", eopt.sample_rate_hz, "Hz")
      ->required()
      ->check(CLI::PositiveNumber);
  est_cmd->add_option("--n-bins", eopt.n_bins, "window length");
  est_cmd->add_option("--damping", eopt.damping, "per-sample damping");
  est_cmd->add_option("--estimator", eopt.estimator,
                      "proposed, candan or jacobsen")
      ->check(CLI::IsMember({"proposed", "candan", "jacobsen"}));

  BenchCli bench_cli;
  BenchCli sweep_cli;
  auto* bench_cmd = app.add_subcommand(
      "bench", "Monte-Carlo bias/RMSE grid; CSV to stdout or --output");
  add_bench_options(bench_cmd, bench_cli);
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "bench over a damping grid (0.8, 0.9, 0.95, 0.99)");
  add_bench_options(sweep_cmd, sweep_cli);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (est_cmd->parsed()) return run_estimate(eopt);
    if (bench_cmd->parsed()) return run_bench(bench_cli, false);
    return run_bench(sweep_cli, true);
  } catch (const sdft::DegenerateSpectrumError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
