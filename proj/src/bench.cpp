#include "sdft/bench.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>
#include <tuple>

#include "sdft/sliding_dft.hpp"

namespace sdft {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t bits_of(double v) { return std::bit_cast<std::uint64_t>(v); }

// Sort key shared by run_experiment and emit_csv.
bool stats_row_less(const TrialStats& a, const TrialStats& b) {
  return std::make_tuple(to_string(a.estimator), a.damping, a.snr_db,
                         a.freq_hz) < std::make_tuple(to_string(b.estimator),
                                                      b.damping, b.snr_db,
                                                      b.freq_hz);
}

void append_g17(std::string& s, double v) {
  if (std::isinf(v)) {
    s += v > 0 ? "inf" : "-inf";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  s += buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_double_or_throw(std::string_view text, const std::string& where) {
  const std::string_view t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size()) {
    throw ConfigParseError(where + ": cannot parse '" + std::string(t) +
                           "' as a number");
  }
  return v;
}

template <typename Int>
Int parse_int_or_throw(std::string_view text, const std::string& where) {
  const std::string_view t = trim(text);
  Int v{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size()) {
    throw ConfigParseError(where + ": cannot parse '" + std::string(t) +
                           "' as an integer");
  }
  return v;
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    out.push_back(trim(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_snr_or_throw(std::string_view item, const std::string& where) {
  if (item == "none" || item == "inf") return kNoNoiseDb;
  return parse_double_or_throw(item, where);
}

struct Cell {
  double freq_hz;
  double snr_db;
  double damping;
  Estimator estimator;
};

TrialStats run_cell(const Cell& cell, const ExperimentSpec& spec) {
  // Accumulate estimate - freq rather than the raw estimates: the errors
  // are a few Hz against carriers of tens of MHz, and summing the raw
  // values would throw away most of the error's mantissa.
  double sum_err = 0.0;
  double sum_sq_err = 0.0;
  std::int64_t clamps = 0;
  for (std::int64_t t = 0; t < spec.trials; ++t) {
    const std::uint64_t seed = derive_trial_seed(
        spec.base_seed, cell.freq_hz, cell.snr_db, cell.damping,
        cell.estimator, t);
    const TrialResult res =
        run_trial(cell.freq_hz, cell.snr_db, cell.damping, cell.estimator,
                  seed, spec.n_bins, spec.sample_rate_hz,
                  spec.randomize_phase);
    const double err = res.estimate_hz - cell.freq_hz;
    sum_err += err;
    sum_sq_err += err * err;
    clamps += res.clamped ? 1 : 0;
  }
  TrialStats stats;
  stats.freq_hz = cell.freq_hz;
  stats.snr_db = cell.snr_db;
  stats.damping = cell.damping;
  stats.estimator = cell.estimator;
  stats.bias_hz = sum_err / static_cast<double>(spec.trials);
  stats.mean_estimate_hz = cell.freq_hz + stats.bias_hz;
  stats.rmse_hz = std::sqrt(sum_sq_err / static_cast<double>(spec.trials));
  stats.clamp_count = clamps;
  stats.trials = spec.trials;
  return stats;
}

}  // namespace

std::vector<double> ExperimentSpec::default_sweep_hz() {
  std::vector<double> out;
  out.reserve(9);
  for (int i = 0; i < 9; ++i) {
    // (301 + i) * 1e5 is exact in binary64, so the list is reproducible.
    out.push_back(static_cast<double>(301 + i) * 1e5);
  }
  return out;
}

std::vector<std::string> ExperimentSpec::validate() const {
  if (n_bins < 4) {
    throw InvalidConfigError("n_bins must be >= 4");
  }
  if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz)) {
    throw InvalidConfigError("sample_rate_hz must be finite and > 0");
  }
  if (trials < 1) {
    throw InvalidConfigError("trials must be >= 1");
  }
  if (freq_list_hz.empty() || damping_list.empty() || snr_db_list.empty() ||
      estimators.empty()) {
    throw InvalidConfigError(
        "freq_list_hz, damping_list, snr_db_list and estimators must all be "
        "non-empty");
  }
  for (double f : freq_list_hz) {
    if (!std::isfinite(f)) {
      throw InvalidConfigError("frequencies must be finite");
    }
  }
  for (double r : damping_list) {
    if (!(r > 0.0) || r > 1.0) {
      throw InvalidConfigError("damping values must be in (0, 1]");
    }
  }
  for (double s : snr_db_list) {
    if (std::isnan(s) || s == -kNoNoiseDb) {
      throw InvalidConfigError("snr_db values must be finite or +inf");
    }
  }

  std::vector<std::string> warnings;
  for (double f : freq_list_hz) {
    double pos = std::fmod(f, sample_rate_hz);
    if (pos < 0.0) pos += sample_rate_hz;
    pos = pos / sample_rate_hz * n_bins;
    const double delta = pos - std::round(pos);
    if (!(std::abs(delta) < 0.5)) {
      std::string w = "frequency ";
      append_g17(w, f);
      w += " Hz lies exactly halfway between bins (|delta| = 0.5); fine "
           "estimates there saturate the clamp";
      warnings.push_back(std::move(w));
    }
  }
  return warnings;
}

std::uint64_t derive_trial_seed(std::uint64_t base_seed, double freq_hz,
                                double snr_db, double damping, Estimator est,
                                std::int64_t trial) {
  std::uint64_t h = mix64(base_seed);
  h = mix64(h ^ bits_of(freq_hz));
  h = mix64(h ^ bits_of(snr_db));
  h = mix64(h ^ bits_of(damping));
  h = mix64(h ^ static_cast<std::uint64_t>(est));
  h = mix64(h ^ static_cast<std::uint64_t>(trial));
  return h;
}

TrialResult run_trial(double freq_hz, double snr_db, double damping,
                      Estimator est, std::uint64_t seed, int n_bins,
                      double sample_rate_hz, bool randomize_phase,
                      double tone_amplitude) {
  double phase = 0.0;
  if (randomize_phase) {
    // Separate stream so the noise draw is unchanged by the phase switch.
    std::mt19937_64 prng(mix64(seed ^ 0x7068617365ull));
    phase = kTwoPi * std::ldexp(static_cast<double>(prng() >> 11), -53);
  }
  ToneSpec tone;
  tone.amplitude = tone_amplitude;
  tone.freq_hz = freq_hz;
  tone.sample_rate_hz = sample_rate_hz;
  tone.phase0 = phase;
  tone.n_samples = n_bins;
  ComplexVector x = gen_tone(tone);
  if (!std::isinf(snr_db)) {
    x = add_awgn(x, tone_amplitude, NoiseSpec{snr_db, seed});
  }
  // Baseline estimators analyze the ordinary (undamped) DFT of the window.
  const double r_eff = est == Estimator::kProposed ? damping : 1.0;
  SlidingDft dft(SdftConfig(n_bins, r_eff, std::nullopt));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    dft.push(x[i]);
  }
  const EstimateResult res = estimate(
      dft.snapshot(), EstimatorParams{n_bins, r_eff}, est, sample_rate_hz);
  return TrialResult{*res.freq_hz, res.clamped};
}

std::vector<TrialStats> run_experiment(const ExperimentSpec& spec) {
  spec.validate();

  auto estimators = spec.estimators;
  std::sort(estimators.begin(), estimators.end(),
            [](Estimator a, Estimator b) { return to_string(a) < to_string(b); });
  auto dampings = spec.damping_list;
  std::sort(dampings.begin(), dampings.end());
  auto snrs = spec.snr_db_list;
  std::sort(snrs.begin(), snrs.end());
  auto freqs = spec.freq_list_hz;
  std::sort(freqs.begin(), freqs.end());

  std::vector<Cell> cells;
  cells.reserve(estimators.size() * dampings.size() * snrs.size() *
                freqs.size());
  for (Estimator est : estimators) {
    for (double r : dampings) {
      for (double snr : snrs) {
        for (double f : freqs) {
          cells.push_back(Cell{f, snr, r, est});
        }
      }
    }
  }

  std::vector<TrialStats> out(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&cells, &out, &spec, &next] {
    for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) {
      out[i] = run_cell(cells[i], spec);
    }
  };
  const std::size_t n_threads =
      std::min<std::size_t>(cells.size(),
                            std::max(1u, std::thread::hardware_concurrency()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t i = 0; i < n_threads; ++i) {
      pool.emplace_back(worker);
    }
  }
  return out;
}

void emit_csv(const std::vector<TrialStats>& stats, std::ostream& out) {
  auto rows = stats;
  std::stable_sort(rows.begin(), rows.end(), stats_row_less);
  std::string text =
      "freq_hz,snr_db,damping,estimator,mean_estimate_hz,bias_hz,rmse_hz,"
      "clamp_count,trials\n";
  for (const TrialStats& row : rows) {
    append_g17(text, row.freq_hz);
    text += ',';
    append_g17(text, row.snr_db);
    text += ',';
    append_g17(text, row.damping);
    text += ',';
    text += to_string(row.estimator);
    text += ',';
    append_g17(text, row.mean_estimate_hz);
    text += ',';
    append_g17(text, row.bias_hz);
    text += ',';
    append_g17(text, row.rmse_hz);
    text += ',';
    text += std::to_string(row.clamp_count);
    text += ',';
    text += std::to_string(row.trials);
    text += '\n';
  }
  out << text;
}

ExperimentSpec parse_experiment_config(std::istream& in) {
  ExperimentSpec spec;
  std::vector<std::string> unknown;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = line;
    if (const auto hash = sv.find('#'); hash != std::string_view::npos) {
      sv = sv.substr(0, hash);
    }
    sv = trim(sv);
    if (sv.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);

    const std::size_t eq = sv.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigParseError(where + ": expected key=value, got '" +
                             std::string(sv) + "'");
    }
    const std::string key{trim(sv.substr(0, eq))};
    const std::string_view value = trim(sv.substr(eq + 1));

    if (key == "n_bins") {
      spec.n_bins = parse_int_or_throw<int>(value, where);
    } else if (key == "sample_rate_hz") {
      spec.sample_rate_hz = parse_double_or_throw(value, where);
    } else if (key == "freq_list_hz") {
      spec.freq_list_hz.clear();
      for (auto item : split_list(value)) {
        spec.freq_list_hz.push_back(parse_double_or_throw(item, where));
      }
    } else if (key == "damping_list") {
      spec.damping_list.clear();
      for (auto item : split_list(value)) {
        spec.damping_list.push_back(parse_double_or_throw(item, where));
      }
    } else if (key == "snr_db_list") {
      spec.snr_db_list.clear();
      for (auto item : split_list(value)) {
        spec.snr_db_list.push_back(parse_snr_or_throw(item, where));
      }
    } else if (key == "trials") {
      spec.trials = parse_int_or_throw<std::int64_t>(value, where);
    } else if (key == "base_seed") {
      spec.base_seed = parse_int_or_throw<std::uint64_t>(value, where);
    } else if (key == "estimators") {
      spec.estimators.clear();
      for (auto item : split_list(value)) {
        const auto est = estimator_from_string(item);
        if (!est) {
          throw ConfigParseError(where + ": unknown estimator '" +
                                 std::string(item) + "'");
        }
        spec.estimators.push_back(*est);
      }
    } else if (key == "randomize_phase") {
      if (value == "true" || value == "1") {
        spec.randomize_phase = true;
      } else if (value == "false" || value == "0") {
        spec.randomize_phase = false;
      } else {
        throw ConfigParseError(where + ": randomize_phase must be true/false");
      }
    } else {
      unknown.push_back(key);
    }
  }
  if (!unknown.empty()) {
    std::string msg = "unknown keys:";
    for (const auto& k : unknown) {
      msg += ' ';
      msg += k;
    }
    throw ConfigParseError(msg);
  }
  return spec;
}

}  // namespace sdft
