#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sdft/estimators.hpp"
#include "sdft/signal.hpp"
#include "sdft/types.hpp"

namespace sdft {

/// Monte-Carlo grid: every (freq, snr, damping, estimator) combination is
/// one cell of `trials` independent trials. The proposed estimator runs on
/// spectra damped by the cell's damping value; candan and jacobsen always
/// run on undamped (r = 1) spectra, as baselines.
struct ExperimentSpec {
  int n_bins = 128;
  double sample_rate_hz = 128e6;
  std::vector<double> freq_list_hz = default_sweep_hz();
  std::vector<double> damping_list = {0.9};
  std::vector<double> snr_db_list = {2.0, 3.0, kNoNoiseDb};
  std::int64_t trials = 10000;
  std::uint64_t base_seed = 1;
  std::vector<Estimator> estimators = {Estimator::kProposed,
                                       Estimator::kCandan,
                                       Estimator::kJacobsen};
  bool randomize_phase = false;

  /// 30.1 MHz .. 30.9 MHz in 0.1 MHz steps.
  static std::vector<double> default_sweep_hz();

  /// Throws InvalidConfigError on hard errors (empty lists, trials < 1,
  /// values out of range). Returns one warning string per frequency whose
  /// true fine offset does not satisfy |delta| < 0.5 (those cells measure
  /// clamping behavior, not interpolation accuracy).
  std::vector<std::string> validate() const;
};

struct TrialStats {
  double freq_hz = 0.0;
  double snr_db = 0.0;
  double damping = 1.0;
  Estimator estimator = Estimator::kProposed;
  double mean_estimate_hz = 0.0;
  double bias_hz = 0.0;
  double rmse_hz = 0.0;
  std::int64_t clamp_count = 0;
  std::int64_t trials = 0;
};

struct TrialResult {
  double estimate_hz;
  bool clamped;
};

/// Deterministic per-trial seed: splitmix64 chain over the base seed, the
/// bit patterns of the cell coordinates, the estimator index and the trial
/// number. Distinct cells get disjoint streams.
std::uint64_t derive_trial_seed(std::uint64_t base_seed, double freq_hz,
                                double snr_db, double damping, Estimator est,
                                std::int64_t trial);

/// One trial: generate the tone, add noise, stream one window through a
/// fresh SlidingDft (damped for the proposed estimator, r = 1 otherwise),
/// estimate. Deterministic in `seed`.
TrialResult run_trial(double freq_hz, double snr_db, double damping,
                      Estimator est, std::uint64_t seed, int n_bins,
                      double sample_rate_hz, bool randomize_phase = false,
                      double tone_amplitude = 1.0);

/// Runs every cell of the grid. Cells are distributed over a thread pool;
/// trials within a cell run in seed order on one thread, so the result is
/// byte-for-byte reproducible regardless of thread count. Rows come back
/// sorted by (estimator name, damping, snr_db, freq_hz).
std::vector<TrialStats> run_experiment(const ExperimentSpec& spec);

/// CSV with header
///   freq_hz,snr_db,damping,estimator,mean_estimate_hz,bias_hz,rmse_hz,clamp_count,trials
/// floats printed as %.17g, no-noise snr_db printed as "inf". Rows are
/// emitted sorted by (estimator name, damping, snr_db, freq_hz).
void emit_csv(const std::vector<TrialStats>& stats, std::ostream& out);

/// key=value config, one per line; '#' comments and blank lines ignored.
/// Keys are the ExperimentSpec field names; list values are comma-separated;
/// snr_db_list accepts "none" or "inf" for the no-noise sentinel. Unknown
/// keys or unparseable values raise ConfigParseError naming the offender.
ExperimentSpec parse_experiment_config(std::istream& in);

}  // namespace sdft
