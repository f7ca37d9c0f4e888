#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "sdft/bench.hpp"
#include "sdft/sliding_dft.hpp"

using sdft::Estimator;
using sdft::ExperimentSpec;
using sdft::TrialStats;
using sdft::kNoNoiseDb;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t p = s.find(sep, start);
    out.push_back(s.substr(start, p - start));
    if (p == std::string::npos) break;
    start = p + 1;
  }
  return out;
}

}  // namespace

TEST_CASE("default sweep and validation") {
  const auto freqs = ExperimentSpec::default_sweep_hz();
  REQUIRE(freqs.size() == 9);
  CHECK(freqs.front() == 30.1e6);
  CHECK(freqs.back() == 30.9e6);

  ExperimentSpec spec;
  const auto warnings = spec.validate();
  // 30.5 MHz sits exactly on a half-bin boundary of the default grid.
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("30500000") != std::string::npos);

  ExperimentSpec clean;
  clean.freq_list_hz = {30.1e6, 30.3e6};
  CHECK(clean.validate().empty());

  ExperimentSpec bad = spec;
  bad.trials = 0;
  CHECK_THROWS_AS(bad.validate(), sdft::InvalidConfigError);
  bad = spec;
  bad.estimators.clear();
  CHECK_THROWS_AS(bad.validate(), sdft::InvalidConfigError);
  bad = spec;
  bad.damping_list = {1.2};
  CHECK_THROWS_AS(bad.validate(), sdft::InvalidConfigError);
  bad = spec;
  bad.snr_db_list = {-kNoNoiseDb};
  CHECK_THROWS_AS(bad.validate(), sdft::InvalidConfigError);
}

TEST_CASE("trial seeds are stable, distinct and coordinate-sensitive") {
  using sdft::derive_trial_seed;
  const auto s0 =
      derive_trial_seed(1, 30.1e6, 3.0, 0.9, Estimator::kProposed, 0);
  CHECK(s0 == derive_trial_seed(1, 30.1e6, 3.0, 0.9, Estimator::kProposed, 0));
  CHECK(s0 != derive_trial_seed(2, 30.1e6, 3.0, 0.9, Estimator::kProposed, 0));
  CHECK(s0 != derive_trial_seed(1, 30.2e6, 3.0, 0.9, Estimator::kProposed, 0));
  CHECK(s0 != derive_trial_seed(1, 30.1e6, 2.0, 0.9, Estimator::kProposed, 0));
  CHECK(s0 != derive_trial_seed(1, 30.1e6, 3.0, 1.0, Estimator::kProposed, 0));
  CHECK(s0 != derive_trial_seed(1, 30.1e6, 3.0, 0.9, Estimator::kCandan, 0));

  std::set<std::uint64_t> seen;
  for (std::int64_t t = 0; t < 1000; ++t) {
    seen.insert(
        derive_trial_seed(1, 30.1e6, 3.0, 0.9, Estimator::kProposed, t));
  }
  CHECK(seen.size() == 1000);
}

TEST_CASE("single noiseless trials hit frozen accuracy marks") {
  using sdft::run_trial;
  const int n = 128;
  const double fs = 128e6;

  SUBCASE("exact bin") {
    const auto r = run_trial(30.0e6, kNoNoiseDb, 0.9, Estimator::kProposed, 1,
                             n, fs);
    CHECK(std::abs(r.estimate_hz - 30.0e6) < 1e-5);
    CHECK_FALSE(r.clamped);
  }

  SUBCASE("fractional offsets, frozen") {
    const auto a = run_trial(30.1e6, kNoNoiseDb, 0.9, Estimator::kProposed, 1,
                             n, fs);
    CHECK(std::abs(a.estimate_hz - 30.1e6) ==
          doctest::Approx(0.19912941195).epsilon(1e-4));
    const auto b = run_trial(30.4e6, kNoNoiseDb, 0.9, Estimator::kProposed, 1,
                             n, fs);
    CHECK(std::abs(b.estimate_hz - 30.4e6) ==
          doctest::Approx(12.7447371897).epsilon(1e-4));
  }

  SUBCASE("half-bin tone clamps to the boundary exactly") {
    const auto r = run_trial(30.5e6, kNoNoiseDb, 0.9, Estimator::kProposed, 1,
                             n, fs);
    CHECK(r.clamped);
    CHECK(r.estimate_hz == 30.5e6);
  }

  SUBCASE("baselines run on undamped spectra regardless of the damping cell") {
    // Reference: the same window analyzed with a one-shot direct DFT.
    sdft::ToneSpec tone;
    tone.freq_hz = 30.3e6;
    tone.sample_rate_hz = fs;
    tone.n_samples = n;
    const auto window = gen_tone(tone);
    const auto snap = direct_damped_dft(window, sdft::SdftConfig(n, 1.0));
    const auto want = estimate(snap, sdft::EstimatorParams{n, 1.0},
                               Estimator::kJacobsen, fs);
    const auto got = run_trial(30.3e6, kNoNoiseDb, 0.9, Estimator::kJacobsen,
                               1, n, fs);
    CHECK(std::abs(got.estimate_hz - *want.freq_hz) < 1e-4);
  }

  SUBCASE("phase randomization does not move noiseless estimates") {
    // A common phase factor cancels in the three-bin ratio.
    const auto fixed = run_trial(30.2e6, kNoNoiseDb, 0.9,
                                 Estimator::kProposed, 7, n, fs, false);
    const auto spun = run_trial(30.2e6, kNoNoiseDb, 0.9, Estimator::kProposed,
                                7, n, fs, true);
    CHECK(std::abs(fixed.estimate_hz - spun.estimate_hz) < 1e-5);
    const auto spun2 = run_trial(30.2e6, kNoNoiseDb, 0.9, Estimator::kProposed,
                                 7, n, fs, true);
    CHECK(spun.estimate_hz == spun2.estimate_hz);
  }
}

TEST_CASE("experiment runs are deterministic and match single trials") {
  ExperimentSpec spec;
  spec.freq_list_hz = {30.3e6};
  spec.snr_db_list = {3.0};
  spec.damping_list = {0.9};
  spec.estimators = {Estimator::kProposed};
  spec.trials = 1;
  spec.base_seed = 42;

  const auto stats = run_experiment(spec);
  REQUIRE(stats.size() == 1);
  const auto seed =
      derive_trial_seed(42, 30.3e6, 3.0, 0.9, Estimator::kProposed, 0);
  const auto single = sdft::run_trial(30.3e6, 3.0, 0.9, Estimator::kProposed,
                                      seed, spec.n_bins, spec.sample_rate_hz);
  CHECK(stats[0].mean_estimate_hz == single.estimate_hz);
  CHECK(stats[0].bias_hz == single.estimate_hz - 30.3e6);
  CHECK(stats[0].rmse_hz ==
        doctest::Approx(std::abs(stats[0].bias_hz)).epsilon(1e-15));
  CHECK(stats[0].clamp_count == (single.clamped ? 1 : 0));
  CHECK(stats[0].trials == 1);

  SUBCASE("two identical runs, identical bytes") {
    ExperimentSpec wide;
    wide.freq_list_hz = {30.2e6, 30.6e6};
    wide.snr_db_list = {2.0, kNoNoiseDb};
    wide.trials = 50;
    wide.base_seed = 99;
    const auto run1 = run_experiment(wide);
    const auto run2 = run_experiment(wide);
    REQUIRE(run1.size() == run2.size());
    for (std::size_t i = 0; i < run1.size(); ++i) {
      CHECK(run1[i].mean_estimate_hz == run2[i].mean_estimate_hz);
      CHECK(run1[i].bias_hz == run2[i].bias_hz);
      CHECK(run1[i].rmse_hz == run2[i].rmse_hz);
      CHECK(run1[i].clamp_count == run2[i].clamp_count);
    }
    std::ostringstream csv1;
    std::ostringstream csv2;
    emit_csv(run1, csv1);
    emit_csv(run2, csv2);
    CHECK(csv1.str() == csv2.str());
  }
}

TEST_CASE("CSV layout, ordering and round-trip") {
  ExperimentSpec spec;
  spec.freq_list_hz = {30.6e6, 30.2e6};  // deliberately unsorted
  spec.snr_db_list = {kNoNoiseDb, 2.0};
  spec.damping_list = {0.9};
  spec.estimators = {Estimator::kProposed, Estimator::kJacobsen,
                     Estimator::kCandan};
  spec.trials = 20;
  spec.base_seed = 7;

  const auto stats = run_experiment(spec);
  REQUIRE(stats.size() == 12);
  std::ostringstream out;
  emit_csv(stats, out);
  const auto lines = split(out.str(), '\n');
  REQUIRE(lines.size() == 14);  // header + 12 rows + trailing empty
  CHECK(lines[0] ==
        "freq_hz,snr_db,damping,estimator,mean_estimate_hz,bias_hz,rmse_hz,"
        "clamp_count,trials");
  CHECK(lines[13].empty());

  // Rows sorted by estimator name, then snr (no-noise last), then freq.
  const char* order[12][2] = {
      {"candan", "2"},   {"candan", "2"},   {"candan", "inf"},
      {"candan", "inf"}, {"jacobsen", "2"}, {"jacobsen", "2"},
      {"jacobsen", "inf"}, {"jacobsen", "inf"}, {"proposed", "2"},
      {"proposed", "2"}, {"proposed", "inf"}, {"proposed", "inf"}};
  for (int i = 0; i < 12; ++i) {
    const auto fields = split(lines[1 + i], ',');
    REQUIRE(fields.size() == 9);
    CHECK(fields[3] == order[i][0]);
    CHECK(fields[1] == order[i][1]);
    // %.17g round-trips exactly.
    CHECK(std::strtod(fields[0].c_str(), nullptr) == stats[i].freq_hz);
    CHECK(std::strtod(fields[4].c_str(), nullptr) ==
          stats[i].mean_estimate_hz);
    CHECK(std::strtod(fields[5].c_str(), nullptr) == stats[i].bias_hz);
    CHECK(std::strtod(fields[6].c_str(), nullptr) == stats[i].rmse_hz);
    CHECK(std::stoll(fields[7]) == stats[i].clamp_count);
    CHECK(std::stoll(fields[8]) == stats[i].trials);
    CHECK(stats[i].clamp_count <= stats[i].trials);
    CHECK(stats[i].rmse_hz >= std::abs(stats[i].bias_hz) - 1e-9);
    // Alternating freq order within each (estimator, snr) block.
    CHECK(std::strtod(fields[0].c_str(), nullptr) ==
          (i % 2 == 0 ? 30.2e6 : 30.6e6));
  }

  SUBCASE("empty stats emit just the header") {
    std::ostringstream empty;
    sdft::emit_csv({}, empty);
    CHECK(empty.str() ==
          "freq_hz,snr_db,damping,estimator,mean_estimate_hz,bias_hz,rmse_hz,"
          "clamp_count,trials\n");
  }
}

TEST_CASE("noise makes estimates worse, and vanishing noise recovers the bias") {
  // Deliberately away from the 30.5 MHz half-bin boundary, where the
  // coarse-peak tie makes the noiseless limit discontinuous.
  ExperimentSpec spec;
  spec.freq_list_hz = {30.1e6, 30.3e6, 30.7e6};
  spec.snr_db_list = {3.0, 20.0, 40.0, kNoNoiseDb};
  spec.trials = 600;
  spec.base_seed = 2024;

  const auto stats = run_experiment(spec);
  REQUIRE(stats.size() == 3 * 4 * 3);

  auto cell = [&](Estimator est, double snr, double freq) -> const TrialStats& {
    for (const auto& s : stats) {
      if (s.estimator == est && s.snr_db == snr && s.freq_hz == freq) return s;
    }
    REQUIRE(false);
    return stats[0];
  };

  for (Estimator est : {Estimator::kProposed, Estimator::kCandan,
                        Estimator::kJacobsen}) {
    for (double freq : spec.freq_list_hz) {
      const double snrs[] = {3.0, 20.0, 40.0, kNoNoiseDb};
      for (int i = 0; i + 1 < 4; ++i) {
        const auto& lo = cell(est, snrs[i], freq);
        const auto& hi = cell(est, snrs[i + 1], freq);
        const double slack =
            3.0 * (lo.rmse_hz + hi.rmse_hz) /
            std::sqrt(2.0 * static_cast<double>(spec.trials));
        CHECK(hi.rmse_hz <= lo.rmse_hz + slack);
      }
      const auto& at40 = cell(est, 40.0, freq);
      const auto& clean = cell(est, kNoNoiseDb, freq);
      const double var =
          std::max(0.0, at40.rmse_hz * at40.rmse_hz -
                            at40.bias_hz * at40.bias_hz);
      const double se =
          std::sqrt(var / static_cast<double>(spec.trials));
      CHECK(std::abs(at40.bias_hz - clean.bias_hz) <= 3.0 * se + 1e-6);
    }
  }
}

TEST_CASE("config parsing") {
  SUBCASE("full file") {
    std::istringstream in(
        "# comment line\n"
        "n_bins = 64\n"
        "sample_rate_hz = 64e6\n"
        "\n"
        "freq_list_hz = 15e6, 15.1e6\n"
        "damping_list = 0.8,0.95\n"
        "snr_db_list = 3, none\n"
        "trials = 7\n"
        "base_seed = 99\n"
        "estimators = proposed, jacobsen\n"
        "randomize_phase = true  # trailing comment\n");
    const auto spec = sdft::parse_experiment_config(in);
    CHECK(spec.n_bins == 64);
    CHECK(spec.sample_rate_hz == 64e6);
    REQUIRE(spec.freq_list_hz.size() == 2);
    CHECK(spec.freq_list_hz[1] == 15.1e6);
    REQUIRE(spec.damping_list.size() == 2);
    CHECK(spec.damping_list[0] == 0.8);
    REQUIRE(spec.snr_db_list.size() == 2);
    CHECK(spec.snr_db_list[0] == 3.0);
    CHECK(std::isinf(spec.snr_db_list[1]));
    CHECK(spec.trials == 7);
    CHECK(spec.base_seed == 99);
    REQUIRE(spec.estimators.size() == 2);
    CHECK(spec.estimators[0] == Estimator::kProposed);
    CHECK(spec.estimators[1] == Estimator::kJacobsen);
    CHECK(spec.randomize_phase);
  }

  SUBCASE("omitted keys keep their defaults") {
    std::istringstream in("trials = 5\n");
    const auto spec = sdft::parse_experiment_config(in);
    CHECK(spec.trials == 5);
    CHECK(spec.n_bins == 128);
    CHECK(spec.freq_list_hz == ExperimentSpec::default_sweep_hz());
    CHECK(spec.estimators.size() == 3);
  }

  SUBCASE("unknown keys are named") {
    std::istringstream in("n_bons = 4\nmystery = 1\n");
    try {
      sdft::parse_experiment_config(in);
      FAIL("expected ConfigParseError");
    } catch (const sdft::ConfigParseError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("n_bons") != std::string::npos);
      CHECK(msg.find("mystery") != std::string::npos);
    }
  }

  SUBCASE("malformed inputs are rejected") {
    std::istringstream no_eq("n_bins 64\n");
    CHECK_THROWS_AS(sdft::parse_experiment_config(no_eq),
                    sdft::ConfigParseError);
    std::istringstream bad_num("trials = soon\n");
    CHECK_THROWS_AS(sdft::parse_experiment_config(bad_num),
                    sdft::ConfigParseError);
    std::istringstream bad_est("estimators = proposed, quinn\n");
    CHECK_THROWS_AS(sdft::parse_experiment_config(bad_est),
                    sdft::ConfigParseError);
    std::istringstream bad_bool("randomize_phase = maybe\n");
    CHECK_THROWS_AS(sdft::parse_experiment_config(bad_bool),
                    sdft::ConfigParseError);
    std::istringstream bad_list("freq_list_hz = 1e6,,2e6\n");
    CHECK_THROWS_AS(sdft::parse_experiment_config(bad_list),
                    sdft::ConfigParseError);
  }
}
