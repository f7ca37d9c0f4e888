#include "sdft/signal.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace sdft {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Top 53 bits of the engine output, uniform on [0, 1).
double uniform53(std::mt19937_64& rng) {
  return std::ldexp(static_cast<double>(rng() >> 11), -53);
}
}  // namespace

ComplexVector gen_tone(const ToneSpec& tone) {
  if (!(tone.sample_rate_hz > 0.0)) {
    throw InvalidConfigError("gen_tone: sample_rate_hz must be > 0");
  }
  if (tone.n_samples < 1) {
    throw InvalidConfigError("gen_tone: n_samples must be >= 1, got " +
                             std::to_string(tone.n_samples));
  }
  if (!(tone.amplitude >= 0.0) || !std::isfinite(tone.amplitude) ||
      !std::isfinite(tone.freq_hz) || !std::isfinite(tone.phase0)) {
    throw InvalidConfigError("gen_tone: amplitude/freq/phase must be finite");
  }
  double f = std::fmod(tone.freq_hz, tone.sample_rate_hz);
  if (f < 0.0) f += tone.sample_rate_hz;
  const double omega = kTwoPi * f / tone.sample_rate_hz;

  ComplexVector out(tone.n_samples);
  for (Eigen::Index t = 0; t < tone.n_samples; ++t) {
    out[t] = std::polar(tone.amplitude, omega * static_cast<double>(t) +
                                            tone.phase0);
  }
  return out;
}

ComplexVector add_awgn(const ComplexVector& samples, double tone_amplitude,
                       const NoiseSpec& noise) {
  if (!(tone_amplitude > 0.0)) {
    throw InvalidConfigError("add_awgn: tone_amplitude must be > 0");
  }
  if (noise.snr_db == kNoNoiseDb) {
    return samples;
  }
  if (!std::isfinite(noise.snr_db)) {
    throw InvalidConfigError("add_awgn: snr_db must be finite or +inf");
  }
  // Total complex noise power; half per quadrature.
  const double noise_power =
      tone_amplitude * tone_amplitude * std::pow(10.0, -noise.snr_db / 10.0);
  const double sigma_q = std::sqrt(noise_power / 2.0);

  std::mt19937_64 rng(noise.seed);
  ComplexVector out(samples.size());
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    // Box-Muller; one u-pair yields both quadratures. log1p(-u1) keeps the
    // argument away from log(0) since u1 < 1 exactly.
    const double u1 = uniform53(rng);
    const double u2 = uniform53(rng);
    const double radius = std::sqrt(-2.0 * std::log1p(-u1));
    const double angle = kTwoPi * u2;
    out[i] = samples[i] + Complex(sigma_q * radius * std::cos(angle),
                                  sigma_q * radius * std::sin(angle));
  }
  return out;
}

}  // namespace sdft
