#pragma once

#include <cstdint>
#include <limits>

#include "sdft/types.hpp"

namespace sdft {

// snr_db value meaning "no noise at all" (not merely very high SNR).
inline constexpr double kNoNoiseDb = std::numeric_limits<double>::infinity();

struct ToneSpec {
  double amplitude = 1.0;
  double freq_hz = 0.0;  // wrapped into [0, sample_rate_hz)
  double sample_rate_hz = 1.0;
  double phase0 = 0.0;  // radians
  Eigen::Index n_samples = 0;
};

/// samples[t] = amplitude * exp(j (2 pi f/fs t + phase0)).
ComplexVector gen_tone(const ToneSpec& tone);

struct NoiseSpec {
  double snr_db = kNoNoiseDb;
  std::uint64_t seed = 0;
};

/// Adds circular complex AWGN sized so that a tone of `tone_amplitude` sits
/// at snr_db above the noise: total noise power amplitude^2 * 10^(-snr/10),
/// split evenly between the quadratures. Same seed, same bytes, on every
/// platform (mt19937_64 + Box-Muller, no library distributions involved).
/// snr_db = kNoNoiseDb returns the input unchanged.
ComplexVector add_awgn(const ComplexVector& samples, double tone_amplitude,
                       const NoiseSpec& noise);

}  // namespace sdft
