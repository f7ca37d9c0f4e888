#include "sdft/estimators.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace sdft {

namespace {

constexpr double kPi = std::numbers::pi;

void require_valid(const SpectrumSnapshot& s) {
  if (!s.valid) {
    throw NotWarmedUpError(
        "spectrum is not valid; the window is still zero-filled (saw " +
        std::to_string(s.samples_seen) + " of " + std::to_string(s.n_bins) +
        " samples)");
  }
  if (s.bins.size() != s.n_bins || s.n_bins < 4) {
    throw LengthMismatchError("malformed spectrum snapshot");
  }
}

void require_peak_in_range(int peak_index, int n) {
  if (peak_index < 0 || peak_index >= n) {
    throw LengthMismatchError("peak index " + std::to_string(peak_index) +
                              " out of range for " + std::to_string(n) +
                              " bins");
  }
}

// Re[(R[k-1] - R[k+1]) / (2 R[k] - R[k-1] - R[k+1])], neighbors modulo N.
double three_bin_ratio(const SpectrumSnapshot& s, int peak_index) {
  const int n = s.n_bins;
  const Complex left = s.bins[(peak_index + n - 1) % n];
  const Complex centre = s.bins[peak_index];
  const Complex right = s.bins[(peak_index + 1) % n];
  const Complex den = 2.0 * centre - left - right;
  if (std::abs(den) < 1e-300) {
    throw DegenerateSpectrumError(
        "three-bin denominator vanished at peak bin " +
        std::to_string(peak_index));
  }
  return ((left - right) / den).real();
}

DeltaEstimate clamp_delta(double raw) {
  if (raw > 0.5) return {0.5, true};
  if (raw < -0.5) return {-0.5, true};
  return {raw, false};
}

double tan_correction(int n) { return std::tan(kPi / n) / (kPi / n); }

double damping_correction(double r) { return (1.0 + r) * (1.0 + r) / (4.0 * r); }

// Shared core so that proposed at r = 1 and candan are the same instruction
// stream, bit for bit.
DeltaEstimate corrected_three_bin(const SpectrumSnapshot& s, int peak_index,
                                  int n, double damping) {
  return clamp_delta(damping_correction(damping) * tan_correction(n) *
                     three_bin_ratio(s, peak_index));
}

}  // namespace

std::string_view to_string(Estimator est) {
  switch (est) {
    case Estimator::kProposed:
      return "proposed";
    case Estimator::kCandan:
      return "candan";
    case Estimator::kJacobsen:
      return "jacobsen";
  }
  return "unknown";
}

std::optional<Estimator> estimator_from_string(std::string_view name) {
  if (name == "proposed") return Estimator::kProposed;
  if (name == "candan") return Estimator::kCandan;
  if (name == "jacobsen") return Estimator::kJacobsen;
  return std::nullopt;
}

int coarse_peak(const SpectrumSnapshot& spectrum) {
  require_valid(spectrum);
  int best = 0;
  double best_power = spectrum.bins[0].real() * spectrum.bins[0].real() +
                      spectrum.bins[0].imag() * spectrum.bins[0].imag();
  for (int k = 1; k < spectrum.n_bins; ++k) {
    const double power = spectrum.bins[k].real() * spectrum.bins[k].real() +
                         spectrum.bins[k].imag() * spectrum.bins[k].imag();
    if (power > best_power) {
      best = k;
      best_power = power;
    }
  }
  return best;
}

DeltaEstimate estimate_delta_proposed(const SpectrumSnapshot& spectrum,
                                      int peak_index,
                                      const EstimatorParams& params) {
  require_valid(spectrum);
  require_peak_in_range(peak_index, spectrum.n_bins);
  if (params.n_bins != spectrum.n_bins) {
    throw ParamsMismatchError("params.n_bins " + std::to_string(params.n_bins) +
                              " != spectrum n_bins " +
                              std::to_string(spectrum.n_bins));
  }
  if (params.damping != spectrum.damping) {
    throw ParamsMismatchError(
        "params.damping " + std::to_string(params.damping) +
        " != spectrum damping " + std::to_string(spectrum.damping));
  }
  return corrected_three_bin(spectrum, peak_index, params.n_bins,
                             params.damping);
}

DeltaEstimate estimate_delta_candan(const SpectrumSnapshot& spectrum,
                                    int peak_index, int n_bins) {
  require_valid(spectrum);
  require_peak_in_range(peak_index, spectrum.n_bins);
  if (n_bins != spectrum.n_bins) {
    throw ParamsMismatchError("n_bins " + std::to_string(n_bins) +
                              " != spectrum n_bins " +
                              std::to_string(spectrum.n_bins));
  }
  return corrected_three_bin(spectrum, peak_index, n_bins, 1.0);
}

DeltaEstimate estimate_delta_jacobsen(const SpectrumSnapshot& spectrum,
                                      int peak_index) {
  require_valid(spectrum);
  require_peak_in_range(peak_index, spectrum.n_bins);
  return clamp_delta(three_bin_ratio(spectrum, peak_index));
}

EstimateResult estimate(const SpectrumSnapshot& spectrum,
                        const EstimatorParams& params, Estimator which,
                        std::optional<double> sample_rate_hz) {
  require_valid(spectrum);
  if (params.n_bins != spectrum.n_bins) {
    throw ParamsMismatchError("params.n_bins " + std::to_string(params.n_bins) +
                              " != spectrum n_bins " +
                              std::to_string(spectrum.n_bins));
  }
  const int peak = coarse_peak(spectrum);
  DeltaEstimate fine{};
  switch (which) {
    case Estimator::kProposed:
      fine = estimate_delta_proposed(spectrum, peak, params);
      break;
    case Estimator::kCandan:
      fine = estimate_delta_candan(spectrum, peak, params.n_bins);
      break;
    case Estimator::kJacobsen:
      fine = estimate_delta_jacobsen(spectrum, peak);
      break;
  }
  EstimateResult out;
  out.peak_index = peak;
  out.delta = fine.delta;
  out.omega = 2.0 * kPi * (peak + fine.delta) / params.n_bins;
  out.estimator = which;
  out.clamped = fine.clamped;
  if (sample_rate_hz) {
    if (!(*sample_rate_hz > 0.0)) {
      throw InvalidConfigError("sample_rate_hz must be > 0");
    }
    double f = (peak + fine.delta) / params.n_bins * *sample_rate_hz;
    f = std::fmod(f, *sample_rate_hz);
    if (f < 0.0) f += *sample_rate_hz;
    out.freq_hz = f;
  }
  return out;
}

}  // namespace sdft
