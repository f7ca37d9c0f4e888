#pragma once

#include <optional>
#include <string_view>

#include "sdft/types.hpp"

namespace sdft {

enum class Estimator { kProposed, kCandan, kJacobsen };

std::string_view to_string(Estimator est);
std::optional<Estimator> estimator_from_string(std::string_view name);

/// Window size and damping the spectrum under analysis was produced with.
/// Checked against the snapshot; ParamsMismatchError on disagreement.
struct EstimatorParams {
  int n_bins;
  double damping = 1.0;
};

/// Fine offset in bins, delta in [-0.5, 0.5]. `clamped` is set when the raw
/// three-bin ratio landed outside that interval and was clipped.
struct DeltaEstimate {
  double delta;
  bool clamped;
};

struct EstimateResult {
  int peak_index;
  double delta;
  double omega;  // 2 pi (peak_index + delta) / n_bins, rad/sample, unwrapped
  std::optional<double> freq_hz;  // wrapped into [0, sample_rate)
  Estimator estimator;
  bool clamped;
};

/// Index of the strongest bin by |.|^2; ties go to the lowest index.
/// Requires a valid (warmed-up) snapshot.
int coarse_peak(const SpectrumSnapshot& spectrum);

/// Three-bin estimator for damped spectra. With R = spectrum.bins, k = peak
/// and neighbors taken modulo N:
///
///   delta = (1+r)^2/(4r) * tan(pi/N)/(pi/N)
///           * Re[(R[k-1] - R[k+1]) / (2 R[k] - R[k-1] - R[k+1])]
///
/// The leading factor undoes the bias the damping introduces in the
/// three-bin ratio; at r = 1 it is exactly 1 and the estimator reduces to
/// estimate_delta_candan. Result clamped to [-0.5, 0.5]. Throws
/// DegenerateSpectrumError when the denominator vanishes (|den| < 1e-300).
DeltaEstimate estimate_delta_proposed(const SpectrumSnapshot& spectrum,
                                      int peak_index,
                                      const EstimatorParams& params);

/// Candan's estimator: tan(pi/N)/(pi/N) * Re[ratio]. Defined for undamped
/// spectra but applied to whatever snapshot it is given (only n_bins is
/// checked), so it can serve as an uncorrected baseline on damped data.
DeltaEstimate estimate_delta_candan(const SpectrumSnapshot& spectrum,
                                    int peak_index, int n_bins);

/// Jacobsen's estimator: the bare Re[ratio], no correction factor.
DeltaEstimate estimate_delta_jacobsen(const SpectrumSnapshot& spectrum,
                                      int peak_index);

/// Coarse peak + fine offset in one call. With a sample rate the absolute
/// frequency (peak + delta)/N * sample_rate is wrapped into [0, sample_rate).
EstimateResult estimate(const SpectrumSnapshot& spectrum,
                        const EstimatorParams& params, Estimator which,
                        std::optional<double> sample_rate_hz = std::nullopt);

}  // namespace sdft
