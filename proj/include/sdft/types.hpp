#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace sdft {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;

struct InvalidConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct LengthMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Estimator parameters do not match the spectrum they are applied to.
struct ParamsMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Spectrum requested before n_bins samples have been pushed.
struct NotWarmedUpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Three-bin interpolation denominator vanished (e.g. all-zero spectrum).
struct DegenerateSpectrumError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parameters of one damped sliding-DFT filter bank.
///
/// The bank tracks, for every bin k, the damped DFT of the most recent
/// n_bins samples with the OLDEST sample carrying weight damping^0 and the
/// newest damping^(n_bins-1):
///
///   bins[k] = sum_{p=0}^{N-1} window[p] * damping^p * exp(-j 2 pi k p / N)
///
/// damping = 1 is the ordinary DFT of the window.
struct SdftConfig {
  int n_bins;
  double damping;
  // Recompute the bins from the stored window every this many pushes,
  // discarding accumulated round-off. nullopt disables resyncing entirely;
  // the two-argument constructor defaults it to n_bins (one full window
  // turnover), which keeps the recursion exact to ~n_bins * eps.
  std::optional<std::int64_t> resync_interval;

  SdftConfig(int n, double r) : n_bins(n), damping(r), resync_interval(n) {}
  SdftConfig(int n, double r, std::optional<std::int64_t> resync)
      : n_bins(n), damping(r), resync_interval(resync) {}

  /// Throws InvalidConfigError unless n_bins >= 4, damping in (0, 1] and
  /// resync_interval (when set) >= 1.
  void validate() const;
};

/// One frame of spectrum as produced by SlidingDft::snapshot() or
/// direct_damped_dft(). `valid` is false until a full window of real samples
/// has been seen (the warm-up window is zero-filled).
struct SpectrumSnapshot {
  ComplexVector bins;
  int n_bins = 0;
  double damping = 1.0;
  std::int64_t samples_seen = 0;
  bool valid = false;
};

}  // namespace sdft
