#pragma once

#include "sdft/types.hpp"

namespace sdft {

/// Damped DFT of a whole window by direct summation, oldest sample first:
///   bins[k] = sum_{p=0}^{N-1} window[p] * r^p * exp(-j 2 pi k p / N)
/// window.size() must equal config.n_bins. O(N^2); the reference that the
/// recursive update is measured against.
SpectrumSnapshot direct_damped_dft(const ComplexVector& window,
                                   const SdftConfig& config);

/// Sliding DFT with per-sample exponential damping.
///
/// After each push() the bins equal direct_damped_dft() of the current
/// window, so the damping is anchored to the window: the oldest retained
/// sample always has weight r^0 and the newest r^(N-1). The O(N) update that
/// advances this quantity is
///
///   bins[k] <- (bins[k] - oldest + r^N * newest) * exp(j 2 pi k / N) / r
///
/// whose pole sits at radius 1/r, so floating-point round-off in the state
/// grows by 1/r per push. Stability is guaranteed by policy instead of pole
/// placement: periodic resyncs (default every N pushes) recompute the state
/// from the stored window, so on a long stream the round-off amplification
/// is bounded by (1/r)^resync_interval. The default interval suits damping
/// near 1 (at r = 0.9, N = 128 that bound is ~7e5 on eps-scale noise, i.e.
/// ~1e-10 relative); for aggressive damping shorten the interval, or feed
/// whole windows into a fresh instance, which never drifts because errors
/// born during a warm-up window are damped exactly as fast as they are
/// amplified. At r = 1 this is the classical sliding DFT and the update is
/// marginally stable on its own.
class SlidingDft {
 public:
  explicit SlidingDft(SdftConfig config);

  /// Advances the window by one sample and updates every bin in O(N).
  void push(Complex x);

  /// Recomputes all bins from the stored window, discarding accumulated
  /// round-off. Delay line and sample count are untouched. Safe to call at
  /// any time; push() calls it automatically every resync_interval samples.
  void resync();

  [[nodiscard]] SpectrumSnapshot snapshot() const;

  /// True once n_bins samples have been pushed.
  [[nodiscard]] bool warmed_up() const {
    return samples_seen_ >= config_.n_bins;
  }
  [[nodiscard]] std::int64_t samples_seen() const { return samples_seen_; }
  [[nodiscard]] const SdftConfig& config() const { return config_; }

  /// Current window, oldest sample first. Zero-filled until warmed up.
  [[nodiscard]] ComplexVector window() const;

 private:
  SdftConfig config_;
  ComplexVector bins_;
  ComplexVector twiddles_;  // exp(j 2 pi k / N) / r
  ComplexVector delay_;     // ring buffer; head_ indexes the oldest sample
  Eigen::Index head_ = 0;
  std::int64_t samples_seen_ = 0;
  double damping_pow_n_;  // r^N
};

}  // namespace sdft
