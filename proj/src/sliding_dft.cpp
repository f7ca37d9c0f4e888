#include "sdft/sliding_dft.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace sdft {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void SdftConfig::validate() const {
  if (n_bins < 4) {
    throw InvalidConfigError("n_bins must be >= 4, got " +
                             std::to_string(n_bins));
  }
  if (!(damping > 0.0) || damping > 1.0) {
    throw InvalidConfigError("damping must be in (0, 1], got " +
                             std::to_string(damping));
  }
  if (resync_interval && *resync_interval < 1) {
    throw InvalidConfigError("resync_interval must be >= 1, got " +
                             std::to_string(*resync_interval));
  }
}

SpectrumSnapshot direct_damped_dft(const ComplexVector& window,
                                   const SdftConfig& config) {
  config.validate();
  const int n = config.n_bins;
  if (window.size() != n) {
    throw LengthMismatchError("window has " + std::to_string(window.size()) +
                              " samples, config expects " + std::to_string(n));
  }

  ComplexVector weighted(n);
  double w = 1.0;
  for (int p = 0; p < n; ++p) {
    weighted[p] = window[p] * w;
    w *= config.damping;
  }
  // One shared twiddle table; exponent k*p reduced mod N.
  ComplexVector roots(n);
  for (int m = 0; m < n; ++m) {
    roots[m] = std::polar(1.0, -kTwoPi * m / n);
  }

  SpectrumSnapshot out;
  out.bins.resize(n);
  out.n_bins = n;
  out.damping = config.damping;
  out.samples_seen = n;
  out.valid = true;
  for (int k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (int p = 0; p < n; ++p) {
      acc += weighted[p] * roots[(static_cast<std::int64_t>(k) * p) % n];
    }
    out.bins[k] = acc;
  }
  return out;
}

SlidingDft::SlidingDft(SdftConfig config) : config_(config) {
  config_.validate();
  const int n = config_.n_bins;
  const double r = config_.damping;
  bins_ = ComplexVector::Zero(n);
  delay_ = ComplexVector::Zero(n);
  twiddles_.resize(n);
  for (int k = 0; k < n; ++k) {
    twiddles_[k] = std::polar(1.0 / r, kTwoPi * k / n);
  }
  damping_pow_n_ = std::pow(r, n);
}

void SlidingDft::push(Complex x) {
  // Comb term is bin-independent: the evicted sample leaves with weight r^0,
  // the new one enters with r^N and the twiddle rotation divides everything
  // by r, landing the window back on weights r^0..r^(N-1).
  const Complex comb = damping_pow_n_ * x - delay_[head_];
  bins_ = ((bins_.array() + comb) * twiddles_.array()).matrix();
  delay_[head_] = x;
  head_ = (head_ + 1) % config_.n_bins;
  ++samples_seen_;
  if (config_.resync_interval &&
      samples_seen_ % *config_.resync_interval == 0) {
    resync();
  }
}

void SlidingDft::resync() { bins_ = direct_damped_dft(window(), config_).bins; }

SpectrumSnapshot SlidingDft::snapshot() const {
  SpectrumSnapshot out;
  out.bins = bins_;
  out.n_bins = config_.n_bins;
  out.damping = config_.damping;
  out.samples_seen = samples_seen_;
  out.valid = warmed_up();
  return out;
}

ComplexVector SlidingDft::window() const {
  const Eigen::Index n = config_.n_bins;
  ComplexVector out(n);
  for (Eigen::Index p = 0; p < n; ++p) {
    out[p] = delay_[(head_ + p) % n];
  }
  return out;
}

}  // namespace sdft
