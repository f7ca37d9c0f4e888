#include "sdft/kernel.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace sdft {

Complex kernel_f(double alpha, int n_bins, double damping) {
  if (n_bins < 1) {
    throw InvalidConfigError("kernel_f: n_bins must be >= 1");
  }
  if (!(damping > 0.0) || damping > 1.0) {
    throw InvalidConfigError("kernel_f: damping must be in (0, 1], got " +
                             std::to_string(damping));
  }
  const double two_pi = 2.0 * std::numbers::pi;
  const Complex ratio = damping * std::polar(1.0, two_pi * alpha / n_bins);
  const Complex den = 1.0 - ratio;
  if (std::abs(den) <= 1e-12) {
    // At (or numerically at) the pole the geometric form is 0/0; sum the
    // series instead. r = 1, alpha = 0 gives exactly N.
    Complex acc = 0.0;
    Complex term = 1.0;
    for (int n = 0; n < n_bins; ++n) {
      acc += term;
      term *= ratio;
    }
    return acc;
  }
  const Complex ratio_pow_n =
      std::pow(damping, n_bins) * std::polar(1.0, two_pi * alpha);
  return (1.0 - ratio_pow_n) / den;
}

}  // namespace sdft
