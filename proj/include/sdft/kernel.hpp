#pragma once

#include "sdft/types.hpp"

namespace sdft {

/// Damped Dirichlet-style interpolation kernel
///   f(alpha) = sum_{n=0}^{N-1} r^n * exp(j 2 pi alpha n / N),
/// evaluated in closed form (1 - r^N) / (1 - r exp(j 2 pi alpha / N)) away
/// from the pole and by explicit summation when |1 - r exp(j 2 pi alpha/N)|
/// <= 1e-12 (which covers r = 1, alpha = 0 mod N, where f = N).
///
/// A window-anchored damped tone at bin position k0 + delta has spectrum
/// bins[k] = A * f(k0 + delta - k); the three-bin estimators interpolate
/// samples of this kernel.
Complex kernel_f(double alpha, int n_bins, double damping);

}  // namespace sdft
