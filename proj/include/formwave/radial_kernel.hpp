#pragma once

#include <complex>
#include <vector>

namespace formwave {

/// phi(t) = scale * exp(i k t) * sum_{m=0..ell} beta[m] k^(ell-m) t^-(ell+m+1).
///
/// Elementary form of the odd-dimension Helmholtz fundamental solution profile with
/// wavenumber k. All powers of k are non-negative, so it stays well conditioned as
/// k -> 0.
struct RadialProfile {
  std::complex<double> wavenumber;
  double scale = 1.0;
  int ell = 0;
  std::vector<std::complex<double>> beta;

  void evaluate(double t, std::complex<double>& value, std::complex<double>& derivative) const {
    const std::complex<double> ik{-wavenumber.imag(), wavenumber.real()};
    const double inv_t = 1.0 / t;
    double tp = inv_t;
    for (int j = 0; j < 2 * ell; ++j) tp *= inv_t;  // t^-(2 ell + 1)
    std::complex<double> kpow = 1.0;
    std::complex<double> sum = 0.0;
    std::complex<double> dsum = 0.0;
    for (int m = ell; m >= 0; --m) {
      const std::complex<double> term = beta[m] * kpow * tp;
      sum += term;
      dsum += term * (ik - static_cast<double>(ell + m + 1) * inv_t);
      kpow *= wavenumber;
      tp *= t;
    }
    const std::complex<double> phase = scale * std::exp(ik * t);
    value = phase * sum;
    derivative = phase * dsum;
  }
};

}  // namespace formwave
