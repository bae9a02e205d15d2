#include "dqnd/spectrum_analysis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dqnd/errors.hpp"

namespace dqnd {

Spectrum amplitude_spectrum(const std::vector<double>& t, const std::vector<double>& y) {
  const std::size_t n = t.size();
  if (n < 8 || y.size() != n) throw ConfigError("spectrum needs at least 8 matching samples");
  const double dt = (t.back() - t.front()) / double(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(t[i] - t[i - 1] - dt) > 1e-9 * std::max(1.0, std::abs(dt))) {
      throw ConfigError("spectrum needs a uniform time grid");
    }
  }
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= double(n);

  double* in = fftw_alloc_real(n);
  fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
  fftw_plan plan = fftw_plan_dft_r2c_1d(int(n), in, out, FFTW_ESTIMATE);
  double wsum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * double(i) / double(n - 1));
    in[i] = w * (y[i] - mean);
    wsum += w;
  }
  fftw_execute(plan);

  Spectrum s;
  const double dw = 2.0 * std::numbers::pi / (double(n) * dt);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    s.omega.push_back(double(k) * dw);
    s.amplitude.push_back(2.0 * std::hypot(out[k][0], out[k][1]) / wsum);
  }
  fftw_destroy_plan(plan);
  fftw_free(in);
  fftw_free(out);
  return s;
}

std::vector<SpectralPeak> find_peaks(const Spectrum& s, double omega_min, double omega_max) {
  std::vector<SpectralPeak> peaks;
  const auto& a = s.amplitude;
  for (std::size_t k = 1; k + 1 < a.size(); ++k) {
    if (!(a[k] > a[k - 1] && a[k] >= a[k + 1])) continue;
    const double denom = a[k - 1] - 2.0 * a[k] + a[k + 1];
    const double shift = denom != 0.0 ? 0.5 * (a[k - 1] - a[k + 1]) / denom : 0.0;
    const double dw = s.omega[1] - s.omega[0];
    const double w = s.omega[k] + shift * dw;
    if (w < omega_min || w > omega_max) continue;
    peaks.push_back({w, a[k] - 0.25 * (a[k - 1] - a[k + 1]) * shift});
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const SpectralPeak& x, const SpectralPeak& y) { return x.amplitude > y.amplitude; });
  return peaks;
}

SpectralPeak dominant_peak(const Spectrum& s, double omega_min, double omega_max) {
  const auto peaks = find_peaks(s, omega_min, omega_max);
  return peaks.empty() ? SpectralPeak{0.0, 0.0} : peaks.front();
}

}  // namespace dqnd
