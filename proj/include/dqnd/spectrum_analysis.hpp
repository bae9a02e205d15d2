#pragma once

// Discrete spectra of sampled expectation values.

#include <vector>

namespace dqnd {

struct SpectralPeak {
  double omega;      // angular frequency, units of omega
  double amplitude;  // one-sided amplitude of the Hann-windowed, mean-removed signal
};

struct Spectrum {
  std::vector<double> omega;
  std::vector<double> amplitude;
};

/// Hann-windowed real FFT of y sampled on the uniform grid t. ConfigError on a non-uniform grid
/// or fewer than 8 samples.
Spectrum amplitude_spectrum(const std::vector<double>& t, const std::vector<double>& y);

/// Local maxima of the spectrum, strongest first, with the frequency refined by a parabola
/// through the three bins around each maximum.
std::vector<SpectralPeak> find_peaks(const Spectrum& s, double omega_min = 0.0,
                                     double omega_max = 1e300);

/// The strongest peak with omega_min <= omega <= omega_max; amplitude 0 if there is none.
SpectralPeak dominant_peak(const Spectrum& s, double omega_min, double omega_max);

}  // namespace dqnd
