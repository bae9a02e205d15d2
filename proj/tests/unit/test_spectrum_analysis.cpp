#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "dqnd/errors.hpp"
#include "dqnd/spectrum_analysis.hpp"

using namespace dqnd;

TEST_CASE("dominant peak of a two-tone signal") {
  std::vector<double> t, y;
  const double dt = 0.01;
  for (int i = 0; i < 4096; ++i) {
    t.push_back(i * dt);
    y.push_back(0.3 + std::cos(1.0 * t.back()) + 0.05 * std::sin(20.0 * t.back()));
  }
  const Spectrum s = amplitude_spectrum(t, y);
  CHECK(s.omega.size() == s.amplitude.size());
  const SpectralPeak slow = dominant_peak(s, 0.0, 1e9);
  CHECK(slow.omega == doctest::Approx(1.0).epsilon(0.02));
  const SpectralPeak fast = dominant_peak(s, 2.0, 1e9);
  CHECK(fast.omega == doctest::Approx(20.0).epsilon(0.01));
  CHECK(fast.amplitude < slow.amplitude);
  const auto peaks = find_peaks(s);
  REQUIRE(peaks.size() >= 2);
  CHECK(peaks[0].amplitude >= peaks[1].amplitude);
  CHECK(dominant_peak(s, 200.0, 300.0).amplitude < 1e-3);
}

TEST_CASE("spectrum input validation") {
  std::vector<double> t{0, 1, 2, 3}, y{0, 1, 0, 1};
  CHECK_THROWS_AS(amplitude_spectrum(t, y), ConfigError);
  std::vector<double> tn, yn;
  for (int i = 0; i < 16; ++i) {
    tn.push_back(i * i * 0.1);
    yn.push_back(1.0);
  }
  CHECK_THROWS_AS(amplitude_spectrum(tn, yn), ConfigError);
}
