#pragma once

#include <string>
#include <vector>

namespace dqnd {

struct ObservableTrace {
  std::string name;
  std::vector<double> mean;
  std::vector<double> variance;
};

/// Sampled means and variances; observables keep insertion order (it is the column order).
struct TimeSeries {
  std::vector<double> times;
  std::vector<ObservableTrace> observables;
  std::vector<double> leakage;
  double max_norm_drift = 0.0;

  ObservableTrace& add(const std::string& name);
  const ObservableTrace& get(const std::string& name) const;
  bool has(const std::string& name) const;
  double max_leakage() const;
};

}  // namespace dqnd
