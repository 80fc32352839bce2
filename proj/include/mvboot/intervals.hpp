#pragma once

#include <string>
#include <vector>

#include "mvboot/linalg.hpp"

namespace mvboot {

// Names one entry of vec(beta). With beta r x p and column stacking,
// component k belongs to response k % r and predictor k / r.
struct ComponentLabel {
  std::string response;
  std::string predictor;

  std::string text() const { return response + "~" + predictor; }
};

std::vector<ComponentLabel> component_labels(const std::vector<std::string>& responses,
                                             const std::vector<std::string>& predictors);
// "y1".."yr" and "x1".."xp".
std::vector<ComponentLabel> component_labels(Index r, Index p);

struct Interval {
  ComponentLabel label;
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double v) const { return lower <= v && v <= upper; }
  double width() const { return upper - lower; }
};

// Method tags: "percentile", "normal-fixed", "normal-sandwich".
struct IntervalTable {
  std::string method;
  std::vector<Interval> components;
};

// center_k +- z_{1-alpha/2} sqrt(cov_kk) for every component.
IntervalTable normal_intervals(const Vec& center, const Mat& cov, double alpha, std::string method,
                               const std::vector<ComponentLabel>& labels);

// z_{1-alpha/2}; alpha must lie in (0, 1).
double two_sided_z(double alpha);

}  // namespace mvboot
