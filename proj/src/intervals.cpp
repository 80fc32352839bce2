#include "mvboot/intervals.hpp"

#include <cmath>

#include "mvboot/error.hpp"
#include "mvboot/normal.hpp"

namespace mvboot {

std::vector<ComponentLabel> component_labels(const std::vector<std::string>& responses,
                                             const std::vector<std::string>& predictors) {
  std::vector<ComponentLabel> labels;
  labels.reserve(responses.size() * predictors.size());
  for (const auto& predictor : predictors)
    for (const auto& response : responses) labels.push_back({response, predictor});
  return labels;
}

std::vector<ComponentLabel> component_labels(Index r, Index p) {
  std::vector<std::string> responses, predictors;
  for (Index i = 0; i < r; ++i) responses.push_back("y" + std::to_string(i + 1));
  for (Index j = 0; j < p; ++j) predictors.push_back("x" + std::to_string(j + 1));
  return component_labels(responses, predictors);
}

double two_sided_z(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
  return normal_quantile(1.0 - alpha / 2.0);
}

IntervalTable normal_intervals(const Vec& center, const Mat& cov, double alpha, std::string method,
                               const std::vector<ComponentLabel>& labels) {
  if (cov.rows() != center.size() || cov.cols() != center.size() ||
      static_cast<Index>(labels.size()) != center.size())
    throw Error(ErrorKind::DimensionMismatch, "normal_intervals: shapes disagree");
  const double z = two_sided_z(alpha);
  IntervalTable table{std::move(method), {}};
  table.components.reserve(labels.size());
  for (Index k = 0; k < center.size(); ++k) {
    const double half = z * std::sqrt(std::max(cov(k, k), 0.0));
    table.components.push_back({labels[static_cast<std::size_t>(k)], center(k) - half, center(k) + half});
  }
  return table;
}

}  // namespace mvboot
