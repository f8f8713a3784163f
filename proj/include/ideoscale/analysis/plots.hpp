#pragma once

#include "ideoscale/analysis/regression.hpp"

#include <string>
#include <vector>

namespace ideoscale::analysis {

struct LabeledPoint {
  std::string label;
  double x = 0.0;
  double y = 0.0;
};

/// Labeled scatter plot with a least-squares guide line.
std::string scatter_svg(const std::vector<LabeledPoint>& points, const std::string& x_label,
                        const std::string& y_label, const std::string& title);

/// Point estimates with 95% intervals for the significant non-intercept
/// coefficients.
std::string coefficient_svg(const RegressionReport& report, const std::string& title);

}  // namespace ideoscale::analysis
