#pragma once

#include "ideoscale/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace ideoscale::analysis {

struct Coefficient {
  std::string name;
  double estimate = 0.0;
  double standard_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double p_value = 1.0;

  bool significant(double alpha = 0.05) const { return p_value < alpha; }
};

struct RegressionReport {
  std::vector<Coefficient> coefficients;  // design order
  double r_squared = 0.0;
  std::size_t n = 0;
  std::string reference_group;
  std::vector<std::string> dropped_groups;  // fewer than 2 members
  bool robust = false;

  const Coefficient& coefficient(const std::string& name) const;
};

struct RegressionOptions {
  /// Heteroskedasticity-consistent (HC1) standard errors instead of classical.
  bool robust_se = false;
  double z_critical = 1.959963984540054;  // two-sided 95%
  std::string predictor_name = "network_score_2sd";
};

inline constexpr const char* kInterceptName = "(Intercept)";

/// Name of the indicator column for a non-reference group.
std::string group_term(const std::string& group);

/// OLS of outcome on the 2-SD-standardized predictor plus one indicator per
/// non-reference group. Groups with fewer than two members are dropped.
RegressionReport fit_fixed_effects(const std::map<model::AccountId, double>& outcome,
                                   const std::map<model::AccountId, double>& predictor,
                                   const std::map<model::AccountId, std::string>& groups,
                                   const std::string& reference,
                                   const RegressionOptions& options = {});

/// Two-sided p-value of a z statistic under the standard normal.
double normal_two_sided_p(double z);

std::string serialize_report(const RegressionReport& report, const std::string& digest);

}  // namespace ideoscale::analysis
