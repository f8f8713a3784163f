#include "ideoscale/analysis/regression.hpp"

#include "ideoscale/analysis/stats.hpp"
#include "ideoscale/error.hpp"
#include "ideoscale/io.hpp"
#include "ideoscale/log.hpp"

#include <Eigen/QR>

#include <cmath>
#include <set>

namespace ideoscale::analysis {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

const Coefficient& RegressionReport::coefficient(const std::string& name) const {
  for (const auto& c : coefficients) {
    if (c.name == name) return c;
  }
  throw DataError("regression report has no coefficient '" + name + "'");
}

std::string group_term(const std::string& group) { return "outlet[" + group + "]"; }

double normal_two_sided_p(double z) {
  if (std::isinf(z)) return 0.0;
  return std::erfc(std::abs(z) / std::sqrt(2.0));
}

RegressionReport fit_fixed_effects(const std::map<model::AccountId, double>& outcome,
                                   const std::map<model::AccountId, double>& predictor,
                                   const std::map<model::AccountId, std::string>& groups,
                                   const std::string& reference,
                                   const RegressionOptions& options) {
  if (outcome.size() != predictor.size() || outcome.size() != groups.size()) {
    throw DataError("fit_fixed_effects: outcome, predictor and group maps must share one key set");
  }
  std::map<std::string, std::size_t> group_size;
  for (const auto& [id, y] : outcome) {
    if (predictor.count(id) == 0 || groups.count(id) == 0) {
      throw DataError("fit_fixed_effects: account '" + id + "' missing from predictor or groups");
    }
    ++group_size[groups.at(id)];
  }

  RegressionReport report;
  report.reference_group = reference;
  report.robust = options.robust_se;
  std::vector<std::string> levels;
  for (const auto& [g, n] : group_size) {
    if (n < 2) {
      report.dropped_groups.push_back(g);
    } else if (g != reference) {
      levels.push_back(g);
    }
  }
  if (group_size.count(reference) == 0 || group_size.at(reference) < 2) {
    throw DataError("fit_fixed_effects: reference group '" + reference +
                    "' is absent or has fewer than 2 members");
  }
  if (!report.dropped_groups.empty()) {
    log_warn("fit_fixed_effects: dropped " + std::to_string(report.dropped_groups.size()) +
             " group(s) with fewer than 2 members");
  }

  std::vector<model::AccountId> ids;
  std::vector<double> raw_x;
  for (const auto& [id, y] : outcome) {
    if (group_size.at(groups.at(id)) < 2) continue;
    ids.push_back(id);
    raw_x.push_back(predictor.at(id));
  }
  const std::vector<double> x = standardize_2sd(raw_x);

  const auto n = static_cast<Index>(ids.size());
  const auto p = static_cast<Index>(2 + levels.size());
  if (n <= p) {
    throw DataError("fit_fixed_effects: " + std::to_string(n) + " observations for " +
                    std::to_string(p) + " coefficients");
  }
  std::vector<std::string> names = {kInterceptName, options.predictor_name};
  for (const auto& g : levels) names.push_back(group_term(g));

  MatrixXd design = MatrixXd::Zero(n, p);
  VectorXd y(n);
  std::map<std::string, Index> level_col;
  for (std::size_t l = 0; l < levels.size(); ++l) level_col.emplace(levels[l], static_cast<Index>(2 + l));
  for (Index i = 0; i < n; ++i) {
    const auto& id = ids[static_cast<std::size_t>(i)];
    y[i] = outcome.at(id);
    design(i, 0) = 1.0;
    design(i, 1) = x[static_cast<std::size_t>(i)];
    const auto it = level_col.find(groups.at(id));
    if (it != level_col.end()) design(i, it->second) = 1.0;
  }

  Eigen::ColPivHouseholderQR<MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < p) {
    std::string cols;
    for (Index c = qr.rank(); c < p; ++c) {
      const Index col = qr.colsPermutation().indices()[c];
      cols += (cols.empty() ? "" : ", ") + names[static_cast<std::size_t>(col)];
    }
    throw NumericalError("fit_fixed_effects: rank-deficient design; collinear column(s): " + cols);
  }
  const VectorXd beta = qr.solve(y);
  const VectorXd resid = y - design * beta;
  const double rss = resid.squaredNorm();
  const double tss = (y.array() - y.mean()).square().sum();
  report.r_squared = tss > 0.0 ? 1.0 - rss / tss : 0.0;
  report.n = static_cast<std::size_t>(n);

  const MatrixXd xtx_inv = (design.transpose() * design).ldlt().solve(MatrixXd::Identity(p, p));
  MatrixXd cov;
  const double dof = static_cast<double>(n - p);
  if (options.robust_se) {
    const MatrixXd meat = design.transpose() * resid.array().square().matrix().asDiagonal() * design;
    cov = xtx_inv * meat * xtx_inv * (static_cast<double>(n) / dof);
  } else {
    cov = xtx_inv * (rss / dof);
  }

  for (Index c = 0; c < p; ++c) {
    Coefficient coef;
    coef.name = names[static_cast<std::size_t>(c)];
    coef.estimate = beta[c];
    coef.standard_error = std::sqrt(std::max(0.0, cov(c, c)));
    coef.ci_low = coef.estimate - options.z_critical * coef.standard_error;
    coef.ci_high = coef.estimate + options.z_critical * coef.standard_error;
    if (coef.standard_error > 0.0) {
      coef.p_value = normal_two_sided_p(coef.estimate / coef.standard_error);
    } else {
      coef.p_value = coef.estimate == 0.0 ? 1.0 : 0.0;
    }
    report.coefficients.push_back(coef);
  }
  return report;
}

namespace {

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

std::string serialize_report(const RegressionReport& report, const std::string& digest) {
  using model::format_real;
  std::string out = model::header_line(digest);
  out += "# n=" + std::to_string(report.n) + " r_squared=" + format_real(report.r_squared) +
         " reference=" + report.reference_group + " se=" + (report.robust ? "hc1" : "classical") +
         "\n";
  out += "term,estimate,std_error,ci_low,ci_high,p_value,significant\n";
  for (const auto& c : report.coefficients) {
    out += csv_quote(c.name) + "," + format_real(c.estimate) + "," + format_real(c.standard_error) +
           "," + format_real(c.ci_low) + "," + format_real(c.ci_high) + "," +
           format_real(c.p_value) + "," + (c.significant() ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace ideoscale::analysis
