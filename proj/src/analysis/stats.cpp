#include "ideoscale/analysis/stats.hpp"

#include "ideoscale/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ideoscale::analysis {

std::map<std::string, GroupMean> group_summaries(
    const std::vector<model::IdeologyEstimate>& estimates) {
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& e : estimates) {
    if (!e.group) throw DataError("group_means: estimate for '" + e.account + "' has no group");
    auto& [sum, n] = acc[*e.group];
    sum += e.score;
    ++n;
  }
  std::map<std::string, GroupMean> out;
  for (const auto& [g, sn] : acc) out.emplace(g, GroupMean{sn.first / static_cast<double>(sn.second), sn.second});
  return out;
}

std::map<std::string, double> group_means(const std::vector<model::IdeologyEstimate>& estimates) {
  std::map<std::string, double> out;
  for (const auto& [g, m] : group_summaries(estimates)) out.emplace(g, m.mean);
  return out;
}

std::string_view to_string(CorrelationMethod m) {
  return m == CorrelationMethod::Pearson ? "pearson" : "spearman";
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DataError("pearson: need two equal-length samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw NumericalError("correlation undefined for a constant sample");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = r;
    i = j + 1;
  }
  return ranks;
}

Correlation correlate(const std::map<std::string, double>& xs,
                      const std::map<std::string, double>& ys, CorrelationMethod method) {
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& [key, xv] : xs) {
    const auto it = ys.find(key);
    if (it == ys.end()) continue;
    x.push_back(xv);
    y.push_back(it->second);
  }
  if (x.size() < 3) {
    throw DataError("correlate: need at least 3 shared keys, found " + std::to_string(x.size()));
  }
  if (method == CorrelationMethod::Spearman) {
    x = average_ranks(x);
    y = average_ranks(y);
  }
  return {pearson(x, y), x.size()};
}

std::vector<double> standardize_2sd(std::span<const double> values) {
  if (values.size() < 2) throw DataError("standardize_2sd: need at least 2 values");
  const double n = static_cast<double>(values.size());
  // The mean is carried as hi + lo so that its rounding does not shift the output.
  const double hi = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double lo = 0.0;
  for (double v : values) lo += v - hi;
  lo /= n;
  std::vector<double> centered;
  centered.reserve(values.size());
  for (double v : values) centered.push_back((v - hi) - lo);
  double ss = 0.0;
  for (double c : centered) ss += c * c;
  const double sd = std::sqrt(ss / (n - 1.0));
  if (!(sd > 0.0)) throw NumericalError("standardize_2sd: values have zero variance");
  for (double& c : centered) c /= 2.0 * sd;
  return centered;
}

double separation_auc(std::span<const double> low, std::span<const double> high) {
  if (low.empty() || high.empty()) throw DataError("separation_auc: both groups must be nonempty");
  std::vector<double> all(low.begin(), low.end());
  all.insert(all.end(), high.begin(), high.end());
  const auto ranks = average_ranks(all);
  double rank_sum = 0.0;
  for (std::size_t i = low.size(); i < all.size(); ++i) rank_sum += ranks[i];
  const double nh = static_cast<double>(high.size());
  const double nl = static_cast<double>(low.size());
  return (rank_sum - nh * (nh + 1.0) / 2.0) / (nh * nl);
}

}  // namespace ideoscale::analysis
