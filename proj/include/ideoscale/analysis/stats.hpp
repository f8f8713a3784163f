#pragma once

#include "ideoscale/types.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace ideoscale::analysis {

struct GroupMean {
  double mean = 0.0;
  std::size_t n = 0;
};

/// Mean score per group label. Every estimate must carry a group.
std::map<std::string, GroupMean> group_summaries(
    const std::vector<model::IdeologyEstimate>& estimates);

std::map<std::string, double> group_means(const std::vector<model::IdeologyEstimate>& estimates);

enum class CorrelationMethod { Pearson, Spearman };

std::string_view to_string(CorrelationMethod m);

struct Correlation {
  double coefficient = 0.0;
  std::size_t n = 0;
};

/// Correlation over the shared keys only; needs at least 3 of them.
Correlation correlate(const std::map<std::string, double>& xs,
                      const std::map<std::string, double>& ys, CorrelationMethod method);

double pearson(std::span<const double> x, std::span<const double> y);

/// 1-based ranks with ties given their average rank.
std::vector<double> average_ranks(std::span<const double> v);

/// (v - mean) / (2 * sd), with the n-1 sample standard deviation.
std::vector<double> standardize_2sd(std::span<const double> values);

/// Probability that a random `high` score exceeds a random `low` score,
/// ties counting one half (Mann-Whitney AUC).
double separation_auc(std::span<const double> low, std::span<const double> high);

}  // namespace ideoscale::analysis
