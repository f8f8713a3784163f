#pragma once

#include "ideoscale/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace ideoscale::net {

/// Uniform cubic B-spline on [lo, hi], held at its boundary value outside.
struct SplineSmooth {
  double lo = 0.0;
  double hi = 0.0;
  int segments = 7;
  Eigen::VectorXd coefficients;  // segments + 3 basis weights
  double penalty = 0.0;

  int basis_size() const { return segments + 3; }
  bool degenerate() const { return !(hi > lo); }

  /// Basis values at x (length basis_size()); x is clamped to [lo, hi].
  Eigen::VectorXd basis(double x) const;
  double operator()(double x) const;
  double derivative(double x) const;
};

enum class ProjectionKind { Gam, Linear };

struct ProjectionConfig {
  ProjectionKind kind = ProjectionKind::Gam;
  /// Upper bound; fewer anchors shrink the basis.
  int basis_size = 10;
  int penalty_grid_size = 20;
  double penalty_min = 1e-4;
  double penalty_max = 1e4;
};

/// score = intercept + sum_d f_d(x_d). Each f_d sums to zero over the
/// training columns.
struct ProjectionModel {
  ProjectionKind kind = ProjectionKind::Gam;
  int k = 0;
  double intercept = 0.0;
  std::vector<SplineSmooth> smooths;  // Gam
  Eigen::VectorXd weights;            // Linear
  double fit_r_squared = 0.0;
  std::size_t n_train = 0;

  double evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  double component(int d, double x) const;
};

/// The log-spaced penalty grid searched by generalized cross-validation.
std::vector<double> penalty_grid(const ProjectionConfig& cfg);

/// Regresses anchor scores on the column vectors of anchored accounts.
ProjectionModel fit_projection(const model::EmbeddingSpace& space,
                               const model::AnchorTable& anchors,
                               const ProjectionConfig& cfg = {});

/// In-sample R^2 of the model on the anchored columns of `space`.
double r_squared(const ProjectionModel& model, const model::EmbeddingSpace& space,
                 const model::AnchorTable& anchors);

std::vector<model::IdeologyEstimate> project_rows(const model::EmbeddingSpace& space,
                                                  const ProjectionModel& model);

std::string serialize_model(const ProjectionModel& model, const std::string& digest);
ProjectionModel load_model(const std::filesystem::path& path);

}  // namespace ideoscale::net
