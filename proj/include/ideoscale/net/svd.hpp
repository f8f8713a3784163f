#pragma once

#include "ideoscale/types.hpp"

#include <cstdint>
#include <vector>

namespace ideoscale::net {

enum class SvdMethod {
  Auto,        // dense below dense_limit in both dimensions, randomized otherwise
  Dense,
  Randomized,
};

struct SvdConfig {
  int k = 5;
  std::uint64_t seed = 0;
  /// Row/column vectors are singular vectors scaled by sigma^exponent.
  double exponent = 0.5;
  int oversampling = 10;
  int power_iterations = 4;
  SvdMethod method = SvdMethod::Auto;
  Eigen::Index dense_limit = 500;
};

/// Thin rank-k factors. Each column pair (u_d, v_d) is sign-normalized so the
/// largest-magnitude entry of u_d is positive.
struct SvdFactors {
  Eigen::MatrixXd U;  // rows x k
  Eigen::VectorXd sigma;
  Eigen::MatrixXd V;  // cols x k
};

SvdFactors truncated_svd_factors(const model::SparseMatrix& m, const SvdConfig& cfg);

/// Rank-k embedding of the matrix rows and columns in a shared space.
model::EmbeddingSpace truncated_svd(const model::SparseMatrix& m,
                                    const std::vector<model::AccountId>& row_ids,
                                    const std::vector<model::AccountId>& col_ids,
                                    const SvdConfig& cfg);

/// Recovers the unit-norm singular vectors from an embedding by undoing the
/// sigma^exponent weighting. Components with sigma == 0 come back as zero.
SvdFactors unweight(const model::EmbeddingSpace& space);

}  // namespace ideoscale::net
