#include "ideoscale/net/svd.hpp"

#include "ideoscale/error.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <random>

namespace ideoscale::net {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;

MatrixXd orthonormal_basis(const MatrixXd& y) {
  Eigen::HouseholderQR<MatrixXd> qr(y);
  return qr.householderQ() * MatrixXd::Identity(y.rows(), y.cols());
}

SvdFactors dense_svd(const model::SparseMatrix& m, int k) {
  const MatrixXd dense = MatrixXd(m);
  Eigen::BDCSVD<MatrixXd> svd(dense, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU().leftCols(k), svd.singularValues().head(k), svd.matrixV().leftCols(k)};
}

// Randomized range finder with subspace iteration. The initial sketch starts
// from the row side (A A^T Omega), so the subspace does not depend on column
// order.
SvdFactors randomized_svd(const model::SparseMatrix& a, const SvdConfig& cfg) {
  const Index nr = a.rows();
  const Index nc = a.cols();
  const Index l = std::min<Index>(cfg.k + std::max(0, cfg.oversampling), std::min(nr, nc));

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  MatrixXd omega(nr, l);
  for (Index j = 0; j < l; ++j) {
    for (Index i = 0; i < nr; ++i) omega(i, j) = gauss(rng);
  }

  MatrixXd q = orthonormal_basis(a * MatrixXd(a.transpose() * omega));
  for (int it = 0; it < cfg.power_iterations; ++it) {
    const MatrixXd z = orthonormal_basis(a.transpose() * q);
    q = orthonormal_basis(a * z);
  }
  const MatrixXd b = q.transpose() * a;  // l x nc
  Eigen::BDCSVD<MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {q * svd.matrixU().leftCols(cfg.k), svd.singularValues().head(cfg.k),
          svd.matrixV().leftCols(cfg.k)};
}

void normalize_signs(SvdFactors& f) {
  for (Index d = 0; d < f.U.cols(); ++d) {
    Index arg = 0;
    f.U.col(d).cwiseAbs().maxCoeff(&arg);
    if (f.U(arg, d) < 0.0) {
      f.U.col(d) *= -1.0;
      f.V.col(d) *= -1.0;
    }
  }
}

}  // namespace

SvdFactors truncated_svd_factors(const model::SparseMatrix& m, const SvdConfig& cfg) {
  const Index min_dim = std::min(m.rows(), m.cols());
  if (cfg.k <= 0) throw UsageError("SVD rank k must be positive");
  if (cfg.k > min_dim) {
    throw DataError("SVD rank k=" + std::to_string(cfg.k) + " exceeds the smaller matrix dimension " +
                    std::to_string(min_dim));
  }
  bool dense = false;
  switch (cfg.method) {
    case SvdMethod::Auto:
      dense = m.rows() < cfg.dense_limit && m.cols() < cfg.dense_limit;
      break;
    case SvdMethod::Dense: dense = true; break;
    case SvdMethod::Randomized: dense = false; break;
  }
  SvdFactors f = dense ? dense_svd(m, cfg.k) : randomized_svd(m, cfg);
  if (!f.U.allFinite() || !f.V.allFinite() || !f.sigma.allFinite()) {
    throw NumericalError("SVD produced non-finite values");
  }
  normalize_signs(f);
  return f;
}

model::EmbeddingSpace truncated_svd(const model::SparseMatrix& m,
                                    const std::vector<model::AccountId>& row_ids,
                                    const std::vector<model::AccountId>& col_ids,
                                    const SvdConfig& cfg) {
  if (static_cast<Index>(row_ids.size()) != m.rows() ||
      static_cast<Index>(col_ids.size()) != m.cols()) {
    throw DataError("truncated_svd: id lists do not match matrix shape");
  }
  const SvdFactors f = truncated_svd_factors(m, cfg);
  const Eigen::VectorXd weight = f.sigma.array().pow(cfg.exponent).matrix();
  model::EmbeddingSpace space;
  space.k = cfg.k;
  space.exponent = cfg.exponent;
  space.row_ids = row_ids;
  space.col_ids = col_ids;
  space.row_vectors = f.U * weight.asDiagonal();
  space.col_vectors = f.V * weight.asDiagonal();
  space.singular_values = f.sigma;
  return space;
}

SvdFactors unweight(const model::EmbeddingSpace& space) {
  Eigen::VectorXd inv(space.k);
  for (int d = 0; d < space.k; ++d) {
    const double w = std::pow(space.singular_values[d], space.exponent);
    inv[d] = w > 0.0 ? 1.0 / w : 0.0;
  }
  return {space.row_vectors * inv.asDiagonal(), space.singular_values,
          space.col_vectors * inv.asDiagonal()};
}

}  // namespace ideoscale::net
