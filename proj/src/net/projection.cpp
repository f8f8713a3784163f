#include "ideoscale/net/projection.hpp"

#include "ideoscale/error.hpp"
#include "ideoscale/io.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace ideoscale::net {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct Local {
  int segment;
  double u;
};

Local locate(const SplineSmooth& s, double x) {
  const double h = (s.hi - s.lo) / s.segments;
  const double t = (std::clamp(x, s.lo, s.hi) - s.lo) / h;
  const int seg = std::min(static_cast<int>(std::floor(t)), s.segments - 1);
  return {seg, t - seg};
}

}  // namespace

VectorXd SplineSmooth::basis(double x) const {
  VectorXd b = VectorXd::Zero(basis_size());
  if (degenerate()) return b;
  const auto [seg, u] = locate(*this, x);
  const double v = 1.0 - u;
  b[seg] = v * v * v / 6.0;
  b[seg + 1] = (3.0 * u * u * u - 6.0 * u * u + 4.0) / 6.0;
  b[seg + 2] = (-3.0 * u * u * u + 3.0 * u * u + 3.0 * u + 1.0) / 6.0;
  b[seg + 3] = u * u * u / 6.0;
  return b;
}

double SplineSmooth::derivative(double x) const {
  if (degenerate()) return 0.0;
  const double h = (hi - lo) / segments;
  const auto [seg, u] = locate(*this, x);
  const double v = 1.0 - u;
  const double d0 = -v * v / 2.0;
  const double d1 = (3.0 * u * u - 4.0 * u) / 2.0;
  const double d2 = (-3.0 * u * u + 2.0 * u + 1.0) / 2.0;
  const double d3 = u * u / 2.0;
  return (d0 * coefficients[seg] + d1 * coefficients[seg + 1] + d2 * coefficients[seg + 2] +
          d3 * coefficients[seg + 3]) /
         h;
}

double SplineSmooth::operator()(double x) const {
  if (degenerate()) return 0.0;
  return basis(x).dot(coefficients);
}

double ProjectionModel::component(int d, double x) const {
  if (kind == ProjectionKind::Linear) return weights[d] * x;
  return smooths[static_cast<std::size_t>(d)](x);
}

double ProjectionModel::evaluate(const Eigen::Ref<const VectorXd>& x) const {
  if (x.size() != k) {
    throw DataError("projection model expects " + std::to_string(k) + " dimensions, got " +
                    std::to_string(x.size()));
  }
  double y = intercept;
  for (int d = 0; d < k; ++d) y += component(d, x[d]);
  return y;
}

std::vector<double> penalty_grid(const ProjectionConfig& cfg) {
  std::vector<double> grid;
  const int n = std::max(1, cfg.penalty_grid_size);
  const double a = std::log10(cfg.penalty_min);
  const double b = std::log10(cfg.penalty_max);
  for (int i = 0; i < n; ++i) {
    grid.push_back(n == 1 ? cfg.penalty_min : std::pow(10.0, a + (b - a) * i / (n - 1)));
  }
  return grid;
}

namespace {

struct TrainingSet {
  MatrixXd x;  // n x k
  VectorXd y;
};

TrainingSet training_set(const model::EmbeddingSpace& space, const model::AnchorTable& anchors) {
  std::vector<Index> idx;
  std::vector<double> ys;
  for (std::size_t j = 0; j < space.col_ids.size(); ++j) {
    const auto it = anchors.scores.find(space.col_ids[j]);
    if (it == anchors.scores.end()) continue;
    idx.push_back(static_cast<Index>(j));
    ys.push_back(it->second);
  }
  TrainingSet t{MatrixXd(static_cast<Index>(idx.size()), space.k),
                Eigen::Map<VectorXd>(ys.data(), static_cast<Index>(ys.size()))};
  for (std::size_t i = 0; i < idx.size(); ++i) {
    t.x.row(static_cast<Index>(i)) = space.col_vectors.row(idx[i]);
  }
  return t;
}

double r_squared_of(const VectorXd& y, const VectorXd& fitted) {
  const double mean = y.mean();
  const double tss = (y.array() - mean).square().sum();
  if (!(tss > 0.0)) return 0.0;
  const double rss = (y - fitted).squaredNorm();
  return 1.0 - rss / tss;
}

// Per-dimension reparametrized smooth: basis B (n x m), null-space map Z
// (m x m-1) enforcing 1^T B beta = 0, and the penalty root D Z.
struct SmoothBlock {
  SplineSmooth shape;
  MatrixXd z;
  MatrixXd design;        // B Z
  MatrixXd penalty_root;  // D Z
};

SmoothBlock make_block(const VectorXd& x, int basis_size) {
  SmoothBlock blk;
  blk.shape.lo = x.minCoeff();
  blk.shape.hi = x.maxCoeff();
  blk.shape.segments = basis_size - 3;
  const int m = basis_size;
  blk.shape.coefficients = VectorXd::Zero(m);
  if (blk.shape.degenerate()) return blk;

  MatrixXd b(x.size(), m);
  for (Index i = 0; i < x.size(); ++i) b.row(i) = blk.shape.basis(x[i]).transpose();

  const VectorXd c = b.colwise().sum().transpose();
  Eigen::HouseholderQR<MatrixXd> qr(c);
  const MatrixXd q = qr.householderQ() * MatrixXd::Identity(m, m);
  blk.z = q.rightCols(m - 1);

  MatrixXd diff = MatrixXd::Zero(m - 2, m);
  for (int r = 0; r < m - 2; ++r) {
    diff(r, r) = 1.0;
    diff(r, r + 1) = -2.0;
    diff(r, r + 2) = 1.0;
  }
  blk.design = b * blk.z;
  blk.penalty_root = diff * blk.z;
  return blk;
}

struct PenalizedFit {
  VectorXd beta;
  double rss = 0.0;
  double edf = 0.0;
};

PenalizedFit solve_penalized(const MatrixXd& x, const MatrixXd& root, const VectorXd& y) {
  const Index n = x.rows();
  const Index p = x.cols();
  MatrixXd aug(n + root.rows(), p);
  aug.topRows(n) = x;
  aug.bottomRows(root.rows()) = root;
  VectorXd rhs = VectorXd::Zero(aug.rows());
  rhs.head(n) = y;

  Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(aug);
  PenalizedFit fit;
  fit.beta = cod.solve(rhs);
  fit.rss = (y - x * fit.beta).squaredNorm();
  // trace of the hat matrix X (A^T A)^+ X^T
  const MatrixXd gram = aug.transpose() * aug;
  Eigen::CompleteOrthogonalDecomposition<MatrixXd> gcod(gram);
  const MatrixXd inner = gcod.solve(x.transpose() * x);
  fit.edf = inner.trace();
  return fit;
}

ProjectionModel fit_linear(const TrainingSet& t, int k) {
  const Index n = t.x.rows();
  MatrixXd design(n, k + 1);
  design.col(0).setOnes();
  design.rightCols(k) = t.x;
  Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(design);
  const VectorXd beta = cod.solve(t.y);
  ProjectionModel m;
  m.kind = ProjectionKind::Linear;
  m.k = k;
  m.intercept = beta[0];
  m.weights = beta.tail(k);
  m.n_train = static_cast<std::size_t>(n);
  return m;
}

}  // namespace

ProjectionModel fit_projection(const model::EmbeddingSpace& space,
                               const model::AnchorTable& anchors, const ProjectionConfig& cfg) {
  model::validate(space);
  const int k = space.k;
  const TrainingSet t = training_set(space, anchors);
  const auto n = static_cast<std::size_t>(t.x.rows());
  const auto required = static_cast<std::size_t>(2 * k);
  if (n < required) {
    throw DataError("fit_projection: found " + std::to_string(n) +
                    " anchored columns in the embedding, need at least " +
                    std::to_string(required));
  }
  if (cfg.basis_size < 4) throw UsageError("spline basis size must be at least 4");

  ProjectionModel model;
  if (cfg.kind == ProjectionKind::Linear) {
    model = fit_linear(t, k);
  } else {
    // At most about n/2 coefficients in total, so small anchor sets cannot
    // be interpolated.
    const int basis_size =
        std::clamp(static_cast<int>((n / 2 - 1) / static_cast<std::size_t>(k)) + 1, 4, cfg.basis_size);
    std::vector<SmoothBlock> blocks;
    Index p = 1;
    Index penalty_rows = 0;
    for (int d = 0; d < k; ++d) {
      blocks.push_back(make_block(t.x.col(d), basis_size));
      p += blocks.back().design.cols();
      penalty_rows += blocks.back().penalty_root.rows();
    }
    MatrixXd design(static_cast<Index>(n), p);
    design.col(0).setOnes();
    std::vector<Index> offsets;
    Index col = 1;
    for (const auto& blk : blocks) {
      offsets.push_back(col);
      const Index w = blk.design.cols();
      if (w > 0) design.middleCols(col, w) = blk.design;
      col += w;
    }
    MatrixXd root = MatrixXd::Zero(penalty_rows, p);
    {
      Index row = 0;
      for (std::size_t d = 0; d < blocks.size(); ++d) {
        const auto& blk = blocks[d];
        if (blk.design.cols() == 0) continue;
        root.block(row, offsets[d], blk.penalty_root.rows(), blk.design.cols()) =
            blk.penalty_root;
        row += blk.penalty_root.rows();
      }
    }
    const double nn = static_cast<double>(n);
    auto gcv = [&](double lambda) {
      const PenalizedFit fit = solve_penalized(design, std::sqrt(lambda) * root, t.y);
      const double resid_df = nn - fit.edf;
      if (!(resid_df > 1e-8)) return std::numeric_limits<double>::infinity();
      return nn * fit.rss / (resid_df * resid_df);
    };

    // One smoothing parameter shared by all dimensions, chosen by GCV.
    double lambda = cfg.penalty_max;
    double best = std::numeric_limits<double>::infinity();
    for (double trial : penalty_grid(cfg)) {
      const double score = gcv(trial);
      if (score < best) {
        best = score;
        lambda = trial;
      }
    }
    const PenalizedFit fit = solve_penalized(design, std::sqrt(lambda) * root, t.y);
    if (!fit.beta.allFinite()) throw NumericalError("fit_projection: non-finite coefficients");

    model.kind = ProjectionKind::Gam;
    model.k = k;
    model.intercept = fit.beta[0];
    model.n_train = n;
    for (std::size_t d = 0; d < blocks.size(); ++d) {
      SplineSmooth s = blocks[d].shape;
      s.penalty = lambda;
      const Index w = blocks[d].design.cols();
      if (w > 0) s.coefficients = blocks[d].z * fit.beta.segment(offsets[d], w);
      model.smooths.push_back(std::move(s));
    }
  }

  VectorXd fitted(static_cast<Index>(n));
  for (Index i = 0; i < static_cast<Index>(n); ++i) {
    fitted[i] = model.evaluate(t.x.row(i).transpose());
  }
  model.fit_r_squared = r_squared_of(t.y, fitted);
  return model;
}

double r_squared(const ProjectionModel& model, const model::EmbeddingSpace& space,
                 const model::AnchorTable& anchors) {
  const TrainingSet t = training_set(space, anchors);
  VectorXd fitted(t.x.rows());
  for (Index i = 0; i < t.x.rows(); ++i) fitted[i] = model.evaluate(t.x.row(i).transpose());
  return r_squared_of(t.y, fitted);
}

std::vector<model::IdeologyEstimate> project_rows(const model::EmbeddingSpace& space,
                                                  const ProjectionModel& model) {
  if (space.k != model.k) {
    throw DataError("project_rows: embedding has k=" + std::to_string(space.k) +
                    " but the model was fitted with k=" + std::to_string(model.k));
  }
  std::vector<model::IdeologyEstimate> out;
  out.reserve(space.row_ids.size());
  for (std::size_t i = 0; i < space.row_ids.size(); ++i) {
    const double s = model.evaluate(space.row_vectors.row(static_cast<Index>(i)).transpose());
    if (!std::isfinite(s)) throw NumericalError("non-finite projected score for " + space.row_ids[i]);
    out.push_back({space.row_ids[i], s, model::Source::Network, std::nullopt});
  }
  return out;
}

// Model file, one record per line:
//   kind  gam|linear
//   k / intercept / r_squared / n_train  <value>
//   smooth  d  lo  hi  segments  penalty  c_0 .. c_{m-1}     (gam)
//   weights  w_1 .. w_k                             (linear)
std::string serialize_model(const ProjectionModel& model, const std::string& digest) {
  using model::format_real;
  std::string out = model::header_line(digest);
  out += std::string("kind\t") + (model.kind == ProjectionKind::Gam ? "gam" : "linear") + "\n";
  out += "k\t" + std::to_string(model.k) + "\n";
  out += "intercept\t" + format_real(model.intercept) + "\n";
  out += "r_squared\t" + format_real(model.fit_r_squared) + "\n";
  out += "n_train\t" + std::to_string(model.n_train) + "\n";
  if (model.kind == ProjectionKind::Gam) {
    for (std::size_t d = 0; d < model.smooths.size(); ++d) {
      const auto& s = model.smooths[d];
      out += "smooth\t" + std::to_string(d) + "\t" + format_real(s.lo) + "\t" + format_real(s.hi) +
             "\t" + std::to_string(s.segments) + "\t" + format_real(s.penalty);
      for (Index b = 0; b < s.coefficients.size(); ++b) out += "\t" + format_real(s.coefficients[b]);
      out += "\n";
    }
  } else {
    out += "weights";
    for (Index d = 0; d < model.weights.size(); ++d) out += "\t" + format_real(model.weights[d]);
    out += "\n";
  }
  return out;
}

ProjectionModel load_model(const std::filesystem::path& path) {
  const std::string origin = path.string();
  ProjectionModel m;
  auto num = [&](const std::string& s, std::size_t line) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw DataError(origin + ":" + std::to_string(line) + ": bad number '" + s + "'");
    }
  };
  for (const auto& line : model::read_data_lines(path)) {
    const auto f = model::split(line.text, '\t');
    const std::string& key = f[0];
    auto need = [&](std::size_t count) {
      if (f.size() < count) {
        throw DataError(origin + ":" + std::to_string(line.number) + ": truncated '" + key + "'");
      }
    };
    need(2);
    if (key == "kind") {
      if (f[1] == "gam") m.kind = ProjectionKind::Gam;
      else if (f[1] == "linear") m.kind = ProjectionKind::Linear;
      else throw DataError(origin + ": unknown model kind '" + f[1] + "'");
    } else if (key == "k") {
      m.k = static_cast<int>(num(f[1], line.number));
    } else if (key == "intercept") {
      m.intercept = num(f[1], line.number);
    } else if (key == "r_squared") {
      m.fit_r_squared = num(f[1], line.number);
    } else if (key == "n_train") {
      m.n_train = static_cast<std::size_t>(num(f[1], line.number));
    } else if (key == "smooth") {
      need(6);
      SplineSmooth s;
      s.lo = num(f[2], line.number);
      s.hi = num(f[3], line.number);
      s.segments = static_cast<int>(num(f[4], line.number));
      if (s.segments < 1 || f.size() != static_cast<std::size_t>(6 + s.segments + 3)) {
        throw DataError(origin + ":" + std::to_string(line.number) + ": bad smooth record");
      }
      s.penalty = num(f[5], line.number);
      s.coefficients.resize(s.segments + 3);
      for (int b = 0; b < s.segments + 3; ++b) s.coefficients[b] = num(f[6 + b], line.number);
      m.smooths.push_back(std::move(s));
    } else if (key == "weights") {
      m.weights.resize(static_cast<Index>(f.size() - 1));
      for (std::size_t d = 1; d < f.size(); ++d) {
        m.weights[static_cast<Index>(d - 1)] = num(f[d], line.number);
      }
    } else {
      throw DataError(origin + ":" + std::to_string(line.number) + ": unknown key '" + key + "'");
    }
  }
  const bool ok = m.k > 0 && (m.kind == ProjectionKind::Gam
                                  ? static_cast<int>(m.smooths.size()) == m.k
                                  : m.weights.size() == m.k);
  if (!ok) throw DataError(origin + ": model file is incomplete");
  return m;
}

}  // namespace ideoscale::net
