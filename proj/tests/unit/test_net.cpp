#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "recovery.hpp"

#include "ideoscale/error.hpp"
#include "ideoscale/io.hpp"
#include "ideoscale/net/matrix.hpp"
#include "ideoscale/net/projection.hpp"
#include "ideoscale/net/svd.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace ideoscale;
using namespace ideoscale::net;
using model::FollowEdge;
using model::FollowEdgeList;

namespace {

FollowEdgeList edge_list(std::vector<FollowEdge> edges) {
  std::sort(edges.begin(), edges.end());
  return {edges, 0, 0};
}

model::RowRoster journalists_only(int n) {
  model::RowRoster r;
  for (int i = 0; i < n; ++i) r.journalists.insert("row" + std::to_string(1000 + i));
  return r;
}

/// Embedding with the given column vectors and no rows.
model::EmbeddingSpace columns_only(const Eigen::MatrixXd& cols) {
  model::EmbeddingSpace s;
  s.k = static_cast<int>(cols.cols());
  s.col_vectors = cols;
  for (Eigen::Index j = 0; j < cols.rows(); ++j) s.col_ids.push_back("c" + std::to_string(j));
  s.row_vectors = Eigen::MatrixXd::Zero(0, s.k);
  s.singular_values = Eigen::VectorXd::LinSpaced(s.k, static_cast<double>(s.k), 1.0);
  return s;
}

}  // namespace

TEST_CASE("filter_active_users over a six-user fixture") {
  model::AnchorTable anchors;
  for (const char* a : {"c1", "c2", "c3", "c4", "c5"}) anchors.scores[a] = 0.1;
  std::vector<FollowEdge> edges;
  auto follow = [&](const std::string& u, int n) {
    for (int i = 1; i <= n; ++i) edges.push_back({u, "c" + std::to_string(i)});
  };
  follow("u3d", 3);    // 3 anchored follows, D -> in
  follow("u0d", 0);    // none -> out
  follow("u5x", 5);    // unregistered -> out
  follow("u2r", 2);    // below threshold -> out
  follow("u4r", 4);    // R -> in
  follow("u3n", 3);
  edges.push_back({"u3n", "elsewhere"});
  edges.push_back({"u0d", "elsewhere"});
  const std::map<model::AccountId, model::Party> regs = {{"u3d", model::Party::D},
                                                         {"u0d", model::Party::D},
                                                         {"u2r", model::Party::R},
                                                         {"u4r", model::Party::R},
                                                         {"u3n", model::Party::R}};
  const auto active = filter_active_users(edge_list(edges), regs, anchors);
  const std::map<model::AccountId, model::Party> want = {
      {"u3d", model::Party::D}, {"u3n", model::Party::R}, {"u4r", model::Party::R}};
  CHECK(active == want);

  ActiveUserFilter no_party;
  no_party.require_party = false;
  CHECK_THROWS_AS(filter_active_users(edge_list(edges), regs, anchors, no_party), UsageError);
}

TEST_CASE("select_elites uses a strict threshold and keeps anchored accounts") {
  const auto rows = journalists_only(100);
  std::vector<FollowEdge> edges;
  int r = 0;
  for (auto it = rows.journalists.begin(); r < 3; ++it, ++r) edges.push_back({*it, "three"});
  r = 0;
  for (auto it = rows.journalists.begin(); r < 2; ++it, ++r) edges.push_back({*it, "two"});
  model::AnchorTable anchors;
  anchors.scores["lonely"] = 0.0;
  const auto elites = select_elites(edge_list(edges), rows, anchors);
  CHECK(elites == std::vector<model::AccountId>{"three", "lonely"});

  CHECK_THROWS_AS(select_elites(edge_list({{"row1000", "two"}}), rows, model::AnchorTable{}),
                  DataError);
}

TEST_CASE("build_matrix examples") {
  model::RowRoster rows;
  rows.journalists = {"j1", "j2"};
  SUBCASE("rows following no elite are dropped") {
    const auto b = build_matrix(edge_list({{"j1", "e1"}}), rows, {"e1"});
    CHECK(b.matrix.rows == std::vector<model::AccountId>{"j1"});
    CHECK(b.dropped_rows == std::vector<model::AccountId>{"j2"});
    CHECK(fixture::to_dense(b.matrix.cells) == oracle::Dense{{1.0}});
  }
  SUBCASE("two by two") {
    const auto b = build_matrix(edge_list({{"j1", "e1"}, {"j1", "e2"}, {"j2", "e2"}}), rows,
                                {"e1", "e2"});
    CHECK(fixture::to_dense(b.matrix.cells) == oracle::Dense{{1.0, 1.0}, {0.0, 1.0}});
  }
  SUBCASE("no edges touch the elites") {
    CHECK_THROWS_AS(build_matrix(edge_list({{"j1", "x"}}), rows, {"e1"}), DataError);
  }
}

TEST_CASE("ppmi examples") {
  const auto ones = fixture::to_dense(ppmi_transform(fixture::to_sparse({{1, 1}, {1, 1}})));
  CHECK(ones == oracle::Dense{{0, 0}, {0, 0}});

  const auto eye = fixture::to_dense(ppmi_transform(fixture::to_sparse({{1, 0}, {0, 1}})));
  CHECK(eye[0][0] == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(eye[1][1] == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(eye[0][1] == 0.0);

  const auto three = fixture::to_dense(ppmi_transform(fixture::to_sparse({{1, 1}, {1, 0}, {0, 1}})));
  CHECK(three[1][0] == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(three[0][0] == doctest::Approx(0.0));
}

TEST_CASE("ppmi properties on random matrices") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<std::size_t> dim(1, 12);
  for (int trial = 0; trial < 300; ++trial) {
    const auto x = fixture::random_binary(rng, dim(rng), dim(rng), 0.35);
    const auto y = fixture::to_dense(ppmi_transform(fixture::to_sparse(x)));
    const auto want = oracle::ppmi(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t j = 0; j < x[i].size(); ++j) {
        CHECK(y[i][j] >= 0.0);
        if (x[i][j] == 0.0) CHECK(y[i][j] == 0.0);
        CHECK(std::abs(y[i][j] - want[i][j]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("svd examples") {
  SUBCASE("rank one") {
    oracle::Dense a(6, std::vector<double>(4));
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t j = 0; j < 4; ++j) a[i][j] = (i + 1.0) * (j + 2.0);
    }
    SvdConfig cfg;
    cfg.k = 1;
    const auto f = truncated_svd_factors(fixture::to_sparse(a), cfg);
    const Eigen::MatrixXd recon = f.U * f.sigma.asDiagonal() * f.V.transpose();
    CHECK((recon - fixture::to_sparse(a).toDense()).norm() <= 1e-9);
  }
  SUBCASE("full rank reconstructs") {
    std::mt19937_64 rng(22);
    const auto a = fixture::random_real(rng, 7, 5);
    SvdConfig cfg;
    cfg.k = 5;
    const auto f = truncated_svd_factors(fixture::to_sparse(a), cfg);
    const Eigen::MatrixXd recon = f.U * f.sigma.asDiagonal() * f.V.transpose();
    CHECK((recon - fixture::to_sparse(a).toDense()).norm() <= 1e-9);
  }
  SUBCASE("sparse 20x10 rank five against the oracle") {
    std::mt19937_64 rng(23);
    const auto a = fixture::random_binary(rng, 20, 10, 0.3);
    SvdConfig cfg;
    cfg.k = 5;
    const auto f = truncated_svd_factors(fixture::to_sparse(a), cfg);
    const Eigen::MatrixXd dense = fixture::to_sparse(a).toDense();
    const double residual = (dense - f.U * f.sigma.asDiagonal() * f.V.transpose()).norm();
    CHECK(std::abs(residual - oracle::rank_k_residual(a, 5)) / dense.norm() <= 1e-6);
  }
  SUBCASE("k beyond the smaller dimension") {
    SvdConfig cfg;
    cfg.k = 3;
    CHECK_THROWS_AS(truncated_svd_factors(fixture::to_sparse({{1, 0}, {0, 1}, {1, 1}}), cfg),
                    DataError);
  }
}

TEST_CASE("singular values match the oracle") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = fixture::random_real(rng, 15, 9);
    SvdConfig cfg;
    cfg.k = 9;
    const auto f = truncated_svd_factors(fixture::to_sparse(a), cfg);
    const auto want = oracle::jacobi_svd(a);
    for (int d = 0; d < 9; ++d) CHECK(f.sigma(d) == doctest::Approx(want.sigma[static_cast<std::size_t>(d)]).epsilon(1e-10));
  }
}

TEST_CASE("randomized svd agrees with the oracle on decaying spectra") {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 80, m = 40;
    // Low-rank signal with geometric decay plus small noise.
    oracle::Dense a(n, std::vector<double>(m, 0.0));
    std::normal_distribution<double> z(0.0, 1.0);
    for (int r = 0; r < 12; ++r) {
      std::vector<double> u(n), v(m);
      for (double& x : u) x = z(rng);
      for (double& x : v) x = z(rng);
      const double w = std::pow(0.5, r);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) a[i][j] += w * u[i] * v[j];
      }
    }
    for (auto& row : a) {
      for (double& x : row) x += 1e-6 * z(rng);
    }
    SvdConfig cfg;
    cfg.k = 5;
    cfg.method = SvdMethod::Randomized;
    cfg.seed = static_cast<std::uint64_t>(trial);
    const auto f = truncated_svd_factors(fixture::to_sparse(a), cfg);
    const Eigen::MatrixXd dense = fixture::to_sparse(a).toDense();
    const double residual = (dense - f.U * f.sigma.asDiagonal() * f.V.transpose()).norm();
    CHECK(std::abs(residual - oracle::rank_k_residual(a, 5)) / dense.norm() <= 1e-6);
  }
}

TEST_CASE("embedding vectors un-weight to orthonormal factors") {
  std::mt19937_64 rng(26);
  for (const auto method : {SvdMethod::Dense, SvdMethod::Randomized}) {
    const auto a = fixture::random_binary(rng, 60, 30, 0.2);
    std::vector<model::AccountId> rows(60), cols(30);
    for (int i = 0; i < 60; ++i) rows[static_cast<std::size_t>(i)] = "r" + std::to_string(i);
    for (int j = 0; j < 30; ++j) cols[static_cast<std::size_t>(j)] = "c" + std::to_string(j);
    SvdConfig cfg;
    cfg.k = 5;
    cfg.method = method;
    const auto space = truncated_svd(ppmi_transform(fixture::to_sparse(a)), rows, cols, cfg);
    const auto f = unweight(space);
    CHECK((f.U.transpose() * f.U - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((f.V.transpose() * f.V - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-8);
    for (int d = 1; d < 5; ++d) CHECK(space.singular_values(d - 1) >= space.singular_values(d));
    for (int d = 0; d < 5; ++d) {
      Eigen::Index arg = 0;
      f.U.col(d).cwiseAbs().maxCoeff(&arg);
      CHECK(f.U(arg, d) > 0.0);
    }
  }
}

TEST_CASE("svd is deterministic for a seed") {
  std::mt19937_64 rng(27);
  const auto a = fixture::to_sparse(fixture::random_binary(rng, 90, 45, 0.2));
  SvdConfig cfg;
  cfg.method = SvdMethod::Randomized;
  cfg.seed = 99;
  const auto f1 = truncated_svd_factors(a, cfg);
  const auto f2 = truncated_svd_factors(a, cfg);
  CHECK(f1.U == f2.U);
  CHECK(f1.V == f2.V);
  CHECK(f1.sigma == f2.sigma);
}

TEST_CASE("linear anchors are fit almost exactly with a monotone smooth") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd cols(200, 2);
  for (Eigen::Index j = 0; j < 200; ++j) cols.row(j) << u(rng), u(rng);
  auto space = columns_only(cols);
  model::AnchorTable anchors;
  for (Eigen::Index j = 0; j < 200; ++j) anchors.scores[space.col_ids[static_cast<std::size_t>(j)]] = 0.4 * cols(j, 0);

  const auto m = fit_projection(space, anchors);
  CHECK(m.fit_r_squared >= 0.999);
  double prev = -1e300;
  for (double x = -1.0; x <= 1.0; x += 0.01) {
    const double f = m.component(0, x);
    CHECK(f >= prev - 1e-12);
    prev = f;
  }
  CHECK(std::abs(m.fit_r_squared - r_squared(m, space, anchors)) <= 1e-9);

  ProjectionConfig linear;
  linear.kind = ProjectionKind::Linear;
  const auto ml = fit_projection(space, anchors, linear);
  CHECK(ml.fit_r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ml.weights(0) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("sigmoid anchors are recovered") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd cols(200, 3);
  for (Eigen::Index j = 0; j < 200; ++j) cols.row(j) << u(rng), u(rng), u(rng);
  auto space = columns_only(cols);
  model::AnchorTable anchors;
  for (Eigen::Index j = 0; j < 200; ++j) {
    anchors.scores[space.col_ids[static_cast<std::size_t>(j)]] = 0.9 / (1.0 + std::exp(-8.0 * cols(j, 0))) - 0.45;
  }
  const auto m = fit_projection(space, anchors);
  CHECK(m.fit_r_squared >= 0.95);
  CHECK(std::abs(m.fit_r_squared - r_squared(m, space, anchors)) <= 1e-9);
}

TEST_CASE("constant anchors give zero R^2 and the constant as intercept") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd cols(50, 2);
  for (Eigen::Index j = 0; j < 50; ++j) cols.row(j) << u(rng), u(rng);
  auto space = columns_only(cols);
  model::AnchorTable anchors;
  for (const auto& id : space.col_ids) anchors.scores[id] = 0.125;
  const auto m = fit_projection(space, anchors);
  CHECK(m.fit_r_squared == 0.0);
  CHECK(m.intercept == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(m.evaluate(Eigen::Vector2d(0.3, -0.7)) == doctest::Approx(0.125).epsilon(1e-9));
}

TEST_CASE("too few anchors is an error naming the counts") {
  Eigen::MatrixXd cols = Eigen::MatrixXd::Random(20, 5);
  auto space = columns_only(cols);
  model::AnchorTable anchors;
  for (int j = 0; j < 4; ++j) anchors.scores[space.col_ids[static_cast<std::size_t>(j)]] = 0.1 * j;
  try {
    fit_projection(space, anchors);
    FAIL("expected an error");
  } catch (const DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("found 4") != std::string::npos);
    CHECK(msg.find("at least 10") != std::string::npos);
  }
}

TEST_CASE("project_rows examples") {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd cols(80, 2);
  for (Eigen::Index j = 0; j < 80; ++j) cols.row(j) << u(rng), u(rng);
  auto space = columns_only(cols);
  model::AnchorTable anchors;
  for (Eigen::Index j = 0; j < 80; ++j) {
    anchors.scores[space.col_ids[static_cast<std::size_t>(j)]] = 0.3 * std::sin(2.0 * cols(j, 0)) + 0.1 * cols(j, 1);
  }
  const auto m = fit_projection(space, anchors);

  space.row_ids = {"same", "origin"};
  space.row_vectors = Eigen::MatrixXd(2, 2);
  space.row_vectors.row(0) = cols.row(17);
  space.row_vectors.row(1).setZero();
  const auto est = project_rows(space, m);
  REQUIRE(est.size() == 2);
  CHECK(est[0].score == m.evaluate(cols.row(17).transpose()));
  CHECK(est[1].score == doctest::Approx(m.intercept + m.component(0, 0.0) + m.component(1, 0.0)).epsilon(1e-12));
  CHECK(est[0].source == model::Source::Network);

  auto wrong = space;
  wrong.k = 3;
  wrong.row_vectors = Eigen::MatrixXd::Zero(2, 3);
  wrong.col_vectors = Eigen::MatrixXd::Zero(80, 3);
  wrong.singular_values = Eigen::Vector3d(3, 2, 1);
  CHECK_THROWS_AS(project_rows(wrong, m), DataError);
}

TEST_CASE("model file round-trips") {
  std::mt19937_64 rng(35);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd cols(60, 3);
  for (Eigen::Index j = 0; j < 60; ++j) cols.row(j) << u(rng), u(rng), u(rng);
  auto space = columns_only(cols);
  model::AnchorTable anchors;
  for (Eigen::Index j = 0; j < 60; ++j) {
    anchors.scores[space.col_ids[static_cast<std::size_t>(j)]] = 0.4 * std::tanh(2.0 * cols(j, 1));
  }
  fixture::TempDir dir("model");
  for (const auto kind : {ProjectionKind::Gam, ProjectionKind::Linear}) {
    ProjectionConfig cfg;
    cfg.kind = kind;
    const auto m = fit_projection(space, anchors, cfg);
    model::write_file(dir / "m.tsv", serialize_model(m, "-"));
    const auto back = load_model(dir / "m.tsv");
    CHECK(back.kind == m.kind);
    for (Eigen::Index j = 0; j < 60; j += 7) {
      CHECK(back.evaluate(cols.row(j).transpose()) ==
            doctest::Approx(m.evaluate(cols.row(j).transpose())).epsilon(1e-7));
    }
  }
}

TEST_CASE("penalty grid spans the configured range") {
  const auto grid = penalty_grid({});
  REQUIRE(grid.size() == 20);
  CHECK(grid.front() == doctest::Approx(1e-4));
  CHECK(grid.back() == doctest::Approx(1e4));
}

TEST_CASE("synthetic recovery on the standard world") {
  synth::SynthConfig world;
  const auto r = fixture::recover(world);
  CHECK(r.estimates.size() > 1800);
  CHECK(r.spearman >= 0.9);
  CHECK(r.auc >= 0.95);
}

TEST_CASE("recovery is stable across latent ranks") {
  synth::SynthConfig world;
  for (int k : {2, 5, 10}) {
    CAPTURE(k);
    const auto r = fixture::recover(world, k);
    MESSAGE("k=" << k << " spearman=" << r.spearman << " auc=" << r.auc);
    CHECK(r.spearman >= 0.9);
    CHECK(r.auc >= 0.95);
  }
}

TEST_CASE("column permutation leaves row scores unchanged") {
  synth::SynthConfig world = ideoscale::synth::SynthConfig{};
  world.n_journalists = 50;
  world.n_active_users = 200;
  world.n_elites = 100;
  const auto sample = synth::gen_network(world);
  const auto anchored = anchored_accounts(sample.anchors);
  auto active = filter_active_users(sample.edges, sample.registrations, anchored);
  std::vector<model::AccountId> journalists(sample.roster.journalists.begin(),
                                            sample.roster.journalists.end());
  const auto roster = make_roster(journalists, std::move(active));
  const auto built = build_matrix(sample.edges, roster, select_elites(sample.edges, roster, anchored));
  const auto& m = built.matrix;

  std::vector<Eigen::Index> perm(static_cast<std::size_t>(m.cells.cols()));
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(36);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<model::AccountId> cols2(perm.size());
  Eigen::PermutationMatrix<Eigen::Dynamic> p(static_cast<Eigen::Index>(perm.size()));
  for (std::size_t j = 0; j < perm.size(); ++j) {
    cols2[j] = m.cols[static_cast<std::size_t>(perm[j])];
    p.indices()[static_cast<Eigen::Index>(j)] = static_cast<int>(perm[j]);
  }
  const model::SparseMatrix cells2 = m.cells * p;

  SvdConfig cfg;
  const auto s1 = truncated_svd(ppmi_transform(m.cells), m.rows, m.cols, cfg);
  const auto s2 = truncated_svd(ppmi_transform(cells2), m.rows, cols2, cfg);
  // Column vectors follow their accounts.
  for (std::size_t j = 0; j < perm.size(); ++j) {
    const auto src = static_cast<Eigen::Index>(perm[j]);
    CHECK((s2.col_vectors.row(static_cast<Eigen::Index>(j)) - s1.col_vectors.row(src)).cwiseAbs().maxCoeff() <= 1e-9);
  }
  const auto e1 = project_rows(s1, fit_projection(s1, sample.anchors));
  const auto e2 = project_rows(s2, fit_projection(s2, sample.anchors));
  REQUIRE(e1.size() == e2.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < e1.size(); ++i) worst = std::max(worst, std::abs(e1[i].score - e2[i].score));
  CHECK(worst <= 1e-9);
}
