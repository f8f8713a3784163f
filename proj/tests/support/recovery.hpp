#pragma once

// In-memory network pipeline on a synthetic world, for recovery checks.

#include "ideoscale/analysis/stats.hpp"
#include "ideoscale/net/matrix.hpp"
#include "ideoscale/net/projection.hpp"
#include "ideoscale/net/svd.hpp"
#include "ideoscale/synth.hpp"

#include <vector>

namespace fixture {

struct Recovery {
  ideoscale::synth::NetworkSample sample;
  ideoscale::model::EmbeddingSpace space;
  ideoscale::net::ProjectionModel model;
  std::vector<ideoscale::model::IdeologyEstimate> estimates;
  double spearman = 0.0;  // estimates vs ground truth over all rows
  double auc = 0.0;       // registered D vs R among active rows
};

inline Recovery recover(const ideoscale::synth::SynthConfig& world, int k = 5,
                        ideoscale::net::ProjectionKind kind = ideoscale::net::ProjectionKind::Gam) {
  using namespace ideoscale;
  Recovery r;
  r.sample = synth::gen_network(world);
  const auto anchored = net::anchored_accounts(r.sample.anchors);
  auto active = net::filter_active_users(r.sample.edges, r.sample.registrations, anchored);
  std::vector<model::AccountId> journalists(r.sample.roster.journalists.begin(),
                                            r.sample.roster.journalists.end());
  const auto roster = net::make_roster(journalists, std::move(active));
  const auto elites = net::select_elites(r.sample.edges, roster, anchored);
  const auto built = net::build_matrix(r.sample.edges, roster, elites);

  net::SvdConfig svd;
  svd.k = k;
  svd.seed = world.seed;
  r.space = net::truncated_svd(net::ppmi_transform(built.matrix.cells), built.matrix.rows,
                               built.matrix.cols, svd);
  net::ProjectionConfig proj;
  proj.kind = kind;
  r.model = net::fit_projection(r.space, r.sample.anchors, proj);
  r.estimates = net::project_rows(r.space, r.model);

  std::vector<double> est, truth, dem, rep;
  for (const auto& e : r.estimates) {
    est.push_back(e.score);
    truth.push_back(r.sample.truth.at(e.account));
    const auto it = roster.politically_active.find(e.account);
    if (it != roster.politically_active.end()) {
      (it->second == model::Party::D ? dem : rep).push_back(e.score);
    }
  }
  r.spearman = analysis::pearson(analysis::average_ranks(est), analysis::average_ranks(truth));
  if (!dem.empty() && !rep.empty()) r.auc = analysis::separation_auc(dem, rep);
  return r;
}

}  // namespace fixture
