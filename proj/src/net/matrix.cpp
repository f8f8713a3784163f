#include "ideoscale/net/matrix.hpp"

#include "ideoscale/error.hpp"
#include "ideoscale/log.hpp"
#include "ideoscale/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

namespace ideoscale::net {

std::set<AccountId> anchored_accounts(const model::AnchorTable& anchors) {
  std::set<AccountId> out;
  for (const auto& [id, score] : anchors.scores) out.insert(id);
  return out;
}

std::map<AccountId, Party> filter_active_users(const model::FollowEdgeList& edges,
                                               const std::map<AccountId, Party>& registrations,
                                               const model::AnchorTable& anchors,
                                               const ActiveUserFilter& filter) {
  return filter_active_users(edges, registrations, anchored_accounts(anchors), filter);
}

std::map<AccountId, Party> filter_active_users(const model::FollowEdgeList& edges,
                                               const std::map<AccountId, Party>& registrations,
                                               const std::set<AccountId>& anchored,
                                               const ActiveUserFilter& filter) {
  if (!filter.require_party) {
    throw UsageError("politically active rows need a party label; require_party cannot be false");
  }
  std::map<AccountId, std::size_t> follows;
  for (const auto& e : edges.edges) {
    if (anchored.count(e.target) != 0 && registrations.count(e.source) != 0) ++follows[e.source];
  }
  std::map<AccountId, Party> out;
  for (const auto& [id, party] : registrations) {
    const auto it = follows.find(id);
    const std::size_t n = it == follows.end() ? 0 : it->second;
    if (n >= filter.min_congressional_follows) out.emplace(id, party);
  }
  return out;
}

model::RowRoster make_roster(const std::vector<AccountId>& journalists,
                             std::map<AccountId, Party> active) {
  model::RowRoster roster;
  for (const auto& j : journalists) {
    roster.journalists.insert(j);
    if (active.erase(j) != 0) {
      log_warn("journalist '" + j + "' also qualifies as politically active; kept as journalist");
    }
  }
  roster.politically_active = std::move(active);
  return roster;
}

std::vector<AccountId> select_elites(const model::FollowEdgeList& edges,
                                     const model::RowRoster& rows,
                                     const model::AnchorTable& anchors,
                                     const EliteSelectionConfig& cfg) {
  return select_elites(edges, rows, anchored_accounts(anchors), cfg);
}

std::vector<AccountId> select_elites(const model::FollowEdgeList& edges,
                                     const model::RowRoster& rows,
                                     const std::set<AccountId>& anchored,
                                     const EliteSelectionConfig& cfg) {
  if (rows.size() == 0) throw DataError("select_elites: no rows");
  if (!(cfg.follow_fraction_threshold > 0.0) || cfg.follow_fraction_threshold > 1.0) {
    throw UsageError("elite follow fraction threshold must lie in (0, 1]");
  }
  // Edge list is unique, so each (row, target) pair counts once.
  std::map<AccountId, std::size_t> followers;
  for (const auto& e : edges.edges) {
    if (rows.contains(e.source)) ++followers[e.target];
  }
  const double cutoff = cfg.follow_fraction_threshold * static_cast<double>(rows.size());

  std::vector<std::pair<std::size_t, AccountId>> chosen;
  for (const auto& [id, n] : followers) {
    const bool always = cfg.always_include_anchored && anchored.count(id) != 0;
    if (always || static_cast<double>(n) > cutoff) chosen.emplace_back(n, id);
  }
  if (cfg.always_include_anchored) {
    for (const auto& id : anchored) {
      if (followers.count(id) == 0) chosen.emplace_back(0, id);
    }
  }
  if (chosen.empty()) throw DataError("no columns: no account passes the elite selection rule");
  std::sort(chosen.begin(), chosen.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<AccountId> out;
  out.reserve(chosen.size());
  for (auto& [n, id] : chosen) out.push_back(std::move(id));
  return out;
}

MatrixBuild build_matrix(const model::FollowEdgeList& edges, const model::RowRoster& rows,
                         const std::vector<AccountId>& elites) {
  if (elites.empty()) throw DataError("build_matrix: no elite columns");

  std::vector<AccountId> row_order(rows.journalists.begin(), rows.journalists.end());
  for (const auto& [id, p] : rows.politically_active) row_order.push_back(id);

  std::unordered_map<AccountId, std::size_t> col_index;
  for (std::size_t j = 0; j < elites.size(); ++j) {
    if (!col_index.emplace(elites[j], j).second) {
      throw DataError("build_matrix: duplicate elite '" + elites[j] + "'");
    }
  }
  std::unordered_map<AccountId, std::size_t> row_index;
  for (std::size_t i = 0; i < row_order.size(); ++i) row_index.emplace(row_order[i], i);

  std::vector<std::vector<std::size_t>> follows(row_order.size());
  for (const auto& e : edges.edges) {
    const auto r = row_index.find(e.source);
    if (r == row_index.end()) continue;
    const auto c = col_index.find(e.target);
    if (c == col_index.end()) continue;
    follows[r->second].push_back(c->second);
  }

  MatrixBuild out;
  std::vector<std::size_t> kept_rows;
  std::vector<bool> col_used(elites.size(), false);
  for (std::size_t i = 0; i < row_order.size(); ++i) {
    if (follows[i].empty()) {
      out.dropped_rows.push_back(row_order[i]);
      continue;
    }
    kept_rows.push_back(i);
    for (std::size_t j : follows[i]) col_used[j] = true;
  }
  if (kept_rows.empty()) throw DataError("build_matrix: no row follows any elite column");

  std::vector<long> col_map(elites.size(), -1);
  for (std::size_t j = 0; j < elites.size(); ++j) {
    if (col_used[j]) {
      col_map[j] = static_cast<long>(out.matrix.cols.size());
      out.matrix.cols.push_back(elites[j]);
    } else {
      out.dropped_cols.push_back(elites[j]);
    }
  }

  std::vector<Eigen::Triplet<double>> trips;
  for (std::size_t r = 0; r < kept_rows.size(); ++r) {
    const std::size_t i = kept_rows[r];
    out.matrix.rows.push_back(row_order[i]);
    for (std::size_t j : follows[i]) {
      trips.emplace_back(static_cast<int>(r), static_cast<int>(col_map[j]), 1.0);
    }
  }
  out.matrix.cells.resize(static_cast<Eigen::Index>(out.matrix.rows.size()),
                          static_cast<Eigen::Index>(out.matrix.cols.size()));
  out.matrix.cells.setFromTriplets(trips.begin(), trips.end());
  out.matrix.cells.makeCompressed();

  if (!out.dropped_rows.empty()) {
    log_warn("build_matrix: dropped " + std::to_string(out.dropped_rows.size()) +
             " row(s) that follow no elite column");
  }
  if (!out.dropped_cols.empty()) {
    log_warn("build_matrix: dropped " + std::to_string(out.dropped_cols.size()) +
             " elite column(s) followed by no row");
  }
  return out;
}

model::SparseMatrix ppmi_transform(const model::SparseMatrix& m) {
  using Index = Eigen::Index;
  const Index nr = m.rows();
  const Index nc = m.cols();
  std::vector<double> row_sum(static_cast<std::size_t>(nr), 0.0);
  std::vector<double> col_sum(static_cast<std::size_t>(nc), 0.0);
  double total = 0.0;
  for (Index i = 0; i < m.outerSize(); ++i) {
    for (model::SparseMatrix::InnerIterator it(m, i); it; ++it) {
      if (it.value() < 0.0) throw DataError("ppmi_transform: negative cell");
      row_sum[static_cast<std::size_t>(it.row())] += it.value();
      col_sum[static_cast<std::size_t>(it.col())] += it.value();
    }
  }
  for (double r : row_sum) total += r;
  if (!(total > 0.0)) throw NumericalError("ppmi_transform: matrix has no nonzero cell");

  std::vector<std::vector<Eigen::Triplet<double>>> per_row(static_cast<std::size_t>(nr));
  parallel_for(static_cast<std::size_t>(m.outerSize()), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (model::SparseMatrix::InnerIterator it(m, static_cast<Index>(i)); it; ++it) {
        if (it.value() == 0.0) continue;
        const double pmi = std::log(it.value() * total /
                                    (row_sum[static_cast<std::size_t>(it.row())] *
                                     col_sum[static_cast<std::size_t>(it.col())]));
        if (pmi > 0.0) {
          per_row[i].emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), pmi);
        }
      }
    }
  });
  std::vector<Eigen::Triplet<double>> trips;
  for (auto& r : per_row) trips.insert(trips.end(), r.begin(), r.end());
  model::SparseMatrix out(nr, nc);
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  return out;
}

}  // namespace ideoscale::net
