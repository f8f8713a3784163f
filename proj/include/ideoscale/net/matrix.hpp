#pragma once

#include "ideoscale/types.hpp"

#include <cstddef>
#include <map>
#include <set>
#include <vector>

namespace ideoscale::net {

using model::AccountId;
using model::Party;

struct EliteSelectionConfig {
  /// An account becomes a column when followed by strictly more than this
  /// fraction of all rows.
  double follow_fraction_threshold = 0.02;
  bool always_include_anchored = true;
};

struct ActiveUserFilter {
  std::size_t min_congressional_follows = 3;
  bool require_party = true;
};

/// Accounts carrying an anchor score.
std::set<AccountId> anchored_accounts(const model::AnchorTable& anchors);

/// Registered D/R accounts that follow at least `min_congressional_follows`
/// anchored accounts.
std::map<AccountId, Party> filter_active_users(const model::FollowEdgeList& edges,
                                               const std::map<AccountId, Party>& registrations,
                                               const model::AnchorTable& anchors,
                                               const ActiveUserFilter& filter = {});
std::map<AccountId, Party> filter_active_users(const model::FollowEdgeList& edges,
                                               const std::map<AccountId, Party>& registrations,
                                               const std::set<AccountId>& anchored,
                                               const ActiveUserFilter& filter = {});

/// Builds the row roster; accounts listed as journalists are removed from the
/// active set (with a warning) so the two sets stay disjoint.
model::RowRoster make_roster(const std::vector<AccountId>& journalists,
                             std::map<AccountId, Party> active);

/// Elite columns ordered by descending row-follower count, ties lexicographic.
std::vector<AccountId> select_elites(const model::FollowEdgeList& edges,
                                     const model::RowRoster& rows,
                                     const model::AnchorTable& anchors,
                                     const EliteSelectionConfig& cfg = {});
std::vector<AccountId> select_elites(const model::FollowEdgeList& edges,
                                     const model::RowRoster& rows,
                                     const std::set<AccountId>& anchored,
                                     const EliteSelectionConfig& cfg = {});

struct MatrixBuild {
  model::FollowMatrix matrix;
  std::vector<AccountId> dropped_rows;  // rows following no elite
  std::vector<AccountId> dropped_cols;  // elites followed by no retained row
};

/// Rows are ordered journalists first, then politically active users, each
/// lexicographically.
MatrixBuild build_matrix(const model::FollowEdgeList& edges, const model::RowRoster& rows,
                         const std::vector<AccountId>& elites);

/// Positive pointwise mutual information of a nonnegative count matrix:
/// max(0, ln(x_ij * S / (r_i * c_j))). Zero cells stay zero.
model::SparseMatrix ppmi_transform(const model::SparseMatrix& m);

}  // namespace ideoscale::net
