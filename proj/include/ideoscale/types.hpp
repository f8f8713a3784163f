#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ideoscale::model {

/// Opaque account token: nonempty, no whitespace. Compared bytewise.
using AccountId = std::string;

bool is_valid_account_id(std::string_view id);

enum class Party { D, R };

std::string_view to_string(Party p);
std::optional<Party> parse_party(std::string_view s);

struct FollowEdge {
  AccountId source;
  AccountId target;

  auto operator<=>(const FollowEdge&) const = default;
};

struct FollowEdgeList {
  std::vector<FollowEdge> edges;  // sorted, unique, no self-edges
  std::size_t duplicates_dropped = 0;
  std::size_t self_edges_dropped = 0;
};

/// Anchor scores on [-0.5, 0.5].
struct AnchorTable {
  std::map<AccountId, double> scores;
  bool translated_from_unit_interval = false;

  bool contains(const AccountId& id) const { return scores.count(id) != 0; }
};

struct RowRoster {
  std::set<AccountId> journalists;
  std::map<AccountId, Party> politically_active;

  std::size_t size() const { return journalists.size() + politically_active.size(); }
  bool contains(const AccountId& id) const {
    return journalists.count(id) != 0 || politically_active.count(id) != 0;
  }
};

/// Throws DataError if the journalist and active sets overlap.
void validate(const RowRoster& roster);

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Binary follow matrix. cells(i, j) == 1 iff rows[i] follows cols[j].
struct FollowMatrix {
  std::vector<AccountId> rows;
  std::vector<AccountId> cols;
  SparseMatrix cells;
};

/// A tokenized document. `boundaries` holds the token indices that start a
/// new punctuation-delimited segment (index 0 is implicit); phrases never
/// span a boundary.
struct Document {
  AccountId author;
  std::string group;
  std::vector<std::string> tokens;
  std::vector<std::size_t> boundaries;

  std::size_t word_count() const { return tokens.size(); }

  /// Contiguous token runs between boundaries.
  std::vector<std::span<const std::string>> segments() const;
};

struct TermScore {
  double score = 0.0;
  std::size_t y_D = 0;
  std::size_t y_R = 0;
};

enum class LogOddsForm {
  /// s(t) with the (|T|-1)*lambda total-prior denominator, as used for lexicon induction.
  DirichletPrior,
  /// Per-term Laplace smoothing: ln((y+l)/(n-y+l)). Sensitivity analysis only.
  Laplace,
};

struct TermScoreConfig {
  double lambda = 1.0;
  std::size_t n_D = 0;
  std::size_t n_R = 0;
  std::size_t n_T = 0;
  LogOddsForm form = LogOddsForm::DirichletPrior;
};

struct TermScoreTable {
  std::map<std::string, TermScore> entries;
  TermScoreConfig config;
};

enum class Side { Left, Right };

std::string_view to_string(Side s);
std::optional<Side> parse_side(std::string_view s);

struct Lexicon {
  std::set<std::string> left_terms;
  std::set<std::string> right_terms;

  bool balanced() const { return left_terms.size() == right_terms.size(); }
};

enum class Source { Network, Text };

std::string_view to_string(Source s);

struct IdeologyEstimate {
  AccountId account;
  double score = 0.0;
  Source source = Source::Network;
  std::optional<std::string> group;
};

/// Rows and columns embedded in one k-dimensional space.
struct EmbeddingSpace {
  int k = 0;
  std::vector<AccountId> row_ids;
  Eigen::MatrixXd row_vectors;  // row_ids.size() x k
  std::vector<AccountId> col_ids;
  Eigen::MatrixXd col_vectors;  // col_ids.size() x k
  Eigen::VectorXd singular_values;
  double exponent = 0.5;  // vectors = singular vectors * sigma^exponent
};

/// Throws DataError when dimensions or singular-value ordering are violated.
void validate(const EmbeddingSpace& space);

}  // namespace ideoscale::model
