#pragma once

#include "ideoscale/types.hpp"

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ideoscale::text {

struct ScoringConfig {
  double lambda = 1.0;
  std::size_t top_n_per_side = 100;
  std::size_t lexicon_size_per_side = 57;
  /// Permits lexicon_size_per_side > top_n_per_side.
  bool allow_size_override = false;
  model::LogOddsForm form = model::LogOddsForm::DirichletPrior;
};

/// Smoothed log-odds of a term being used by R versus D authors.
///
/// DirichletPrior:
///   ln((y_R + l) / (n_R + (n_T - 1) l - y_R)) - ln((y_D + l) / (n_D + (n_T - 1) l - y_D))
/// Laplace:
///   ln((y_R + l) / (n_R - y_R + l)) - ln((y_D + l) / (n_D - y_D + l))
///
/// Positive means right-leaning.
double log_odds_score(std::size_t y_R, std::size_t y_D, const model::TermScoreConfig& cfg);

/// Scores every term by how many distinct D and R authors use it at least
/// once. Documents whose group is neither "D" nor "R" are ignored.
model::TermScoreTable score_terms(const std::vector<model::Document>& corpus,
                                  const std::set<std::string>& terms,
                                  const ScoringConfig& cfg = {});

/// Terms of one side in rank order: most negative first for Left, most
/// positive first for Right; ties broken lexicographically. Zero scores
/// belong to neither side.
std::vector<std::string> ranked_side(const model::TermScoreTable& table, model::Side side);

struct LexiconReport {
  std::size_t left_kept = 0;        // taken from the top-N window
  std::size_t right_kept = 0;
  std::size_t left_backfilled = 0;  // taken from beyond the window
  std::size_t right_backfilled = 0;
};

/// Takes the top-N terms per side, intersects them with `curated_keep` when
/// given, and back-fills a short side from the next-ranked terms beyond the
/// window so both sides end with lexicon_size_per_side terms.
model::Lexicon build_lexicon(const model::TermScoreTable& table,
                             const std::optional<std::set<std::string>>& curated_keep,
                             const ScoringConfig& cfg = {}, LexiconReport* report = nullptr);

}  // namespace ideoscale::text
