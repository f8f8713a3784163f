#pragma once

#include "ideoscale/types.hpp"

#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace ideoscale::text {

struct AuthorFilter {
  std::size_t min_articles = 10;
  /// Articles must have strictly more words than this.
  std::size_t min_words = 200;
};

struct AuthorScore {
  model::AccountId author;
  std::size_t y_R = 0;
  std::size_t y_L = 0;
  double score = 0.0;
  std::size_t n_articles_used = 0;
  std::string group;  // most frequent group among the articles used
};

/// ln((y_R + 1) / (y_L + 1)); positive means right-leaning.
double author_score(std::size_t y_R, std::size_t y_L);

/// Greedy longest-match, non-overlapping, left-to-right lexicon counter.
class LexiconMatcher {
 public:
  explicit LexiconMatcher(const model::Lexicon& lexicon);

  struct Counts {
    std::size_t right = 0;
    std::size_t left = 0;
  };

  Counts count(std::span<const std::string> segment) const;
  Counts count(const model::Document& doc) const;

 private:
  std::unordered_map<std::string, model::Side> terms_;
  std::size_t max_len_ = 0;
};

/// Authors with at least min_articles articles longer than min_words words
/// whose qualifying articles contain at least one lexicon term.
std::set<model::AccountId> filter_authors(const std::vector<model::Document>& corpus,
                                          const model::Lexicon& lexicon,
                                          const AuthorFilter& filter = {});

/// Scores each eligible author over their qualifying articles, in author order.
std::vector<AuthorScore> score_authors(const std::vector<model::Document>& corpus,
                                       const model::Lexicon& lexicon,
                                       const std::set<model::AccountId>& eligible,
                                       const AuthorFilter& filter = {});

std::vector<model::IdeologyEstimate> to_estimates(const std::vector<AuthorScore>& scores);

// `author<TAB>score<TAB>y_R<TAB>y_L<TAB>n_articles<TAB>group`
std::string serialize_author_scores(const std::vector<AuthorScore>& scores,
                                    const std::string& digest);
std::vector<AuthorScore> load_author_scores(const std::filesystem::path& path);

}  // namespace ideoscale::text
