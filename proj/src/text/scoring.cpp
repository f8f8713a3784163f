#include "ideoscale/text/scoring.hpp"

#include "corpus_index.hpp"
#include "ideoscale/error.hpp"
#include "ideoscale/log.hpp"
#include "ideoscale/parallel.hpp"
#include "ideoscale/tokenize.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace ideoscale::text {

using model::Party;
using model::Side;

double log_odds_score(std::size_t y_R, std::size_t y_D, const model::TermScoreConfig& cfg) {
  const double l = cfg.lambda;
  const double yr = static_cast<double>(y_R);
  const double yd = static_cast<double>(y_D);
  const double nr = static_cast<double>(cfg.n_R);
  const double nd = static_cast<double>(cfg.n_D);
  double den_r = 0.0;
  double den_d = 0.0;
  if (cfg.form == model::LogOddsForm::DirichletPrior) {
    const double prior = (static_cast<double>(cfg.n_T) - 1.0) * l;
    den_r = nr + prior - yr;
    den_d = nd + prior - yd;
  } else {
    den_r = nr - yr + l;
    den_d = nd - yd + l;
  }
  if (!(den_r > 0.0) || !(den_d > 0.0)) {
    throw NumericalError("log-odds denominator is not positive (n_T=" + std::to_string(cfg.n_T) +
                         ", lambda=" + std::to_string(l) + ")");
  }
  return std::log((yr + l) / den_r) - std::log((yd + l) / den_d);
}

model::TermScoreTable score_terms(const std::vector<model::Document>& corpus,
                                  const std::set<std::string>& terms, const ScoringConfig& cfg) {
  if (!(cfg.lambda > 0.0)) throw UsageError("lambda must be positive");
  if (terms.empty()) throw DataError("score_terms: no terms to score");

  // Party of each author; "D"/"R" groups only.
  const auto authors = detail::by_author(corpus);
  std::vector<std::optional<Party>> party(authors.size());
  std::size_t ignored_docs = 0;
  for (std::size_t a = 0; a < authors.size(); ++a) {
    for (const model::Document* doc : authors[a].docs) {
      const auto p = model::parse_party(doc->group);
      if (!p) {
        ++ignored_docs;
        continue;
      }
      if (party[a] && *party[a] != *p) {
        throw DataError("author '" + authors[a].author + "' has documents under both parties");
      }
      party[a] = p;
    }
  }
  if (ignored_docs > 0) {
    log_warn("score_terms: ignored " + std::to_string(ignored_docs) +
             " document(s) whose group is neither D nor R");
  }

  std::unordered_map<std::string, std::size_t> term_index;
  std::vector<std::string> term_list(terms.begin(), terms.end());
  std::size_t max_len = 1;
  for (std::size_t t = 0; t < term_list.size(); ++t) {
    term_index.emplace(term_list[t], t);
    max_len = std::max(max_len, model::split_term(term_list[t]).size());
  }

  // Distinct terms present per author.
  std::vector<std::vector<std::size_t>> present(authors.size());
  parallel_for(authors.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t a = begin; a < end; ++a) {
      if (!party[a]) continue;
      std::vector<bool> seen(term_list.size(), false);
      for (const model::Document* doc : authors[a].docs) {
        if (model::parse_party(doc->group) != party[a]) continue;
        for (auto segment : doc->segments()) {
          detail::for_each_ngram(segment, max_len,
                                 [&](std::size_t, std::size_t, const std::string& key) {
                                   const auto it = term_index.find(key);
                                   if (it != term_index.end()) seen[it->second] = true;
                                 });
        }
      }
      for (std::size_t t = 0; t < seen.size(); ++t) {
        if (seen[t]) present[a].push_back(t);
      }
    }
  });

  model::TermScoreTable table;
  table.config.lambda = cfg.lambda;
  table.config.n_T = term_list.size();
  table.config.form = cfg.form;
  std::vector<std::size_t> y_D(term_list.size(), 0);
  std::vector<std::size_t> y_R(term_list.size(), 0);
  for (std::size_t a = 0; a < authors.size(); ++a) {
    if (!party[a]) continue;
    auto& counts = *party[a] == Party::D ? y_D : y_R;
    ++(*party[a] == Party::D ? table.config.n_D : table.config.n_R);
    for (std::size_t t : present[a]) ++counts[t];
  }
  if (table.config.n_D == 0 || table.config.n_R == 0) {
    throw DataError("score_terms: corpus needs authors from both parties (D=" +
                    std::to_string(table.config.n_D) + ", R=" + std::to_string(table.config.n_R) +
                    ")");
  }
  for (std::size_t t = 0; t < term_list.size(); ++t) {
    model::TermScore ts;
    ts.y_D = y_D[t];
    ts.y_R = y_R[t];
    ts.score = log_odds_score(ts.y_R, ts.y_D, table.config);
    table.entries.emplace(term_list[t], ts);
  }
  return table;
}

std::vector<std::string> ranked_side(const model::TermScoreTable& table, Side side) {
  std::vector<std::pair<double, std::string>> items;
  for (const auto& [term, ts] : table.entries) {
    if (side == Side::Left && ts.score < 0.0) items.emplace_back(ts.score, term);
    if (side == Side::Right && ts.score > 0.0) items.emplace_back(-ts.score, term);
  }
  std::sort(items.begin(), items.end());
  std::vector<std::string> out;
  out.reserve(items.size());
  for (auto& [s, term] : items) out.push_back(std::move(term));
  return out;
}

model::Lexicon build_lexicon(const model::TermScoreTable& table,
                             const std::optional<std::set<std::string>>& curated_keep,
                             const ScoringConfig& cfg, LexiconReport* report) {
  if (table.entries.empty()) throw DataError("build_lexicon: term table is empty");
  if (cfg.lexicon_size_per_side > cfg.top_n_per_side && !cfg.allow_size_override) {
    throw UsageError("lexicon size per side (" + std::to_string(cfg.lexicon_size_per_side) +
                     ") exceeds top-N window (" + std::to_string(cfg.top_n_per_side) +
                     "); set the size override to allow this");
  }
  const std::size_t want = cfg.lexicon_size_per_side;
  LexiconReport local;

  auto pick = [&](Side side, std::set<std::string>& dest, std::size_t& kept,
                  std::size_t& backfilled) {
    const auto ranked = ranked_side(table, side);
    const std::size_t window = std::min(cfg.top_n_per_side, ranked.size());
    for (std::size_t r = 0; r < window && dest.size() < want; ++r) {
      if (curated_keep && curated_keep->count(ranked[r]) == 0) continue;
      dest.insert(ranked[r]);
      ++kept;
    }
    for (std::size_t r = window; r < ranked.size() && dest.size() < want; ++r) {
      dest.insert(ranked[r]);
      ++backfilled;
    }
    if (dest.size() < want) {
      throw DataError("build_lexicon: only " + std::to_string(dest.size()) + " " +
                      std::string(model::to_string(side)) + "-leaning terms available (" +
                      std::to_string(ranked.size()) + " ranked), need " + std::to_string(want));
    }
  };

  model::Lexicon lex;
  pick(Side::Left, lex.left_terms, local.left_kept, local.left_backfilled);
  pick(Side::Right, lex.right_terms, local.right_kept, local.right_backfilled);
  if (report) *report = local;
  return lex;
}

}  // namespace ideoscale::text
