#include "ideoscale/text/authors.hpp"

#include "corpus_index.hpp"
#include "ideoscale/error.hpp"
#include "ideoscale/io.hpp"
#include "ideoscale/tokenize.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ideoscale::text {

double author_score(std::size_t y_R, std::size_t y_L) {
  // Difference of logs so that swapping the sides negates the score exactly.
  return std::log(static_cast<double>(y_R) + 1.0) - std::log(static_cast<double>(y_L) + 1.0);
}

LexiconMatcher::LexiconMatcher(const model::Lexicon& lexicon) {
  auto add = [&](const std::set<std::string>& terms, model::Side side) {
    for (const auto& t : terms) {
      terms_.emplace(t, side);
      max_len_ = std::max(max_len_, model::split_term(t).size());
    }
  };
  add(lexicon.left_terms, model::Side::Left);
  add(lexicon.right_terms, model::Side::Right);
}

LexiconMatcher::Counts LexiconMatcher::count(std::span<const std::string> segment) const {
  Counts c;
  std::string key;
  std::size_t i = 0;
  while (i < segment.size()) {
    std::size_t matched = 0;
    model::Side side = model::Side::Left;
    key.clear();
    // Build the longest candidate once, then shorten from the right.
    const std::size_t longest = std::min(max_len_, segment.size() - i);
    std::vector<std::size_t> ends;
    for (std::size_t n = 1; n <= longest; ++n) {
      if (n > 1) key.push_back(' ');
      key += segment[i + n - 1];
      ends.push_back(key.size());
    }
    for (std::size_t n = longest; n >= 1; --n) {
      const auto it = terms_.find(key.substr(0, ends[n - 1]));
      if (it != terms_.end()) {
        matched = n;
        side = it->second;
        break;
      }
    }
    if (matched == 0) {
      ++i;
      continue;
    }
    ++(side == model::Side::Right ? c.right : c.left);
    i += matched;
  }
  return c;
}

LexiconMatcher::Counts LexiconMatcher::count(const model::Document& doc) const {
  Counts total;
  for (auto segment : doc.segments()) {
    const Counts c = count(segment);
    total.right += c.right;
    total.left += c.left;
  }
  return total;
}

namespace {

struct AuthorTally {
  std::size_t qualifying = 0;
  LexiconMatcher::Counts counts;
  std::string group;
};

AuthorTally tally(const detail::AuthorDocs& a, const LexiconMatcher& matcher,
                  const AuthorFilter& filter) {
  AuthorTally t;
  std::map<std::string, std::size_t> groups;
  for (const model::Document* doc : a.docs) {
    if (doc->word_count() <= filter.min_words) continue;
    ++t.qualifying;
    ++groups[doc->group];
    const auto c = matcher.count(*doc);
    t.counts.right += c.right;
    t.counts.left += c.left;
  }
  std::size_t best = 0;
  for (const auto& [g, n] : groups) {
    if (n > best) {
      best = n;
      t.group = g;
    }
  }
  return t;
}

}  // namespace

std::set<model::AccountId> filter_authors(const std::vector<model::Document>& corpus,
                                          const model::Lexicon& lexicon,
                                          const AuthorFilter& filter) {
  const LexiconMatcher matcher(lexicon);
  std::set<model::AccountId> out;
  for (const auto& a : detail::by_author(corpus)) {
    const AuthorTally t = tally(a, matcher, filter);
    if (t.qualifying >= filter.min_articles && t.counts.right + t.counts.left >= 1) {
      out.insert(a.author);
    }
  }
  return out;
}

std::vector<AuthorScore> score_authors(const std::vector<model::Document>& corpus,
                                       const model::Lexicon& lexicon,
                                       const std::set<model::AccountId>& eligible,
                                       const AuthorFilter& filter) {
  const LexiconMatcher matcher(lexicon);
  std::vector<AuthorScore> out;
  std::set<model::AccountId> found;
  for (const auto& a : detail::by_author(corpus)) {
    if (eligible.count(a.author) == 0) continue;
    found.insert(a.author);
    const AuthorTally t = tally(a, matcher, filter);
    AuthorScore s;
    s.author = a.author;
    s.y_R = t.counts.right;
    s.y_L = t.counts.left;
    s.score = author_score(s.y_R, s.y_L);
    s.n_articles_used = t.qualifying;
    s.group = t.group;
    out.push_back(std::move(s));
  }
  if (found.size() != eligible.size()) {
    throw DataError("score_authors: " + std::to_string(eligible.size() - found.size()) +
                    " eligible author(s) have no documents in the corpus");
  }
  return out;
}

std::vector<model::IdeologyEstimate> to_estimates(const std::vector<AuthorScore>& scores) {
  std::vector<model::IdeologyEstimate> out;
  out.reserve(scores.size());
  for (const auto& s : scores) {
    out.push_back({s.author, s.score, model::Source::Text,
                   s.group.empty() ? std::nullopt : std::optional<std::string>(s.group)});
  }
  return out;
}

std::string serialize_author_scores(const std::vector<AuthorScore>& scores,
                                    const std::string& digest) {
  std::string out = model::header_line(digest);
  for (const auto& s : scores) {
    out += s.author + "\t" + model::format_real(s.score) + "\t" + std::to_string(s.y_R) + "\t" +
           std::to_string(s.y_L) + "\t" + std::to_string(s.n_articles_used) + "\t" +
           (s.group.empty() ? "-" : s.group) + "\n";
  }
  return out;
}

std::vector<AuthorScore> load_author_scores(const std::filesystem::path& path) {
  std::vector<AuthorScore> out;
  for (const auto& line : model::read_data_lines(path)) {
    const auto f = model::split(line.text, '\t');
    const std::string where = path.string() + ":" + std::to_string(line.number);
    if (f.size() != 6) throw DataError(where + ": expected 6 tab-separated fields");
    try {
      AuthorScore s;
      s.author = f[0];
      s.y_R = std::stoul(f[2]);
      s.y_L = std::stoul(f[3]);
      s.n_articles_used = std::stoul(f[4]);
      s.group = f[5] == "-" ? "" : f[5];
      // The score is recomputed from the counts rather than trusted from text.
      s.score = author_score(s.y_R, s.y_L);
      out.push_back(std::move(s));
    } catch (const std::logic_error&) {
      throw DataError(where + ": bad count field");
    }
  }
  return out;
}

}  // namespace ideoscale::text
