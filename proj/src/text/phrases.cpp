#include "ideoscale/text/phrases.hpp"

#include "corpus_index.hpp"
#include "ideoscale/error.hpp"
#include "ideoscale/io.hpp"
#include "ideoscale/parallel.hpp"

#include <unordered_set>

namespace ideoscale::text {

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words = {
      "a",      "about",   "above",  "after",   "again",   "against", "all",    "am",
      "an",     "and",     "any",    "are",     "as",      "at",      "be",     "because",
      "been",   "before",  "being",  "below",   "between", "both",    "but",    "by",
      "can",    "could",   "did",    "do",      "does",    "doing",   "down",   "during",
      "each",   "few",     "for",    "from",    "further", "had",     "has",    "have",
      "having", "he",      "her",    "here",    "hers",    "herself", "him",    "himself",
      "his",    "how",     "i",      "if",      "in",      "into",    "is",     "it",
      "its",    "itself",  "just",   "me",      "more",    "most",    "my",     "myself",
      "no",     "nor",     "not",    "now",     "of",      "off",     "on",     "once",
      "only",   "or",      "other",  "our",     "ours",    "ourselves", "out",  "over",
      "own",    "same",    "she",    "should",  "so",      "some",    "such",   "than",
      "that",   "the",     "their",  "theirs",  "them",    "themselves", "then", "there",
      "these",  "they",    "this",   "those",   "through", "to",      "too",    "under",
      "until",  "up",      "very",   "was",     "we",      "were",    "what",   "when",
      "where",  "which",   "while",  "who",     "whom",    "why",     "will",   "with",
      "would",  "you",     "your",   "yours",   "yourself", "yourselves", "also", "said",
      "it's",   "don't",   "i'm",    "we're",   "they're", "that's",  "there's", "can't",
  };
  return words;
}

PhraseConfig default_phrase_config() {
  PhraseConfig cfg;
  cfg.stopwords = default_stopwords();
  return cfg;
}

std::map<std::string, std::size_t> phrase_support(const std::vector<model::Document>& corpus,
                                                  const PhraseConfig& cfg) {
  if (cfg.max_ngram < 1) throw UsageError("max_ngram must be at least 1");
  if (cfg.use_pos_patterns) {
    throw UsageError("part-of-speech pattern extraction is not available; use the n-gram extractor");
  }
  const auto authors = detail::by_author(corpus);
  std::vector<std::unordered_set<std::string>> per_author(authors.size());
  const auto max_n = static_cast<std::size_t>(cfg.max_ngram);

  parallel_for(authors.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t a = begin; a < end; ++a) {
      auto& seen = per_author[a];
      for (const model::Document* doc : authors[a].docs) {
        for (auto segment : doc->segments()) {
          detail::for_each_ngram(segment, max_n,
                                 [&](std::size_t i, std::size_t n, const std::string& key) {
                                   if (cfg.stopwords.count(segment[i]) != 0) return;
                                   if (cfg.stopwords.count(segment[i + n - 1]) != 0) return;
                                   seen.insert(key);
                                 });
        }
      }
    }
  });

  std::map<std::string, std::size_t> support;
  for (const auto& seen : per_author) {
    for (const auto& term : seen) ++support[term];
  }
  return support;
}

std::set<std::string> extract_phrases(const std::vector<model::Document>& corpus,
                                      const PhraseConfig& cfg) {
  std::set<std::string> out;
  for (const auto& [term, n] : phrase_support(corpus, cfg)) {
    if (n >= cfg.min_authors) out.insert(term);
  }
  return out;
}

std::string serialize_terms(const std::map<std::string, std::size_t>& support,
                            const std::string& digest) {
  std::string out = model::header_line(digest);
  for (const auto& [term, n] : support) out += term + "\t" + std::to_string(n) + "\n";
  return out;
}

std::set<std::string> load_terms(const std::filesystem::path& path) {
  std::set<std::string> out;
  for (const auto& line : model::read_data_lines(path)) {
    const auto fields = model::split(line.text, '\t');
    if (fields.empty() || fields[0].empty() || fields.size() > 2) {
      throw DataError(path.string() + ":" + std::to_string(line.number) +
                      ": expected 'term' or 'term<TAB>authors'");
    }
    out.insert(fields[0]);
  }
  if (out.empty()) throw DataError(path.string() + ": no terms");
  return out;
}

std::set<std::string> load_word_list(const std::filesystem::path& path) {
  std::set<std::string> out;
  for (const auto& line : model::read_data_lines(path)) {
    const auto fields = model::split(line.text, '\t');
    out.insert(fields[0]);
  }
  return out;
}

}  // namespace ideoscale::text
