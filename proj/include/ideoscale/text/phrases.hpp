#pragma once

#include "ideoscale/types.hpp"

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace ideoscale::text {

struct PhraseConfig {
  int max_ngram = 4;
  std::size_t min_authors = 2;
  std::set<std::string> stopwords;
  /// Reserved for a part-of-speech pattern extractor; must stay false.
  bool use_pos_patterns = false;
};

/// Built-in English stopword list (function words only).
const std::set<std::string>& default_stopwords();

/// PhraseConfig with the default stopword list.
PhraseConfig default_phrase_config();

/// Candidate n-grams with the number of distinct authors using each.
/// An n-gram qualifies when it lies inside one segment, has length
/// 1..max_ngram, and neither starts nor ends with a stopword; interior
/// stopwords are allowed ("separation of powers").
std::map<std::string, std::size_t> phrase_support(const std::vector<model::Document>& corpus,
                                                  const PhraseConfig& cfg);

/// Phrases used by at least cfg.min_authors distinct authors.
std::set<std::string> extract_phrases(const std::vector<model::Document>& corpus,
                                      const PhraseConfig& cfg);

// terms file: `term<TAB>authors`
std::string serialize_terms(const std::map<std::string, std::size_t>& support,
                            const std::string& digest);
std::set<std::string> load_terms(const std::filesystem::path& path);

/// One token per line.
std::set<std::string> load_word_list(const std::filesystem::path& path);

}  // namespace ideoscale::text
