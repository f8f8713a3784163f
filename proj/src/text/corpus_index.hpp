#pragma once

#include "ideoscale/types.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace ideoscale::text::detail {

struct AuthorDocs {
  model::AccountId author;
  std::vector<const model::Document*> docs;
};

/// Documents grouped by author, authors in lexicographic order.
inline std::vector<AuthorDocs> by_author(const std::vector<model::Document>& corpus) {
  std::map<model::AccountId, std::vector<const model::Document*>> grouped;
  for (const auto& d : corpus) grouped[d.author].push_back(&d);
  std::vector<AuthorDocs> out;
  out.reserve(grouped.size());
  for (auto& [author, docs] : grouped) out.push_back({author, std::move(docs)});
  return out;
}

/// Appends every n-gram (n <= max_n) of `segment` starting at each position
/// to `fn` as a space-joined string.
template <typename Fn>
void for_each_ngram(std::span<const std::string> segment, std::size_t max_n, Fn&& fn) {
  std::string key;
  for (std::size_t i = 0; i < segment.size(); ++i) {
    key.clear();
    for (std::size_t n = 1; n <= max_n && i + n <= segment.size(); ++n) {
      if (n > 1) key.push_back(' ');
      key += segment[i + n - 1];
      fn(i, n, key);
    }
  }
}

}  // namespace ideoscale::text::detail
