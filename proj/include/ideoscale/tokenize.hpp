#pragma once

#include "ideoscale/types.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace ideoscale::model {

struct TokenizedText {
  std::vector<std::string> tokens;
  std::vector<std::size_t> boundaries;
};

// Canonical normalizer shared by term scoring and author scoring.
//
// Text is lowercased and split at every non-alphanumeric code point.
// Whitespace only separates tokens; any other separator (punctuation,
// symbols, dropped tokens) also starts a new segment so that phrases never
// run across it. A token survives if it is purely alphabetic, optionally
// with apostrophes or hyphens strictly inside it ("don't", "pro-life").
// Tokens containing digits are dropped.
TokenizedText tokenize(std::string_view text);

Document make_document(AccountId author, std::string group, std::string_view text);

/// Renders a document back to text that tokenizes to the same tokens and
/// boundaries.
std::string render_text(const Document& doc);

/// Splits a space-joined term into its tokens.
std::vector<std::string> split_term(std::string_view term);

}  // namespace ideoscale::model
