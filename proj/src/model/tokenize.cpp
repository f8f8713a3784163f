#include "ideoscale/tokenize.hpp"

namespace ideoscale::model {

namespace {

enum class CharClass { Letter, Digit, Space, Joiner, Break };

struct CodePoint {
  char32_t value;
  std::size_t length;
};

CodePoint decode(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = b0 >= 0xF0 ? 4 : b0 >= 0xE0 ? 3 : b0 >= 0xC0 ? 2 : 1;
  if (len == 1 || i + len > s.size()) return {0xFFFD, 1};
  char32_t cp = b0 & (0x3F >> (len - 1));
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return {0xFFFD, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

void encode(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

CharClass classify(char32_t cp) {
  if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z')) return CharClass::Letter;
  if (cp >= '0' && cp <= '9') return CharClass::Digit;
  if (cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v' ||
      cp == 0xA0) {
    return CharClass::Space;
  }
  if (cp == '\'' || cp == '-' || cp == 0x2019 || cp == 0x2010 || cp == 0x2011) {
    return CharClass::Joiner;
  }
  if (cp < 0xC0) return CharClass::Break;                          // ASCII + Latin-1 symbols
  if (cp == 0xD7 || cp == 0xF7) return CharClass::Break;           // multiplication, division
  if (cp >= 0x2000 && cp <= 0x2BFF) return CharClass::Break;       // punctuation, symbols
  if (cp >= 0x3000 && cp <= 0x303F) return CharClass::Break;       // CJK punctuation
  if (cp == 0xFFFD || (cp >= 0xFE30 && cp <= 0xFE4F)) return CharClass::Break;
  return CharClass::Letter;
}

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;  // Latin-1 uppercase
  return cp;
}

}  // namespace

TokenizedText tokenize(std::string_view text) {
  TokenizedText out;
  std::string current;
  bool has_digit = false;
  char pending_joiner = 0;
  bool pending_break = false;

  auto flush = [&]() {
    pending_joiner = 0;
    if (current.empty()) return;
    if (has_digit) {
      pending_break = true;
    } else {
      if (pending_break && !out.tokens.empty()) out.boundaries.push_back(out.tokens.size());
      pending_break = false;
      out.tokens.push_back(std::move(current));
    }
    current.clear();
    has_digit = false;
  };

  std::size_t i = 0;
  while (i < text.size()) {
    const CodePoint cp = decode(text, i);
    i += cp.length;
    switch (classify(cp.value)) {
      case CharClass::Digit:
        has_digit = true;
        [[fallthrough]];
      case CharClass::Letter:
        if (pending_joiner != 0) current.push_back(pending_joiner);
        pending_joiner = 0;
        encode(to_lower(cp.value), current);
        break;
      case CharClass::Joiner:
        if (!current.empty() && pending_joiner == 0) {
          pending_joiner = (cp.value == '\'' || cp.value == 0x2019) ? '\'' : '-';
        } else {
          // Leading quote or a doubled dash acts as punctuation.
          flush();
          pending_break = true;
        }
        break;
      case CharClass::Space:
        flush();
        break;
      case CharClass::Break:
        flush();
        pending_break = true;
        break;
    }
  }
  flush();
  return out;
}

Document make_document(AccountId author, std::string group, std::string_view text) {
  TokenizedText t = tokenize(text);
  return Document{std::move(author), std::move(group), std::move(t.tokens),
                  std::move(t.boundaries)};
}

std::string render_text(const Document& doc) {
  std::string out;
  bool first_segment = true;
  for (auto segment : doc.segments()) {
    if (!first_segment) out += ". ";
    first_segment = false;
    for (std::size_t t = 0; t < segment.size(); ++t) {
      if (t > 0) out.push_back(' ');
      out += segment[t];
    }
  }
  return out;
}

std::vector<std::string> split_term(std::string_view term) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < term.size()) {
    const std::size_t next = term.find(' ', pos);
    const std::size_t end = next == std::string_view::npos ? term.size() : next;
    if (end > pos) out.emplace_back(term.substr(pos, end - pos));
    pos = end + 1;
  }
  return out;
}

}  // namespace ideoscale::model
