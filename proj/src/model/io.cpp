#include "ideoscale/io.hpp"

#include "ideoscale/error.hpp"
#include "ideoscale/log.hpp"
#include "ideoscale/tokenize.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ideoscale::model {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_real(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string header_line(const std::string& config_digest) {
  return std::string("# ideoscale ") + kToolVersion + " config=" + config_digest + "\n";
}

std::string digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::string read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> raw_lines(const std::string& contents) {
  std::vector<std::string> out;
  std::istringstream in(contents);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(std::move(line));
  }
  return out;
}

[[noreturn]] void fail_line(const std::string& origin, std::size_t line, const std::string& msg) {
  throw DataError(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_real(std::string_view s, const std::string& origin, std::size_t line) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    fail_line(origin, line, "not a finite number: '" + std::string(s) + "'");
  }
  return v;
}

std::size_t parse_count(std::string_view s, const std::string& origin, std::size_t line) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail_line(origin, line, "not a nonnegative integer: '" + std::string(s) + "'");
  }
  return v;
}

AccountId parse_account(std::string_view s, const std::string& origin, std::size_t line) {
  if (!is_valid_account_id(s)) fail_line(origin, line, "invalid account id '" + std::string(s) + "'");
  return AccountId(s);
}

void check_field(const std::string& value, const char* what) {
  if (value.find_first_of("\t\n\r") != std::string::npos) {
    throw DataError(std::string(what) + " contains a tab or newline: '" + value + "'");
  }
}

std::string canonical_term(std::string_view raw) {
  const TokenizedText t = tokenize(raw);
  std::string out;
  for (const auto& tok : t.tokens) {
    if (!out.empty()) out.push_back(' ');
    out += tok;
  }
  return out;
}

}  // namespace

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    if (next == std::string_view::npos) {
      out.emplace_back(s.substr(pos));
      return out;
    }
    out.emplace_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

std::vector<Line> read_data_lines(const fs::path& path) {
  std::vector<Line> out;
  const auto lines = raw_lines(read_all(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if (l.empty() || l.front() == '#') continue;
    if (l.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back({i + 1, l});
  }
  return out;
}

void write_file(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << contents;
    if (!out) throw DataError("write failed for '" + path.string() + "'");
  }
  fs::rename(tmp, path);
}

// ---------------------------------------------------------------- edges

FollowEdgeList parse_edges(const std::vector<Line>& lines, const std::string& origin) {
  if (lines.empty()) throw DataError(origin + ": edge file is empty");
  FollowEdgeList out;
  out.edges.reserve(lines.size());
  for (const auto& line : lines) {
    const auto fields = split(line.text, '\t');
    if (fields.size() != 2) fail_line(origin, line.number, "expected 'source<TAB>target'");
    FollowEdge e{parse_account(fields[0], origin, line.number),
                 parse_account(fields[1], origin, line.number)};
    if (e.source == e.target) {
      ++out.self_edges_dropped;
      continue;
    }
    out.edges.push_back(std::move(e));
  }
  std::sort(out.edges.begin(), out.edges.end());
  const auto before = out.edges.size();
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  out.duplicates_dropped = before - out.edges.size();
  if (out.self_edges_dropped > 0) {
    log_warn(origin + ": dropped " + std::to_string(out.self_edges_dropped) + " self-edge(s)");
  }
  if (out.duplicates_dropped > 0) {
    log_warn(origin + ": dropped " + std::to_string(out.duplicates_dropped) + " duplicate edge(s)");
  }
  return out;
}

FollowEdgeList load_edges(const fs::path& path) {
  return parse_edges(read_data_lines(path), path.string());
}

std::string serialize_edges(const FollowEdgeList& edges, const std::string& digest) {
  std::string out = header_line(digest);
  for (const auto& e : edges.edges) out += e.source + "\t" + e.target + "\n";
  return out;
}

// ---------------------------------------------------------------- anchors

double translate_anchor(double raw, bool unit_interval) {
  return unit_interval ? raw - 0.5 : raw;
}

AnchorTable parse_anchors(const std::vector<Line>& lines, const std::string& origin,
                          AnchorScale scale) {
  if (lines.empty() || lines.front().text != "account,score") {
    throw DataError(origin + ": anchor file must start with header 'account,score'");
  }
  std::map<AccountId, double> raw;
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const auto fields = split(line.text, ',');
    if (fields.size() != 2) fail_line(origin, line.number, "expected 'account,score'");
    AccountId id = parse_account(fields[0], origin, line.number);
    const double v = parse_real(fields[1], origin, line.number);
    if (v < -0.5 || v > 1.0) {
      fail_line(origin, line.number, "anchor score " + fields[1] + " outside [-0.5, 1]");
    }
    if (!raw.emplace(id, v).second) fail_line(origin, line.number, "duplicate anchor '" + id + "'");
    lo = raw.size() == 1 ? v : std::min(lo, v);
    hi = raw.size() == 1 ? v : std::max(hi, v);
  }
  bool unit = false;
  switch (scale) {
    case AnchorScale::Auto: unit = raw.empty() || lo >= 0.0; break;
    case AnchorScale::UnitInterval: unit = true; break;
    case AnchorScale::Centered: unit = false; break;
  }
  if (unit && lo < 0.0) throw DataError(origin + ": negative score in a [0, 1] anchor file");
  if (!unit && hi > 0.5) {
    throw DataError(origin + ": anchor scores mix [0, 1] and [-0.5, 0.5] ranges");
  }
  AnchorTable out;
  out.translated_from_unit_interval = unit && !raw.empty();
  for (const auto& [id, v] : raw) out.scores.emplace(id, translate_anchor(v, unit));
  if (out.translated_from_unit_interval) {
    log_info(origin + ": anchor scores translated from [0, 1] to [-0.5, 0.5]");
  }
  return out;
}

AnchorTable load_anchors(const fs::path& path, AnchorScale scale) {
  return parse_anchors(read_data_lines(path), path.string(), scale);
}

std::string serialize_anchors(const AnchorTable& anchors, const std::string& digest) {
  std::string out = header_line(digest) + "account,score\n";
  for (const auto& [id, v] : anchors.scores) out += id + "," + format_real(v) + "\n";
  return out;
}

// ---------------------------------------------------------------- registrations / journalists

std::map<AccountId, Party> load_registrations(const fs::path& path) {
  const std::string origin = path.string();
  std::map<AccountId, Party> out;
  for (const auto& line : read_data_lines(path)) {
    const auto fields = split(line.text, '\t');
    if (fields.size() != 2) fail_line(origin, line.number, "expected 'account<TAB>D|R'");
    const auto party = parse_party(fields[1]);
    if (!party) fail_line(origin, line.number, "party must be D or R");
    if (!out.emplace(parse_account(fields[0], origin, line.number), *party).second) {
      fail_line(origin, line.number, "duplicate registration '" + fields[0] + "'");
    }
  }
  return out;
}

std::string serialize_registrations(const std::map<AccountId, Party>& regs,
                                    const std::string& digest) {
  std::string out = header_line(digest);
  for (const auto& [id, p] : regs) out += id + "\t" + std::string(to_string(p)) + "\n";
  return out;
}

std::map<AccountId, std::string> load_journalists(const fs::path& path) {
  const std::string origin = path.string();
  std::map<AccountId, std::string> out;
  for (const auto& line : read_data_lines(path)) {
    const auto fields = split(line.text, '\t');
    if (fields.size() != 2 || fields[1].empty()) {
      fail_line(origin, line.number, "expected 'account<TAB>outlet'");
    }
    if (!out.emplace(parse_account(fields[0], origin, line.number), fields[1]).second) {
      fail_line(origin, line.number, "duplicate journalist '" + fields[0] + "'");
    }
  }
  return out;
}

std::string serialize_journalists(const std::map<AccountId, std::string>& outlets,
                                  const std::string& digest) {
  std::string out = header_line(digest);
  for (const auto& [id, outlet] : outlets) {
    check_field(outlet, "outlet");
    out += id + "\t" + outlet + "\n";
  }
  return out;
}

// ---------------------------------------------------------------- roster

namespace {

void parse_roster_line(const std::vector<std::string>& fields, RowRoster& roster,
                       const std::string& origin, std::size_t line) {
  if (fields.size() != 3) fail_line(origin, line, "expected 'account<TAB>role<TAB>party'");
  AccountId id = parse_account(fields[0], origin, line);
  if (roster.contains(id)) fail_line(origin, line, "duplicate row '" + id + "'");
  if (fields[1] == "journalist") {
    roster.journalists.insert(std::move(id));
  } else if (fields[1] == "active") {
    const auto party = parse_party(fields[2]);
    if (!party) fail_line(origin, line, "politically active rows need party D or R");
    roster.politically_active.emplace(std::move(id), *party);
  } else {
    fail_line(origin, line, "role must be 'journalist' or 'active'");
  }
}

void append_roster_line(std::string& out, const AccountId& id, const RowRoster& roster) {
  const auto it = roster.politically_active.find(id);
  if (it != roster.politically_active.end()) {
    out += id + "\tactive\t" + std::string(to_string(it->second)) + "\n";
  } else {
    out += id + "\tjournalist\t-\n";
  }
}

}  // namespace

RowRoster load_roster(const fs::path& path) {
  RowRoster roster;
  for (const auto& line : read_data_lines(path)) {
    parse_roster_line(split(line.text, '\t'), roster, path.string(), line.number);
  }
  return roster;
}

std::string serialize_roster(const RowRoster& roster, const std::string& digest) {
  std::string out = header_line(digest);
  for (const auto& id : roster.journalists) append_roster_line(out, id, roster);
  for (const auto& [id, p] : roster.politically_active) append_roster_line(out, id, roster);
  return out;
}

// ---------------------------------------------------------------- corpus

std::vector<Document> parse_corpus(const std::vector<Line>& lines, const std::string& origin) {
  std::vector<Document> docs;
  docs.reserve(lines.size());
  for (const auto& line : lines) {
    json rec;
    try {
      rec = json::parse(line.text);
    } catch (const json::parse_error& e) {
      fail_line(origin, line.number, std::string("invalid JSON: ") + e.what());
    }
    auto field = [&](const char* key) -> std::string {
      if (!rec.is_object() || !rec.contains(key) || !rec[key].is_string()) {
        fail_line(origin, line.number, std::string("missing string field '") + key + "'");
      }
      return rec[key].get<std::string>();
    };
    std::string author = field("author");
    if (!is_valid_account_id(author)) fail_line(origin, line.number, "invalid author id");
    std::string group = field("group");
    docs.push_back(make_document(std::move(author), std::move(group), field("text")));
  }
  return docs;
}

std::vector<Document> load_corpus(const fs::path& path) {
  return parse_corpus(read_data_lines(path), path.string());
}

std::string serialize_corpus(const std::vector<Document>& docs, const std::string& digest) {
  std::string out = header_line(digest);
  for (const auto& d : docs) {
    json rec = {{"author", d.author}, {"group", d.group}, {"text", render_text(d)}};
    out += rec.dump() + "\n";
  }
  return out;
}

// ---------------------------------------------------------------- lexicon

Lexicon parse_lexicon(const std::vector<Line>& lines, const std::string& origin) {
  Lexicon lex;
  for (const auto& line : lines) {
    const auto fields = split(line.text, '\t');
    if (fields.size() != 2) fail_line(origin, line.number, "expected 'term<TAB>left|right'");
    const auto side = parse_side(fields[1]);
    if (!side) fail_line(origin, line.number, "side must be 'left' or 'right'");
    const std::string term = canonical_term(fields[0]);
    if (term.empty() || term != fields[0]) {
      fail_line(origin, line.number, "term '" + fields[0] + "' is not in normalized form");
    }
    auto& mine = *side == Side::Left ? lex.left_terms : lex.right_terms;
    const auto& other = *side == Side::Left ? lex.right_terms : lex.left_terms;
    if (other.count(term) != 0) fail_line(origin, line.number, "term '" + term + "' on both sides");
    mine.insert(term);
  }
  if (!lex.balanced()) {
    log_warn(origin + ": lexicon is unbalanced (" + std::to_string(lex.left_terms.size()) +
             " left, " + std::to_string(lex.right_terms.size()) + " right)");
  }
  return lex;
}

Lexicon load_lexicon(const fs::path& path) {
  return parse_lexicon(read_data_lines(path), path.string());
}

std::string serialize_lexicon(const Lexicon& lexicon, const std::string& digest) {
  std::string out = header_line(digest);
  for (const auto& t : lexicon.left_terms) out += t + "\tleft\n";
  for (const auto& t : lexicon.right_terms) out += t + "\tright\n";
  return out;
}

// ---------------------------------------------------------------- term scores

namespace {

constexpr std::string_view kTermConfigPrefix = "# term-config ";

std::string_view form_name(LogOddsForm f) {
  return f == LogOddsForm::DirichletPrior ? "dirichlet" : "laplace";
}

}  // namespace

TermScoreTable load_term_scores(const fs::path& path) {
  const std::string origin = path.string();
  const auto lines = raw_lines(read_all(path));
  TermScoreTable table;
  bool have_config = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& l = lines[i];
    if (l.rfind(kTermConfigPrefix, 0) == 0) {
      for (const auto& kv : split(std::string_view(l).substr(kTermConfigPrefix.size()), ' ')) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) fail_line(origin, i + 1, "bad config item '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        if (key == "lambda") table.config.lambda = parse_real(val, origin, i + 1);
        else if (key == "n_D") table.config.n_D = parse_count(val, origin, i + 1);
        else if (key == "n_R") table.config.n_R = parse_count(val, origin, i + 1);
        else if (key == "n_T") table.config.n_T = parse_count(val, origin, i + 1);
        else if (key == "form" && val == "dirichlet") table.config.form = LogOddsForm::DirichletPrior;
        else if (key == "form" && val == "laplace") table.config.form = LogOddsForm::Laplace;
        else fail_line(origin, i + 1, "unknown config item '" + kv + "'");
      }
      have_config = true;
      continue;
    }
    if (l.empty() || l.front() == '#') continue;
    const auto fields = split(l, '\t');
    if (fields.size() != 4) fail_line(origin, i + 1, "expected 'term<TAB>score<TAB>y_D<TAB>y_R'");
    TermScore ts{parse_real(fields[1], origin, i + 1), parse_count(fields[2], origin, i + 1),
                 parse_count(fields[3], origin, i + 1)};
    if (!table.entries.emplace(fields[0], ts).second) {
      fail_line(origin, i + 1, "duplicate term '" + fields[0] + "'");
    }
  }
  if (!have_config) throw DataError(origin + ": missing '# term-config' line");
  for (const auto& [term, ts] : table.entries) {
    if (ts.y_D > table.config.n_D || ts.y_R > table.config.n_R) {
      throw DataError(origin + ": counts for '" + term + "' exceed party sizes");
    }
  }
  return table;
}

std::string serialize_term_scores(const TermScoreTable& table, const std::string& digest) {
  const auto& c = table.config;
  std::string out = header_line(digest);
  out += std::string(kTermConfigPrefix) + "lambda=" + format_real(c.lambda) +
         " n_D=" + std::to_string(c.n_D) + " n_R=" + std::to_string(c.n_R) +
         " n_T=" + std::to_string(c.n_T) + " form=" + std::string(form_name(c.form)) + "\n";
  for (const auto& [term, ts] : table.entries) {
    out += term + "\t" + format_real(ts.score) + "\t" + std::to_string(ts.y_D) + "\t" +
           std::to_string(ts.y_R) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------- matrix

StoredMatrix load_matrix(const fs::path& path) {
  const std::string origin = path.string();
  const auto lines = read_data_lines(path);
  std::size_t pos = 0;
  auto section = [&](const char* name) -> std::size_t {
    if (pos >= lines.size()) throw DataError(origin + ": missing '" + name + "' section");
    const auto fields = split(lines[pos].text, '\t');
    if (fields.size() != 2 || fields[0] != name) {
      fail_line(origin, lines[pos].number, std::string("expected '") + name + "<TAB>count'");
    }
    const std::size_t n = parse_count(fields[1], origin, lines[pos].number);
    ++pos;
    if (pos + n > lines.size()) throw DataError(origin + ": truncated '" + name + "' section");
    return n;
  };

  StoredMatrix out;
  const std::size_t nrows = section("rows");
  for (std::size_t i = 0; i < nrows; ++i, ++pos) {
    const auto fields = split(lines[pos].text, '\t');
    parse_roster_line(fields, out.roster, origin, lines[pos].number);
    out.matrix.rows.push_back(fields[0]);
  }
  const std::size_t ncols = section("cols");
  std::set<AccountId> seen;
  for (std::size_t j = 0; j < ncols; ++j, ++pos) {
    AccountId id = parse_account(lines[pos].text, origin, lines[pos].number);
    if (!seen.insert(id).second) fail_line(origin, lines[pos].number, "duplicate column");
    out.matrix.cols.push_back(std::move(id));
  }
  const std::size_t nnz = section("cells");
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(nnz);
  for (std::size_t c = 0; c < nnz; ++c, ++pos) {
    const auto fields = split(lines[pos].text, '\t');
    if (fields.size() != 2) fail_line(origin, lines[pos].number, "expected 'row<TAB>col'");
    const auto i = parse_count(fields[0], origin, lines[pos].number);
    const auto j = parse_count(fields[1], origin, lines[pos].number);
    if (i >= nrows || j >= ncols) fail_line(origin, lines[pos].number, "cell index out of range");
    trips.emplace_back(static_cast<int>(i), static_cast<int>(j), 1.0);
  }
  if (pos != lines.size()) fail_line(origin, lines[pos].number, "trailing data after cells");
  out.matrix.cells.resize(static_cast<Eigen::Index>(nrows), static_cast<Eigen::Index>(ncols));
  // Duplicate cells collapse to 1.
  out.matrix.cells.setFromTriplets(trips.begin(), trips.end(),
                                   [](const double&, const double&) { return 1.0; });
  return out;
}

std::string serialize_matrix(const FollowMatrix& m, const RowRoster& roster,
                             const std::string& digest) {
  std::string out = header_line(digest);
  out += "rows\t" + std::to_string(m.rows.size()) + "\n";
  for (const auto& id : m.rows) append_roster_line(out, id, roster);
  out += "cols\t" + std::to_string(m.cols.size()) + "\n";
  for (const auto& id : m.cols) out += id + "\n";
  out += "cells\t" + std::to_string(m.cells.nonZeros()) + "\n";
  for (Eigen::Index i = 0; i < m.cells.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(m.cells, i); it; ++it) {
      out += std::to_string(it.row()) + "\t" + std::to_string(it.col()) + "\n";
    }
  }
  return out;
}

// ---------------------------------------------------------------- embedding

EmbeddingSpace load_embedding(const fs::path& path) {
  const std::string origin = path.string();
  EmbeddingSpace space;
  std::vector<std::vector<double>> rows;
  std::vector<std::vector<double>> cols;
  bool have_sigma = false;
  for (const auto& line : read_data_lines(path)) {
    const auto fields = split(line.text, '\t');
    if (fields.size() < 3) fail_line(origin, line.number, "expected 'kind<TAB>account<TAB>values'");
    std::vector<double> values;
    for (std::size_t f = 2; f < fields.size(); ++f) {
      values.push_back(parse_real(fields[f], origin, line.number));
    }
    if (fields[0] == "exponent") {
      space.exponent = values.front();
      continue;
    }
    if (fields[0] == "sigma") {
      space.k = static_cast<int>(values.size());
      space.singular_values = Eigen::Map<Eigen::VectorXd>(values.data(), space.k);
      have_sigma = true;
      continue;
    }
    if (!have_sigma) fail_line(origin, line.number, "'sigma' line must precede vectors");
    if (static_cast<int>(values.size()) != space.k) {
      fail_line(origin, line.number, "vector length differs from k=" + std::to_string(space.k));
    }
    if (fields[0] == "row") {
      space.row_ids.push_back(parse_account(fields[1], origin, line.number));
      rows.push_back(std::move(values));
    } else if (fields[0] == "col") {
      space.col_ids.push_back(parse_account(fields[1], origin, line.number));
      cols.push_back(std::move(values));
    } else {
      fail_line(origin, line.number, "unknown line kind '" + fields[0] + "'");
    }
  }
  if (!have_sigma) throw DataError(origin + ": missing 'sigma' line");
  auto to_matrix = [&](const std::vector<std::vector<double>>& v) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(v.size()), space.k);
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (int d = 0; d < space.k; ++d) m(static_cast<Eigen::Index>(i), d) = v[i][d];
    }
    return m;
  };
  space.row_vectors = to_matrix(rows);
  space.col_vectors = to_matrix(cols);
  validate(space);
  return space;
}

std::string serialize_embedding(const EmbeddingSpace& space, const std::string& digest) {
  std::string out = header_line(digest);
  out += "exponent\t-\t" + format_real(space.exponent) + "\n";
  out += "sigma\t-";
  for (Eigen::Index d = 0; d < space.singular_values.size(); ++d) {
    out += "\t" + format_real(space.singular_values[d]);
  }
  out += "\n";
  auto emit = [&](const char* kind, const std::vector<AccountId>& ids, const Eigen::MatrixXd& m) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      out += std::string(kind) + "\t" + ids[i];
      for (Eigen::Index d = 0; d < m.cols(); ++d) {
        out += "\t" + format_real(m(static_cast<Eigen::Index>(i), d));
      }
      out += "\n";
    }
  };
  emit("row", space.row_ids, space.row_vectors);
  emit("col", space.col_ids, space.col_vectors);
  return out;
}

// ---------------------------------------------------------------- estimates

std::vector<IdeologyEstimate> load_estimates(const fs::path& path) {
  const std::string origin = path.string();
  std::vector<IdeologyEstimate> out;
  std::set<AccountId> seen;
  for (const auto& line : read_data_lines(path)) {
    const auto fields = split(line.text, '\t');
    if (fields.size() != 4) {
      fail_line(origin, line.number, "expected 'account<TAB>score<TAB>source<TAB>group'");
    }
    IdeologyEstimate e;
    e.account = parse_account(fields[0], origin, line.number);
    if (!seen.insert(e.account).second) fail_line(origin, line.number, "duplicate account");
    e.score = parse_real(fields[1], origin, line.number);
    if (fields[2] == "network") e.source = Source::Network;
    else if (fields[2] == "text") e.source = Source::Text;
    else fail_line(origin, line.number, "source must be 'network' or 'text'");
    if (fields[3] != "-") e.group = fields[3];
    out.push_back(std::move(e));
  }
  return out;
}

std::string serialize_estimates(const std::vector<IdeologyEstimate>& estimates,
                                const std::string& digest) {
  std::string out = header_line(digest);
  for (const auto& e : estimates) {
    if (!std::isfinite(e.score)) throw NumericalError("non-finite score for '" + e.account + "'");
    const std::string group = e.group.value_or("-");
    check_field(group, "group");
    out += e.account + "\t" + format_real(e.score) + "\t" + std::string(to_string(e.source)) +
           "\t" + group + "\n";
  }
  return out;
}

}  // namespace ideoscale::model
