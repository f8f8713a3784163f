#include "doctest.h"
#include "fixtures.hpp"

#include "ideoscale/error.hpp"
#include "ideoscale/io.hpp"
#include "ideoscale/tokenize.hpp"

#include <random>

using namespace ideoscale;
using namespace ideoscale::model;

namespace {

std::vector<Line> lines_of(std::initializer_list<const char*> texts) {
  std::vector<Line> out;
  std::size_t n = 0;
  for (const char* t : texts) out.push_back({++n, t});
  return out;
}

std::string random_id(std::mt19937_64& rng, const char* prefix, int range) {
  return prefix + std::to_string(std::uniform_int_distribution<int>(0, range)(rng));
}

/// Alphabetic name for an index: 0 -> "a", 26 -> "ba".
std::string letters(int i) {
  std::string out;
  do {
    out.insert(out.begin(), static_cast<char>('a' + i % 26));
    i /= 26;
  } while (i > 0);
  return out;
}

}  // namespace

TEST_CASE("tokenize lowercases and splits segments at punctuation") {
  const auto t = tokenize("Voting Rights Act, then: the don't pro-life 2020 rule");
  const std::vector<std::string> want = {"voting", "rights", "act", "then", "the",
                                         "don't", "pro-life", "rule"};
  CHECK(t.tokens == want);
  // "," ":" and the dropped numeric token each start a segment.
  CHECK(t.boundaries == std::vector<std::size_t>{3, 4, 7});
}

TEST_CASE("tokenize drops edge apostrophes and digits") {
  const auto t = tokenize("'quoted' a1b -dash-");
  CHECK(t.tokens == std::vector<std::string>{"quoted", "dash"});
}

TEST_CASE("documents expose segments between boundaries") {
  const auto doc = make_document("a1", "D", "one two. three four five; six");
  const auto segs = doc.segments();
  REQUIRE(segs.size() == 3);
  CHECK(segs[0].size() == 2);
  CHECK(segs[1].size() == 3);
  CHECK(segs[2][0] == "six");
  CHECK(doc.word_count() == 6);
}

TEST_CASE("render_text round-trips tokens and boundaries") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    for (const auto& doc : fixture::random_corpus(rng, 1, 1)) {
      const auto back = make_document(doc.author, doc.group, render_text(doc));
      CHECK(back.tokens == doc.tokens);
      CHECK(back.boundaries == doc.boundaries);
    }
  }
}

TEST_CASE("load_edges examples") {
  SUBCASE("duplicates are dropped and counted") {
    const auto e = parse_edges(lines_of({"a\tb", "a\tb", "a\tc"}), "t");
    CHECK(e.edges == std::vector<FollowEdge>{{"a", "b"}, {"a", "c"}});
    CHECK(e.duplicates_dropped == 1);
  }
  SUBCASE("self edges are dropped") {
    const auto e = parse_edges(lines_of({"a\ta"}), "t");
    CHECK(e.edges.empty());
    CHECK(e.self_edges_dropped == 1);
  }
  SUBCASE("three distinct lines read back") {
    fixture::TempDir dir("edges");
    write_file(dir / "e.tsv", "j1\te1\nj1\te2\nj2\te1\n");
    const auto e = load_edges(dir / "e.tsv");
    CHECK(e.edges == std::vector<FollowEdge>{{"j1", "e1"}, {"j1", "e2"}, {"j2", "e1"}});
  }
  SUBCASE("malformed line names its number") {
    try {
      parse_edges(lines_of({"a\tb", "a b c"}), "edges.tsv");
      FAIL("expected an error");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("edges.tsv:2") != std::string::npos);
    }
  }
  SUBCASE("empty file") { CHECK_THROWS_AS(parse_edges({}, "t"), DataError); }
}

TEST_CASE("dedup is idempotent") {
  std::mt19937_64 rng(12);
  fixture::TempDir dir("dedup");
  std::string raw;
  for (int i = 0; i < 300; ++i) {
    raw += random_id(rng, "u", 20) + "\t" + random_id(rng, "u", 20) + "\n";
  }
  write_file(dir / "raw.tsv", raw);
  const auto once = load_edges(dir / "raw.tsv");
  write_file(dir / "again.tsv", serialize_edges(once, "-"));
  const auto twice = load_edges(dir / "again.tsv");
  CHECK(twice.edges == once.edges);
  CHECK(twice.duplicates_dropped == 0);
  CHECK(twice.self_edges_dropped == 0);
}

TEST_CASE("load_anchors examples") {
  const auto unit = parse_anchors(lines_of({"account,score", "rep1,0.0", "rep2,0.5", "rep3,0.73"}), "t");
  CHECK(unit.translated_from_unit_interval);
  CHECK(unit.scores.at("rep1") == -0.5);
  CHECK(unit.scores.at("rep2") == 0.0);
  CHECK(unit.scores.at("rep3") == doctest::Approx(0.23).epsilon(1e-15));

  const auto centered = parse_anchors(lines_of({"account,score", "a,-0.2", "b,0.3"}), "t");
  CHECK_FALSE(centered.translated_from_unit_interval);
  CHECK(centered.scores.at("a") == -0.2);

  CHECK_THROWS_AS(parse_anchors(lines_of({"account,score", "a,1.2"}), "t"), DataError);
  CHECK_THROWS_AS(parse_anchors(lines_of({"account,score", "a,-0.7"}), "t"), DataError);
  CHECK_THROWS_AS(parse_anchors(lines_of({"account,score", "a,0.1", "a,0.2"}), "t"), DataError);
  CHECK_THROWS_AS(parse_anchors(lines_of({"account,score", "a,-0.1", "b,0.9"}), "t"), DataError);
}

TEST_CASE("anchor translation is order-preserving") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    double a = u(rng), b = u(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    CHECK(translate_anchor(a, true) < translate_anchor(b, true));
    CHECK(translate_anchor(a - 0.5, false) < translate_anchor(b - 0.5, false));
  }
}

TEST_CASE("roster rejects overlapping sets") {
  RowRoster r;
  r.journalists.insert("x");
  r.politically_active["x"] = Party::D;
  CHECK_THROWS_AS(validate(r), DataError);
}

TEST_CASE("embedding validation") {
  EmbeddingSpace s;
  s.k = 2;
  s.row_ids = {"r"};
  s.row_vectors = Eigen::MatrixXd::Zero(1, 2);
  s.col_ids = {"c"};
  s.col_vectors = Eigen::MatrixXd::Zero(1, 2);
  s.singular_values = Eigen::Vector2d(2.0, 1.0);
  CHECK_NOTHROW(validate(s));
  s.singular_values = Eigen::Vector2d(1.0, 2.0);
  CHECK_THROWS_AS(validate(s), DataError);
}

TEST_CASE("round trips over random instances") {
  std::mt19937_64 rng(14);
  fixture::TempDir dir("roundtrip");
  std::uniform_int_distribution<int> size(1, 30), grid(-500, 500);

  for (int trial = 0; trial < 20; ++trial) {
    CAPTURE(trial);

    FollowEdgeList edges;
    for (int i = 0, n = size(rng); i < n; ++i) {
      FollowEdge e{random_id(rng, "s", 9), random_id(rng, "t", 9)};
      edges.edges.push_back(e);
    }
    std::sort(edges.edges.begin(), edges.edges.end());
    edges.edges.erase(std::unique(edges.edges.begin(), edges.edges.end()), edges.edges.end());
    write_file(dir / "edges.tsv", serialize_edges(edges, "-"));
    CHECK(load_edges(dir / "edges.tsv").edges == edges.edges);

    AnchorTable anchors;
    for (int i = 0, n = size(rng); i < n; ++i) {
      anchors.scores[random_id(rng, "a", 50)] = grid(rng) / 1000.0;
    }
    write_file(dir / "anchors.csv", serialize_anchors(anchors, "-"));
    CHECK(load_anchors(dir / "anchors.csv", AnchorScale::Centered).scores == anchors.scores);

    std::map<AccountId, Party> regs;
    std::map<AccountId, std::string> outlets;
    RowRoster roster;
    for (int i = 0, n = size(rng); i < n; ++i) {
      regs[random_id(rng, "v", 50)] = grid(rng) < 0 ? Party::D : Party::R;
      outlets[random_id(rng, "j", 50)] = random_id(rng, "outlet", 5);
    }
    for (const auto& [id, out] : outlets) roster.journalists.insert(id);
    roster.politically_active = regs;
    write_file(dir / "regs.tsv", serialize_registrations(regs, "-"));
    write_file(dir / "jour.tsv", serialize_journalists(outlets, "-"));
    write_file(dir / "roster.tsv", serialize_roster(roster, "-"));
    CHECK(load_registrations(dir / "regs.tsv") == regs);
    CHECK(load_journalists(dir / "jour.tsv") == outlets);
    const auto roster_back = load_roster(dir / "roster.tsv");
    CHECK(roster_back.journalists == roster.journalists);
    CHECK(roster_back.politically_active == roster.politically_active);

    const auto corpus = fixture::random_corpus(rng, 2, 2);
    write_file(dir / "corpus.jsonl", serialize_corpus(corpus, "-"));
    const auto corpus_back = load_corpus(dir / "corpus.jsonl");
    REQUIRE(corpus_back.size() == corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      CHECK(corpus_back[i].author == corpus[i].author);
      CHECK(corpus_back[i].group == corpus[i].group);
      CHECK(corpus_back[i].tokens == corpus[i].tokens);
      CHECK(corpus_back[i].boundaries == corpus[i].boundaries);
    }

    Lexicon lex;
    for (int i = 0, n = size(rng); i < n; ++i) {
      lex.left_terms.insert("left " + letters(i));
      lex.right_terms.insert("right term " + letters(i));
    }
    write_file(dir / "lex.tsv", serialize_lexicon(lex, "-"));
    const auto lex_back = load_lexicon(dir / "lex.tsv");
    CHECK(lex_back.left_terms == lex.left_terms);
    CHECK(lex_back.right_terms == lex.right_terms);

    TermScoreTable table;
    table.config = {1.0, 7, 9, 0, LogOddsForm::DirichletPrior};
    for (int i = 0, n = size(rng); i < n; ++i) {
      table.entries["term " + letters(i)] = {grid(rng) / 100.0, static_cast<std::size_t>(i % 8),
                                             static_cast<std::size_t>(i % 10)};
    }
    table.config.n_T = table.entries.size();
    write_file(dir / "scores.tsv", serialize_term_scores(table, "-"));
    const auto table_back = load_term_scores(dir / "scores.tsv");
    CHECK(table_back.config.n_D == 7);
    CHECK(table_back.config.n_R == 9);
    CHECK(table_back.config.n_T == table.entries.size());
    REQUIRE(table_back.entries.size() == table.entries.size());
    for (const auto& [t, s] : table.entries) {
      CHECK(table_back.entries.at(t).score == s.score);
      CHECK(table_back.entries.at(t).y_D == s.y_D);
      CHECK(table_back.entries.at(t).y_R == s.y_R);
    }

    std::vector<IdeologyEstimate> est;
    std::set<AccountId> used;
    for (int i = 0, n = size(rng); i < n; ++i) {
      const auto id = random_id(rng, "e", 99);
      if (!used.insert(id).second) continue;
      IdeologyEstimate e{id, grid(rng) / 1000.0, i % 2 ? Source::Text : Source::Network, {}};
      if (i % 3) e.group = random_id(rng, "g", 3);
      est.push_back(e);
    }
    write_file(dir / "est.tsv", serialize_estimates(est, "-"));
    const auto est_back = load_estimates(dir / "est.tsv");
    REQUIRE(est_back.size() == est.size());
    for (std::size_t i = 0; i < est.size(); ++i) {
      CHECK(est_back[i].account == est[i].account);
      CHECK(est_back[i].score == est[i].score);
      CHECK(est_back[i].source == est[i].source);
      CHECK(est_back[i].group == est[i].group);
    }
  }
}

TEST_CASE("matrix and embedding files round-trip at format precision") {
  std::mt19937_64 rng(15);
  fixture::TempDir dir("matrix");
  const auto dense = fixture::random_binary(rng, 6, 4, 0.4);
  FollowMatrix m;
  RowRoster roster;
  for (int i = 0; i < 6; ++i) {
    m.rows.push_back("r" + std::to_string(i));
    if (i < 3) {
      roster.journalists.insert(m.rows.back());
    } else {
      roster.politically_active[m.rows.back()] = i % 2 ? Party::R : Party::D;
    }
  }
  for (int j = 0; j < 4; ++j) m.cols.push_back("c" + std::to_string(j));
  m.cells = fixture::to_sparse(dense);
  write_file(dir / "m.tsv", serialize_matrix(m, roster, "-"));
  const auto back = load_matrix(dir / "m.tsv");
  CHECK(back.matrix.rows == m.rows);
  CHECK(back.matrix.cols == m.cols);
  CHECK(fixture::to_dense(back.matrix.cells) == dense);
  CHECK(back.roster.journalists == roster.journalists);

  EmbeddingSpace s;
  s.k = 3;
  s.row_ids = m.rows;
  s.col_ids = m.cols;
  s.row_vectors = Eigen::MatrixXd::Random(6, 3);
  s.col_vectors = Eigen::MatrixXd::Random(4, 3);
  s.singular_values = Eigen::Vector3d(3.5, 2.25, 0.125);
  const std::string text = serialize_embedding(s, "-");
  write_file(dir / "e.tsv", text);
  const auto e = load_embedding(dir / "e.tsv");
  CHECK(e.row_ids == s.row_ids);
  CHECK(e.col_ids == s.col_ids);
  CHECK(e.singular_values == s.singular_values);
  CHECK((e.row_vectors - s.row_vectors).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((e.col_vectors - s.col_vectors).cwiseAbs().maxCoeff() < 1e-8);
  // Serializing what was read reproduces the file byte for byte.
  CHECK(serialize_embedding(e, "-") == text);
}

TEST_CASE("every file starts with the version header") {
  CHECK(header_line("abc") == "# ideoscale 0.1.0 config=abc\n");
  CHECK(format_real(-0.0) == "0");
  CHECK(format_real(1.0 / 3.0) == "0.333333333");
  CHECK(digest("") == "cbf29ce484222325");
}
