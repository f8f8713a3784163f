#pragma once

#include "ideoscale/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace ideoscale::model {

inline constexpr const char* kToolVersion = "0.1.0";

/// Formats a real with 9 significant digits.
std::string format_real(double v);

/// First line of every file this toolkit writes.
std::string header_line(const std::string& config_digest);

/// Hex FNV-1a 64 digest of a byte string.
std::string digest(std::string_view bytes);

/// Non-comment, nonblank lines with their 1-based line numbers.
struct Line {
  std::size_t number;
  std::string text;
};
std::vector<Line> read_data_lines(const std::filesystem::path& path);

std::vector<std::string> split(std::string_view s, char sep);

// Writes `contents` to `path` via a temporary file and rename.
void write_file(const std::filesystem::path& path, const std::string& contents);

// ---- follow edges: `source<TAB>target`

FollowEdgeList parse_edges(const std::vector<Line>& lines, const std::string& origin);
FollowEdgeList load_edges(const std::filesystem::path& path);
std::string serialize_edges(const FollowEdgeList& edges, const std::string& digest);

// ---- anchors: CSV with header `account,score`

/// Input scale of raw anchor scores. Auto treats a file whose scores are all
/// nonnegative as [0, 1] and anything else as already centered.
enum class AnchorScale { Auto, UnitInterval, Centered };

AnchorTable parse_anchors(const std::vector<Line>& lines, const std::string& origin,
                          AnchorScale scale = AnchorScale::Auto);
AnchorTable load_anchors(const std::filesystem::path& path,
                         AnchorScale scale = AnchorScale::Auto);
std::string serialize_anchors(const AnchorTable& anchors, const std::string& digest);

/// Maps a raw anchor score onto [-0.5, 0.5] given the detected input range.
double translate_anchor(double raw, bool unit_interval);

// ---- party registrations: `account<TAB>D|R`

std::map<AccountId, Party> load_registrations(const std::filesystem::path& path);
std::string serialize_registrations(const std::map<AccountId, Party>& regs,
                                    const std::string& digest);

// ---- journalists: `account<TAB>outlet`

std::map<AccountId, std::string> load_journalists(const std::filesystem::path& path);
std::string serialize_journalists(const std::map<AccountId, std::string>& outlets,
                                  const std::string& digest);

// ---- row roster: `account<TAB>journalist|active<TAB>D|R|-`

RowRoster load_roster(const std::filesystem::path& path);
std::string serialize_roster(const RowRoster& roster, const std::string& digest);

// ---- corpora: one JSON object per line, {"author", "group", "text"}

std::vector<Document> parse_corpus(const std::vector<Line>& lines, const std::string& origin);
std::vector<Document> load_corpus(const std::filesystem::path& path);
std::string serialize_corpus(const std::vector<Document>& docs, const std::string& digest);

// ---- lexicon: `term<TAB>left|right`

/// Warns on stderr if the loaded lexicon is unbalanced.
Lexicon load_lexicon(const std::filesystem::path& path);
Lexicon parse_lexicon(const std::vector<Line>& lines, const std::string& origin);
std::string serialize_lexicon(const Lexicon& lexicon, const std::string& digest);

// ---- term scores: `term<TAB>score<TAB>y_D<TAB>y_R`, config on a second comment line

TermScoreTable load_term_scores(const std::filesystem::path& path);
std::string serialize_term_scores(const TermScoreTable& table, const std::string& digest);

// ---- follow matrix: rows / cols / cells sections

struct StoredMatrix {
  FollowMatrix matrix;
  RowRoster roster;
};
StoredMatrix load_matrix(const std::filesystem::path& path);
std::string serialize_matrix(const FollowMatrix& m, const RowRoster& roster,
                             const std::string& digest);

// ---- embeddings: `row|col|sigma<TAB>account<TAB>v1..vk`

EmbeddingSpace load_embedding(const std::filesystem::path& path);
std::string serialize_embedding(const EmbeddingSpace& space, const std::string& digest);

// ---- estimates: `account<TAB>score<TAB>source<TAB>group`

std::vector<IdeologyEstimate> load_estimates(const std::filesystem::path& path);
std::string serialize_estimates(const std::vector<IdeologyEstimate>& estimates,
                                const std::string& digest);

}  // namespace ideoscale::model
