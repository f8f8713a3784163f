#include "ideoscale/types.hpp"

#include "ideoscale/error.hpp"

#include <cctype>

namespace ideoscale::model {

bool is_valid_account_id(std::string_view id) {
  if (id.empty() || id.front() == '#') return false;
  for (unsigned char c : id) {
    if (std::isspace(c) || c == ',') return false;
  }
  return true;
}

std::string_view to_string(Party p) { return p == Party::D ? "D" : "R"; }

std::optional<Party> parse_party(std::string_view s) {
  if (s == "D") return Party::D;
  if (s == "R") return Party::R;
  return std::nullopt;
}

std::string_view to_string(Side s) { return s == Side::Left ? "left" : "right"; }

std::optional<Side> parse_side(std::string_view s) {
  if (s == "left") return Side::Left;
  if (s == "right") return Side::Right;
  return std::nullopt;
}

std::string_view to_string(Source s) { return s == Source::Network ? "network" : "text"; }

void validate(const RowRoster& roster) {
  for (const auto& [id, party] : roster.politically_active) {
    if (roster.journalists.count(id) != 0) {
      throw DataError("account '" + id + "' is both a journalist and a politically active user");
    }
  }
}

std::vector<std::span<const std::string>> Document::segments() const {
  std::vector<std::span<const std::string>> out;
  std::size_t begin = 0;
  auto emit = [&](std::size_t end) {
    if (end > begin) out.emplace_back(tokens.data() + begin, end - begin);
    begin = end;
  };
  for (std::size_t b : boundaries) {
    if (b > tokens.size()) break;
    emit(b);
  }
  emit(tokens.size());
  return out;
}

void validate(const EmbeddingSpace& space) {
  const auto k = static_cast<Eigen::Index>(space.k);
  if (space.k <= 0) throw DataError("embedding dimension must be positive");
  if (space.row_vectors.cols() != k || space.col_vectors.cols() != k ||
      space.singular_values.size() != k) {
    throw DataError("embedding vectors do not all have length k=" + std::to_string(space.k));
  }
  if (space.row_vectors.rows() != static_cast<Eigen::Index>(space.row_ids.size()) ||
      space.col_vectors.rows() != static_cast<Eigen::Index>(space.col_ids.size())) {
    throw DataError("embedding id lists do not match vector counts");
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    if (space.singular_values[i] < 0.0 ||
        (i > 0 && space.singular_values[i] > space.singular_values[i - 1])) {
      throw DataError("singular values must be nonnegative and nonincreasing");
    }
  }
}

}  // namespace ideoscale::model
