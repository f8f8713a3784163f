#pragma once

// Random generators and small helpers shared by the unit and acceptance tests.

#include "ideoscale/types.hpp"
#include "oracles.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fixture {

namespace fs = std::filesystem;

inline ideoscale::model::SparseMatrix to_sparse(const oracle::Dense& d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  const auto m = n == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(d[0].size());
  ideoscale::model::SparseMatrix s(n, m);
  std::vector<Eigen::Triplet<double>> trips;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double v = d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (v != 0.0) trips.emplace_back(i, j, v);
    }
  }
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

inline oracle::Dense to_dense(const ideoscale::model::SparseMatrix& s) {
  oracle::Dense d(static_cast<std::size_t>(s.rows()),
                  std::vector<double>(static_cast<std::size_t>(s.cols()), 0.0));
  for (Eigen::Index i = 0; i < s.outerSize(); ++i) {
    for (ideoscale::model::SparseMatrix::InnerIterator it(s, i); it; ++it) {
      d[static_cast<std::size_t>(it.row())][static_cast<std::size_t>(it.col())] = it.value();
    }
  }
  return d;
}

/// Binary matrix with every row and column holding at least one 1.
inline oracle::Dense random_binary(std::mt19937_64& rng, std::size_t n, std::size_t m,
                                   double density) {
  std::bernoulli_distribution cell(density);
  oracle::Dense d(n, std::vector<double>(m, 0.0));
  for (auto& row : d) {
    for (double& v : row) v = cell(rng) ? 1.0 : 0.0;
  }
  std::uniform_int_distribution<std::size_t> pick_col(0, m - 1), pick_row(0, n - 1);
  for (auto& row : d) row[pick_col(rng)] = 1.0;
  for (std::size_t j = 0; j < m; ++j) d[pick_row(rng)][j] = 1.0;
  return d;
}

inline oracle::Dense random_real(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::normal_distribution<double> z(0.0, 1.0);
  oracle::Dense d(n, std::vector<double>(m, 0.0));
  for (auto& row : d) {
    for (double& v : row) v = z(rng);
  }
  return d;
}

/// Documents over a tiny vocabulary so that n-grams repeat across authors.
inline std::vector<ideoscale::model::Document> random_corpus(std::mt19937_64& rng,
                                                             std::size_t n_dem, std::size_t n_rep,
                                                             std::size_t vocab = 6) {
  std::vector<ideoscale::model::Document> docs;
  std::uniform_int_distribution<std::size_t> word(0, vocab - 1), n_docs(1, 3), len(1, 12);
  std::bernoulli_distribution cut(0.15);
  auto add = [&](const std::string& author, const std::string& group) {
    const std::size_t count = n_docs(rng);
    for (std::size_t d = 0; d < count; ++d) {
      ideoscale::model::Document doc;
      doc.author = author;
      doc.group = group;
      const std::size_t n = len(rng);
      for (std::size_t t = 0; t < n; ++t) {
        if (t > 0 && cut(rng)) doc.boundaries.push_back(t);
        doc.tokens.push_back(std::string(1, static_cast<char>('a' + word(rng))));
      }
      docs.push_back(std::move(doc));
    }
  };
  for (std::size_t i = 0; i < n_dem; ++i) add("dem" + std::to_string(i), "D");
  for (std::size_t i = 0; i < n_rep; ++i) add("rep" + std::to_string(i), "R");
  return docs;
}

inline std::vector<oracle::Doc> to_oracle(const std::vector<ideoscale::model::Document>& docs) {
  std::vector<oracle::Doc> out;
  for (const auto& d : docs) {
    oracle::Doc o{d.author, d.group, {}};
    for (auto seg : d.segments()) o.segments.emplace_back(seg.begin(), seg.end());
    out.push_back(std::move(o));
  }
  return out;
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("ideoscale-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

/// Runs the CLI with the given arguments, returning its exit status.
inline int run_cli(const std::string& exe, const std::string& args,
                   const std::string& redirect = "> /dev/null 2>&1") {
  const std::string cmd = "\"" + exe + "\" " + args + " " + redirect;
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fixture
