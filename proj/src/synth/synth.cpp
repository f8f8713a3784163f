#include "ideoscale/synth.hpp"

#include "ideoscale/analysis/stats.hpp"
#include "ideoscale/error.hpp"
#include "ideoscale/io.hpp"
#include "ideoscale/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

namespace ideoscale::synth {

namespace {

enum Stream : std::uint32_t {
  kElite = 1,
  kRow = 2,
  kOutlet = 3,
  kCorpus = 10,
  kPanel = 20,
};

std::mt19937_64 substream(std::uint64_t seed, std::uint32_t tag, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), tag,
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

std::string padded(const char* prefix, std::size_t i, int width) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, i);
  return buf;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<double> draw_theta(std::mt19937_64& rng, int k) {
  std::vector<double> t(static_cast<std::size_t>(k));
  for (auto& v : t) v = uniform(rng, -0.5, 0.5);
  return t;
}

double sq_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return d;
}

model::Party party_of(double theta) { return theta < 0.0 ? model::Party::D : model::Party::R; }

}  // namespace

void validate(const SynthConfig& cfg) {
  if (cfg.n_journalists == 0 || cfg.n_active_users == 0 || cfg.n_elites == 0 ||
      cfg.n_anchored == 0 || cfg.term_pool_size == 0 || cfg.docs_per_author == 0 ||
      cfg.n_outlets == 0) {
    throw UsageError("synthetic counts must all be positive");
  }
  if (cfg.n_anchored > cfg.n_elites) throw UsageError("n_anchored must not exceed n_elites");
  if (cfg.k_true < 1) throw UsageError("k_true must be at least 1");
  if (cfg.follow_steepness < 0.0) throw UsageError("follow_steepness must be nonnegative");
  if (cfg.min_words_per_doc > cfg.max_words_per_doc) {
    throw UsageError("min_words_per_doc exceeds max_words_per_doc");
  }
  if (cfg.polar_rate < 0.0 || cfg.polar_rate > 0.5) throw UsageError("polar_rate must lie in [0, 0.5]");
}

std::string_view to_string(Role r) {
  switch (r) {
    case Role::Journalist: return "journalist";
    case Role::Active: return "active";
    case Role::Elite: return "elite";
    case Role::Anchored: return "anchored";
  }
  return "elite";
}

std::vector<std::string> outlet_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(i == 0 ? "Politico" : padded("outlet", i, 2));
  return out;
}

NetworkSample gen_network(const SynthConfig& cfg) {
  validate(cfg);
  const int k = cfg.k_true;

  struct Elite {
    AccountId id;
    std::vector<double> theta;
    double popularity;
    bool anchored;
  };
  std::vector<Elite> elites(cfg.n_elites);
  for (std::size_t j = 0; j < cfg.n_elites; ++j) {
    auto rng = substream(cfg.seed, kElite, j);
    Elite& e = elites[j];
    e.anchored = j < cfg.n_anchored;
    e.id = e.anchored ? padded("rep", j + 1, 3) : padded("elite", j + 1 - cfg.n_anchored, 4);
    e.theta = draw_theta(rng, k);
    std::normal_distribution<double> gauss(0.0, 1.0);
    e.popularity = cfg.popularity_base + std::exp(cfg.popularity_mu + cfg.popularity_sigma * gauss(rng)) +
                   (e.anchored ? cfg.anchored_popularity_boost : 0.0);
  }

  const std::size_t n_rows = cfg.n_journalists + cfg.n_active_users;
  struct Row {
    AccountId id;
    std::vector<double> theta;
    double sort_key = 0.0;
    std::vector<std::size_t> follows;
  };
  std::vector<Row> rows(n_rows);
  parallel_for(n_rows, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto rng = substream(cfg.seed, kRow, i);
      Row& r = rows[i];
      const bool journalist = i < cfg.n_journalists;
      r.id = journalist ? padded("jour", i + 1, 4) : padded("user", i + 1 - cfg.n_journalists, 5);
      r.theta = draw_theta(rng, k);
      std::normal_distribution<double> gauss(0.0, cfg.outlet_sorting_noise);
      r.sort_key = r.theta[0] + gauss(rng);
      for (std::size_t j = 0; j < elites.size(); ++j) {
        const double p = logistic(-cfg.follow_steepness * sq_distance(r.theta, elites[j].theta) +
                                  elites[j].popularity);
        if (uniform(rng, 0.0, 1.0) < p) r.follows.push_back(j);
      }
    }
  });

  NetworkSample out;
  for (const auto& r : rows) {
    for (std::size_t j : r.follows) out.edges.edges.push_back({r.id, elites[j].id});
  }
  std::sort(out.edges.edges.begin(), out.edges.edges.end());

  for (const auto& e : elites) {
    out.truth[e.id] = e.theta[0];
    TruthRecord rec{e.theta[0], e.anchored ? Role::Anchored : Role::Elite, ""};
    if (e.anchored) {
      out.anchors.scores[e.id] = e.theta[0];
      rec.group = std::string(model::to_string(party_of(e.theta[0])));
    }
    out.records[e.id] = rec;
  }

  // Outlets: journalists sorted by a noisy ideology key, cut into equal blocks.
  const auto names = outlet_names(cfg.n_outlets);
  std::vector<std::size_t> order(cfg.n_journalists);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rows[a].sort_key < rows[b].sort_key; });
  std::map<std::string, std::pair<double, std::size_t>> outlet_acc;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const Row& r = rows[order[pos]];
    const std::string& outlet = names[pos * cfg.n_outlets / order.size()];
    out.outlets[r.id] = outlet;
    auto& [sum, n] = outlet_acc[outlet];
    sum += r.theta[0];
    ++n;
  }
  for (std::size_t o = 0; o < names.size(); ++o) {
    const auto it = outlet_acc.find(names[o]);
    if (it == outlet_acc.end()) continue;
    auto rng = substream(cfg.seed, kOutlet, o);
    std::normal_distribution<double> noise(0.0, 0.02);
    out.outlet_truth[names[o]] = it->second.first / static_cast<double>(it->second.second) + noise(rng);
  }

  for (std::size_t i = 0; i < n_rows; ++i) {
    const Row& r = rows[i];
    out.truth[r.id] = r.theta[0];
    if (i < cfg.n_journalists) {
      out.roster.journalists.insert(r.id);
      out.records[r.id] = {r.theta[0], Role::Journalist, out.outlets.at(r.id)};
    } else {
      const auto party = party_of(r.theta[0]);
      out.roster.politically_active[r.id] = party;
      out.registrations[r.id] = party;
      out.records[r.id] = {r.theta[0], Role::Active, std::string(model::to_string(party))};
    }
  }
  return out;
}

namespace {

constexpr std::string_view kConsonants = "bdfgklmnprstvz";
constexpr std::string_view kVowels = "aeiou";

std::string syllable(std::size_t s) {
  return {kConsonants[s / kVowels.size() % kConsonants.size()], kVowels[s % kVowels.size()]};
}

// Pronounceable pseudo-word: a pool prefix followed by the index in base 70,
// at least two syllables.
std::string pseudo_word(const std::string& prefix, std::size_t index) {
  const std::size_t base = kConsonants.size() * kVowels.size();
  std::string digits;
  std::size_t v = index;
  int count = 0;
  do {
    digits = syllable(v % base) + digits;
    v /= base;
    ++count;
  } while (v > 0 || count < 2);
  return prefix + digits;
}

const std::vector<std::string>& filler_stopwords() {
  static const std::vector<std::string> words = {"the", "of",   "and", "to",   "in",
                                                 "a",   "for",  "on",  "that", "with",
                                                 "is",  "was", "by",  "as",   "from"};
  return words;
}

}  // namespace

TermPool term_pool(const SynthConfig& cfg) {
  TermPool pool;
  const std::size_t per_side = std::max<std::size_t>(1, cfg.term_pool_size / 2);
  for (std::size_t i = 0; i < per_side; ++i) {
    // Every third polar term is a two-word phrase.
    if (i % 3 == 2) {
      pool.left.push_back(pseudo_word("ka", i) + " " + pseudo_word("ku", i));
      pool.right.push_back(pseudo_word("ro", i) + " " + pseudo_word("ri", i));
    } else {
      pool.left.push_back(pseudo_word("ka", i));
      pool.right.push_back(pseudo_word("ro", i));
    }
  }
  for (std::size_t i = 0; i < cfg.neutral_vocabulary; ++i) pool.neutral.push_back(pseudo_word("te", i));
  return pool;
}

std::vector<model::Document> gen_corpus(const SynthConfig& cfg,
                                        const std::vector<CorpusAuthor>& authors,
                                        std::uint64_t stream) {
  validate(cfg);
  const TermPool pool = term_pool(cfg);
  const auto& stops = filler_stopwords();
  std::vector<std::vector<model::Document>> per_author(authors.size());

  parallel_for(authors.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t a = begin; a < end; ++a) {
      const CorpusAuthor& author = authors[a];
      auto rng = substream(cfg.seed, static_cast<std::uint32_t>(kCorpus + stream), a);
      const double p_right = std::clamp(0.5 + cfg.polar_lean * author.theta, 0.02, 0.98);
      std::uniform_int_distribution<std::size_t> length(cfg.min_words_per_doc, cfg.max_words_per_doc);
      std::uniform_int_distribution<std::size_t> sentence(8, 16);
      std::uniform_int_distribution<std::size_t> pick_left(0, pool.left.size() - 1);
      std::uniform_int_distribution<std::size_t> pick_right(0, pool.right.size() - 1);
      std::uniform_int_distribution<std::size_t> pick_stop(0, stops.size() - 1);
      std::uniform_int_distribution<std::size_t> pick_neutral(0, pool.neutral.size() - 1);

      for (std::size_t d = 0; d < cfg.docs_per_author; ++d) {
        model::Document doc;
        doc.author = author.id;
        doc.group = author.group;
        const std::size_t target = length(rng);
        std::size_t until_break = sentence(rng);
        while (doc.tokens.size() < target) {
          const double u = uniform(rng, 0.0, 1.0);
          if (u < cfg.polar_rate) {
            const bool right = uniform(rng, 0.0, 1.0) < p_right;
            const std::string& term = right ? pool.right[pick_right(rng)] : pool.left[pick_left(rng)];
            for (auto& w : model::split(term, ' ')) doc.tokens.push_back(std::move(w));
          } else if (u < cfg.polar_rate + 0.35) {
            doc.tokens.push_back(stops[pick_stop(rng)]);
          } else {
            doc.tokens.push_back(pool.neutral[pick_neutral(rng)]);
          }
          if (--until_break == 0 || doc.tokens.size() >= target) {
            until_break = sentence(rng);
            if (doc.tokens.size() < target) doc.boundaries.push_back(doc.tokens.size());
          }
        }
        per_author[a].push_back(std::move(doc));
      }
    }
  });

  std::vector<model::Document> docs;
  for (auto& v : per_author) {
    for (auto& d : v) docs.push_back(std::move(d));
  }
  return docs;
}

std::vector<CorpusAuthor> statement_authors(const std::map<AccountId, TruthRecord>& records) {
  std::vector<CorpusAuthor> out;
  for (const auto& [id, r] : records) {
    if (r.role == Role::Anchored) out.push_back({id, r.theta, r.group});
  }
  return out;
}

std::vector<CorpusAuthor> article_authors(const std::map<AccountId, TruthRecord>& records) {
  std::vector<CorpusAuthor> out;
  for (const auto& [id, r] : records) {
    if (r.role == Role::Journalist) out.push_back({id, r.theta, r.group});
  }
  return out;
}

Panel gen_outlet_panel(const PanelConfig& cfg) {
  if (cfg.n < 3 || cfg.n_outlets == 0) throw UsageError("panel needs n >= 3 and at least one outlet");
  const auto names = outlet_names(cfg.n_outlets);
  auto rng = substream(cfg.seed, kPanel, 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> offset(cfg.n_outlets);
  std::vector<double> center(cfg.n_outlets);
  for (std::size_t g = 0; g < cfg.n_outlets; ++g) {
    offset[g] = cfg.outlet_offset_sd * gauss(rng);
    center[g] = cfg.outlet_predictor_sd * gauss(rng);
  }
  std::vector<double> raw(cfg.n);
  std::vector<std::size_t> group(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    group[i] = i % cfg.n_outlets;
    raw[i] = center[group[i]] + gauss(rng);
  }
  const auto x = analysis::standardize_2sd(raw);
  Panel panel;
  panel.reference = names.front();
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const AccountId id = padded("jour", i + 1, 4);
    panel.predictor[id] = raw[i];
    panel.groups[id] = names[group[i]];
    panel.outcome[id] = cfg.effect * x[i] + offset[group[i]] + cfg.noise_sd * gauss(rng);
  }
  return panel;
}

std::string serialize_truth(const std::map<AccountId, TruthRecord>& records,
                            const std::string& digest) {
  std::string out = model::header_line(digest);
  for (const auto& [id, r] : records) {
    out += id + "\t" + model::format_real(r.theta) + "\t" + std::string(to_string(r.role)) + "\t" +
           (r.group.empty() ? "-" : r.group) + "\n";
  }
  return out;
}

std::map<AccountId, TruthRecord> load_truth(const std::filesystem::path& path) {
  std::map<AccountId, TruthRecord> out;
  for (const auto& line : model::read_data_lines(path)) {
    const auto f = model::split(line.text, '\t');
    const std::string where = path.string() + ":" + std::to_string(line.number);
    if (f.size() != 4) throw DataError(where + ": expected 'account<TAB>theta<TAB>role<TAB>group'");
    TruthRecord r;
    try {
      r.theta = std::stod(f[1]);
    } catch (const std::exception&) {
      throw DataError(where + ": bad theta");
    }
    if (f[2] == "journalist") r.role = Role::Journalist;
    else if (f[2] == "active") r.role = Role::Active;
    else if (f[2] == "elite") r.role = Role::Elite;
    else if (f[2] == "anchored") r.role = Role::Anchored;
    else throw DataError(where + ": unknown role '" + f[2] + "'");
    r.group = f[3] == "-" ? "" : f[3];
    out[f[0]] = r;
  }
  return out;
}

}  // namespace ideoscale::synth
