#pragma once

#include "ideoscale/types.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace ideoscale::synth {

using model::AccountId;

struct SynthConfig {
  std::size_t n_journalists = 500;
  std::size_t n_active_users = 1500;
  std::size_t n_elites = 500;
  std::size_t n_anchored = 40;
  int k_true = 1;
  /// Slope of the quadratic-distance logistic follow model.
  double follow_steepness = 10.0;
  std::size_t term_pool_size = 600;
  std::size_t docs_per_author = 50;
  std::uint64_t seed = 7;

  std::size_t n_outlets = 10;
  /// Elite popularity offset: base + LogNormal(mu, sigma).
  double popularity_base = -3.5;
  double popularity_mu = 0.0;
  double popularity_sigma = 0.5;
  double anchored_popularity_boost = 1.5;
  /// Noise on journalist ideology when assigning outlets.
  double outlet_sorting_noise = 0.15;

  std::size_t min_words_per_doc = 205;
  std::size_t max_words_per_doc = 260;
  /// Fraction of token slots filled with a polar term.
  double polar_rate = 0.02;
  /// Probability shift toward the matching pole per unit of ideology.
  double polar_lean = 1.6;
  std::size_t neutral_vocabulary = 400;
};

/// Throws UsageError on an invalid configuration.
void validate(const SynthConfig& cfg);

enum class Role { Journalist, Active, Elite, Anchored };

std::string_view to_string(Role r);

struct TruthRecord {
  double theta = 0.0;  // first latent dimension, on [-0.5, 0.5]
  Role role = Role::Elite;
  std::string group;  // outlet for journalists, party for active users and anchored elites
};

struct NetworkSample {
  model::FollowEdgeList edges;
  model::RowRoster roster;  // all journalists and all generated active users
  model::AnchorTable anchors;
  std::map<AccountId, double> truth;
  std::map<AccountId, model::Party> registrations;
  std::map<AccountId, std::string> outlets;  // journalist -> outlet
  std::map<std::string, double> outlet_truth;  // mean theta plus external-rating noise
  std::map<AccountId, TruthRecord> records;
};

/// Outlet names: "Politico" followed by "outlet01", "outlet02", ...
std::vector<std::string> outlet_names(std::size_t n);

/// Ideology theta ~ U[-0.5, 0.5] per account (per latent dim), and
/// P(row i follows elite j) = logistic(-steepness * |theta_i - theta_j|^2 + popularity_j).
NetworkSample gen_network(const SynthConfig& cfg);

struct CorpusAuthor {
  AccountId id;
  double theta = 0.0;
  std::string group;
};

/// Polar terms of the synthetic vocabulary, by side.
struct TermPool {
  std::vector<std::string> left;
  std::vector<std::string> right;
  std::vector<std::string> neutral;
};

TermPool term_pool(const SynthConfig& cfg);

/// Documents whose polar-term mix leans toward each author's pole in
/// proportion to theta. `stream` separates independent corpora generated
/// under the same seed.
std::vector<model::Document> gen_corpus(const SynthConfig& cfg,
                                        const std::vector<CorpusAuthor>& authors,
                                        std::uint64_t stream = 0);

/// Statement authors (anchored elites, grouped by party) and article authors
/// (journalists, grouped by outlet) drawn from a network sample.
std::vector<CorpusAuthor> statement_authors(const std::map<AccountId, TruthRecord>& records);
std::vector<CorpusAuthor> article_authors(const std::map<AccountId, TruthRecord>& records);

struct PanelConfig {
  std::size_t n = 648;
  std::size_t n_outlets = 10;
  double effect = 0.35;
  double noise_sd = 0.25;
  double outlet_offset_sd = 0.3;
  double outlet_predictor_sd = 0.5;  // between-outlet spread of the raw predictor
  std::uint64_t seed = 0;
};

/// Journalist-level data with outcome = effect * standardized predictor +
/// outlet offset + noise.
struct Panel {
  std::map<AccountId, double> outcome;
  std::map<AccountId, double> predictor;
  std::map<AccountId, std::string> groups;
  std::string reference;
};

Panel gen_outlet_panel(const PanelConfig& cfg);

// truth file: `account<TAB>theta<TAB>role<TAB>group`
std::string serialize_truth(const std::map<AccountId, TruthRecord>& records,
                            const std::string& digest);
std::map<AccountId, TruthRecord> load_truth(const std::filesystem::path& path);

}  // namespace ideoscale::synth
