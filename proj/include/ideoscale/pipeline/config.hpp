#pragma once

#include "ideoscale/analysis/regression.hpp"
#include "ideoscale/io.hpp"
#include "ideoscale/net/matrix.hpp"
#include "ideoscale/net/projection.hpp"
#include "ideoscale/net/svd.hpp"
#include "ideoscale/synth.hpp"
#include "ideoscale/text/authors.hpp"
#include "ideoscale/text/phrases.hpp"
#include "ideoscale/text/scoring.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace ideoscale::pipeline {

namespace fs = std::filesystem;

/// Input files. Empty paths are absent; `congress`, `external`, `keep` and
/// `stopwords` are optional.
struct InputPaths {
  fs::path edges;          // source<TAB>target
  fs::path anchors;        // account,score
  fs::path congress;       // anchored account list; defaults to the anchors' accounts
  fs::path registrations;  // account<TAB>D|R
  fs::path journalists;    // account<TAB>outlet
  fs::path statements;     // JSONL, group = party
  fs::path articles;       // JSONL, group = outlet
  fs::path external;       // outlet,score
  fs::path keep;           // curated lexicon keep-list, one term per line
  fs::path stopwords;      // one word per line
};

struct PipelineConfig {
  std::uint64_t seed = 7;
  InputPaths inputs;
  model::AnchorScale anchor_scale = model::AnchorScale::Auto;
  net::EliteSelectionConfig elites;
  net::ActiveUserFilter active;
  net::SvdConfig svd;  // svd.seed is overwritten by `seed`
  net::ProjectionConfig projection;
  text::PhraseConfig phrases = text::default_phrase_config();
  text::ScoringConfig scoring;
  text::AuthorFilter authors;
  analysis::RegressionOptions regression;
  std::string reference_outlet = "Politico";
  synth::SynthConfig synth = small_synth_config();

  /// The world generated by `run --synth` unless configured otherwise:
  /// 50 journalists, 200 active users, 100 elites, 40 anchored.
  static synth::SynthConfig small_synth_config();
};

PipelineConfig default_config();

/// Parses a JSON config. Unknown keys are errors. Relative input paths are
/// resolved against `base_dir`.
PipelineConfig parse_config(const std::string& json_text, const fs::path& base_dir);
PipelineConfig load_config(const fs::path& path);

/// Synthetic-world settings from either a bare object of generator keys or a
/// full pipeline config (its "synth" section).
synth::SynthConfig load_synth_config(const fs::path& path);
synth::SynthConfig parse_synth_config(const std::string& json_text);

/// Fully resolved config as canonical JSON (sorted keys, every field present).
std::string to_json(const PipelineConfig& cfg);

/// Digest of the resolved config with input paths replaced by the digests of
/// the files they name, so relocating identical inputs keeps the digest.
std::string config_digest(const PipelineConfig& cfg);

/// Content digest of a file, or "-" when the path is empty or missing.
std::string file_digest(const fs::path& path);

}  // namespace ideoscale::pipeline
