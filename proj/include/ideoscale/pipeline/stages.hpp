#pragma once

#include "ideoscale/pipeline/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace ideoscale::pipeline {

// Each stage reads only files and writes only files, so any stage can be
// re-run on its own. `digest` goes into the header line of every output.

/// File names inside a run's output directory.
struct Layout {
  fs::path root;

  fs::path inputs_dir() const { return root / "inputs"; }
  fs::path matrix() const { return root / "net" / "matrix.tsv"; }
  fs::path embedding() const { return root / "net" / "embedding.tsv"; }
  fs::path model() const { return root / "net" / "model.tsv"; }
  fs::path network_scores() const { return root / "network_scores.tsv"; }
  fs::path terms() const { return root / "text" / "terms.tsv"; }
  fs::path term_scores() const { return root / "term_scores.tsv"; }
  fs::path lexicon() const { return root / "lexicon.tsv"; }
  fs::path author_scores() const { return root / "author_scores.tsv"; }
  fs::path outlet_means() const { return root / "outlet_means.csv"; }
  fs::path correlations() const { return root / "correlations.csv"; }
  fs::path regression() const { return root / "regression.csv"; }
  fs::path scatter() const { return root / "outlet_scatter.svg"; }
  fs::path coefficients() const { return root / "coefficients.svg"; }
  fs::path resolved_config() const { return root / "config.resolved.json"; }
  fs::path manifest() const { return root / "MANIFEST.tsv"; }
  fs::path lock() const { return root / ".ideoscale.lock"; }
  fs::path sentinel() const { return root / "PARTIAL"; }
};

/// Files written by `synth network` into a directory.
struct SynthFiles {
  fs::path dir;

  fs::path edges() const { return dir / "edges.tsv"; }
  fs::path anchors() const { return dir / "anchors.csv"; }
  fs::path congress() const { return dir / "congress.txt"; }
  fs::path registrations() const { return dir / "registrations.tsv"; }
  fs::path journalists() const { return dir / "journalists.tsv"; }
  fs::path truth() const { return dir / "truth.tsv"; }
  fs::path external() const { return dir / "external_outlets.csv"; }
  fs::path statements() const { return dir / "statements.jsonl"; }
  fs::path articles() const { return dir / "articles.jsonl"; }

  /// Points every input at the files of this directory.
  InputPaths inputs() const;
};

/// Digest of generator settings, used in the headers of synthetic files.
std::string synth_digest(const synth::SynthConfig& cfg);

/// Follow graph, anchors (written on the [0, 1] scale), congress list,
/// registrations, journalists with outlets, ground truth and external outlet
/// ratings.
void synth_network(const synth::SynthConfig& cfg, const fs::path& dir);

/// Statements by anchored accounts and articles by journalists, read from the
/// ground-truth file of an earlier `synth_network`.
void synth_corpus(const synth::SynthConfig& cfg, const fs::path& truth, const fs::path& dir);

struct BuildMatrixInputs {
  fs::path edges;
  fs::path anchors;   // used for the anchored set when `congress` is empty
  fs::path congress;
  fs::path registrations;
  fs::path journalists;
  model::AnchorScale anchor_scale = model::AnchorScale::Auto;
};

void build_matrix_stage(const BuildMatrixInputs& in, const net::EliteSelectionConfig& elites,
                        const net::ActiveUserFilter& active, const fs::path& out,
                        const std::string& digest);

void embed_stage(const fs::path& matrix, const net::SvdConfig& cfg, const fs::path& out,
                 const std::string& digest);

/// Returns the in-sample R^2.
double fit_stage(const fs::path& embedding, const fs::path& anchors, model::AnchorScale scale,
                 const net::ProjectionConfig& cfg, const fs::path& out, const std::string& digest);

/// Scores every matrix row. The group column carries the outlet for
/// journalists and the party for politically active users.
void score_stage(const fs::path& matrix, const fs::path& embedding, const fs::path& model,
                 const fs::path& journalists, const fs::path& out, const std::string& digest);

void extract_terms_stage(const fs::path& statements, const text::PhraseConfig& cfg,
                         const fs::path& out, const std::string& digest);

void score_terms_stage(const fs::path& statements, const fs::path& terms,
                       const text::ScoringConfig& cfg, const fs::path& out,
                       const std::string& digest);

void build_lexicon_stage(const fs::path& term_scores, const fs::path& keep,
                         const text::ScoringConfig& cfg, const fs::path& out,
                         const std::string& digest);

void score_authors_stage(const fs::path& articles, const fs::path& lexicon,
                         const text::AuthorFilter& filter, const fs::path& out,
                         const std::string& digest);

/// Per-outlet means of journalists' network and text scores, plus the
/// outlet scatter (network on x, text on y).
void means_stage(const fs::path& network_scores, const fs::path& author_scores,
                 const fs::path& journalists, const fs::path& out_csv, const fs::path& out_svg,
                 const std::string& digest);

/// Outlet-level correlations (network vs text, and each against the external
/// ratings when given) and the D/R separation AUC of active users.
void correlate_stage(const fs::path& outlet_means, const fs::path& network_scores,
                     const fs::path& external, const fs::path& out, const std::string& digest);

/// Text score on 2-SD network score with outlet fixed effects.
void regress_stage(const fs::path& network_scores, const fs::path& author_scores,
                   const fs::path& journalists, const std::string& reference,
                   const analysis::RegressionOptions& options, const fs::path& out_csv,
                   const fs::path& out_svg, const std::string& digest);

struct RunOptions {
  fs::path out;
  bool synth = false;  // generate inputs into <out>/inputs first
};

/// Runs every stage in order. On failure writes the PARTIAL sentinel naming
/// the stage and rethrows the error with the stage name prefixed.
void run_pipeline(PipelineConfig cfg, const RunOptions& options);

}  // namespace ideoscale::pipeline
