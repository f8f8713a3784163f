#include "ideoscale/error.hpp"
#include "ideoscale/log.hpp"
#include "ideoscale/pipeline/stages.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace fs = std::filesystem;
using namespace ideoscale;
using namespace ideoscale::pipeline;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool quiet = false;
  bool verbose = false;
};

PipelineConfig resolve_config(const Globals& g) {
  PipelineConfig cfg = g.config.empty() ? default_config() : load_config(g.config);
  if (g.seed) cfg.seed = *g.seed;
  cfg.svd.seed = cfg.seed;
  return cfg;
}

fs::path pick(const std::string& flag_value, const fs::path& fallback, const char* flag) {
  if (!flag_value.empty()) return flag_value;
  if (!fallback.empty()) return fallback;
  throw UsageError(std::string("missing ") + flag + " (or give it in --config inputs)");
}

fs::path need_out(const Globals& g) {
  if (g.out.empty()) throw UsageError("--out is required");
  return g.out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ideoscale: ideology scores from follow networks and partisan text"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(model::kToolVersion));

  Globals g;
  app.add_option("--config", g.config, "JSON pipeline config")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "random seed (overrides the config)");
  app.add_option("--out", g.out, "output file or directory");
  app.add_flag("-q,--quiet", g.quiet, "suppress warnings");
  app.add_flag("-v,--verbose", g.verbose, "progress messages");
  app.fallthrough();

  std::function<void()> action;

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "generate synthetic inputs with known truth");
  synth_cmd->require_subcommand(1);
  auto* synth_net = synth_cmd->add_subcommand("network", "follow graph, anchors, labels, truth");
  auto* synth_corpus_cmd = synth_cmd->add_subcommand("corpus", "statements and articles");
  std::string truth;
  synth_corpus_cmd->add_option("--truth", truth, "ground-truth file (default <out>/truth.tsv)");
  auto synth_settings = [&] {
    synth::SynthConfig c =
        g.config.empty() ? PipelineConfig::small_synth_config() : load_synth_config(g.config);
    if (g.seed) c.seed = *g.seed;
    return c;
  };
  synth_net->callback([&] { action = [&] { synth_network(synth_settings(), need_out(g)); }; });
  synth_corpus_cmd->callback([&] {
    action = [&] {
      const fs::path dir = need_out(g);
      synth_corpus(synth_settings(), truth.empty() ? SynthFiles{dir}.truth() : fs::path(truth),
                   dir);
    };
  });

  // net
  auto* net_cmd = app.add_subcommand("net", "network ideology");
  net_cmd->require_subcommand(1);
  std::string edges, anchors, congress, registrations, journalists, matrix, embedding, model_file;
  int k = 0;
  bool linear = false;

  auto* build = net_cmd->add_subcommand("build-matrix", "select rows and elite columns");
  build->add_option("--edges", edges);
  build->add_option("--anchors", anchors);
  build->add_option("--congress", congress, "anchored account list (default: anchor accounts)");
  build->add_option("--registrations", registrations);
  build->add_option("--journalists", journalists);
  build->callback([&] {
    action = [&] {
      const auto cfg = resolve_config(g);
      BuildMatrixInputs in;
      in.edges = pick(edges, cfg.inputs.edges, "--edges");
      in.congress = congress.empty() ? cfg.inputs.congress : fs::path(congress);
      in.anchors = anchors.empty() ? cfg.inputs.anchors : fs::path(anchors);
      in.registrations = pick(registrations, cfg.inputs.registrations, "--registrations");
      in.journalists = pick(journalists, cfg.inputs.journalists, "--journalists");
      in.anchor_scale = cfg.anchor_scale;
      build_matrix_stage(in, cfg.elites, cfg.active, need_out(g), config_digest(cfg));
    };
  });

  auto* embed = net_cmd->add_subcommand("embed", "PPMI + truncated SVD");
  embed->add_option("--matrix", matrix)->required();
  embed->add_option("--k", k, "latent dimensions");
  embed->callback([&] {
    action = [&] {
      auto cfg = resolve_config(g);
      if (k != 0) cfg.svd.k = k;
      embed_stage(matrix, cfg.svd, need_out(g), config_digest(cfg));
    };
  });

  auto* fit = net_cmd->add_subcommand("fit", "regress anchor scores on column vectors");
  fit->add_option("--embedding", embedding)->required();
  fit->add_option("--anchors", anchors);
  fit->add_flag("--linear", linear, "ordinary least squares instead of the additive model");
  fit->callback([&] {
    action = [&] {
      auto cfg = resolve_config(g);
      if (linear) cfg.projection.kind = net::ProjectionKind::Linear;
      const double r2 = fit_stage(embedding, pick(anchors, cfg.inputs.anchors, "--anchors"),
                                  cfg.anchor_scale, cfg.projection, need_out(g), config_digest(cfg));
      std::printf("R^2\t%s\n", model::format_real(r2).c_str());
    };
  });

  auto* score = net_cmd->add_subcommand("score", "project rows onto the anchor scale");
  score->add_option("--matrix", matrix)->required();
  score->add_option("--embedding", embedding)->required();
  score->add_option("--model", model_file)->required();
  score->add_option("--journalists", journalists);
  score->callback([&] {
    action = [&] {
      const auto cfg = resolve_config(g);
      score_stage(matrix, embedding, model_file,
                  pick(journalists, cfg.inputs.journalists, "--journalists"), need_out(g),
                  config_digest(cfg));
    };
  });

  // text
  auto* text_cmd = app.add_subcommand("text", "text ideology");
  text_cmd->require_subcommand(1);
  std::string statements, terms, term_scores, keep, articles, lexicon;
  int max_ngram = 0;

  auto* extract = text_cmd->add_subcommand("extract-terms", "candidate phrases from statements");
  extract->add_option("--statements", statements);
  extract->add_option("--max-ngram", max_ngram);
  extract->callback([&] {
    action = [&] {
      auto cfg = resolve_config(g);
      if (max_ngram != 0) cfg.phrases.max_ngram = max_ngram;
      if (!cfg.inputs.stopwords.empty()) cfg.phrases.stopwords = text::load_word_list(cfg.inputs.stopwords);
      extract_terms_stage(pick(statements, cfg.inputs.statements, "--statements"), cfg.phrases,
                          need_out(g), config_digest(cfg));
    };
  });

  auto* score_terms = text_cmd->add_subcommand("score-terms", "smoothed log-odds per term");
  score_terms->add_option("--statements", statements);
  score_terms->add_option("--terms", terms)->required();
  score_terms->callback([&] {
    action = [&] {
      const auto cfg = resolve_config(g);
      score_terms_stage(pick(statements, cfg.inputs.statements, "--statements"), terms,
                        cfg.scoring, need_out(g), config_digest(cfg));
    };
  });

  auto* lex = text_cmd->add_subcommand("build-lexicon", "balanced left/right lexicon");
  lex->add_option("--term-scores", term_scores)->required();
  lex->add_option("--keep", keep, "curated keep-list, one term per line");
  lex->callback([&] {
    action = [&] {
      const auto cfg = resolve_config(g);
      build_lexicon_stage(term_scores, keep.empty() ? cfg.inputs.keep : fs::path(keep), cfg.scoring,
                          need_out(g), config_digest(cfg));
    };
  });

  auto* authors = text_cmd->add_subcommand("score-authors", "lexicon counts per author");
  authors->add_option("--articles", articles);
  authors->add_option("--lexicon", lexicon)->required();
  authors->callback([&] {
    action = [&] {
      const auto cfg = resolve_config(g);
      score_authors_stage(pick(articles, cfg.inputs.articles, "--articles"), lexicon, cfg.authors,
                          need_out(g), config_digest(cfg));
    };
  });

  // analyze
  auto* analyze = app.add_subcommand("analyze", "group means, correlations, regression");
  analyze->require_subcommand(1);
  std::string network_scores, author_scores, outlet_means, external, svg, reference;
  bool robust = false;

  auto* means = analyze->add_subcommand("means", "per-outlet means and scatter");
  means->add_option("--network-scores", network_scores)->required();
  means->add_option("--author-scores", author_scores)->required();
  means->add_option("--journalists", journalists);
  means->add_option("--svg", svg, "scatter output (default <out>.svg)");
  means->callback([&] {
    action = [&] {
      const auto cfg = resolve_config(g);
      const fs::path out = need_out(g);
      fs::path plot = svg.empty() ? fs::path(out).replace_extension(".svg") : fs::path(svg);
      means_stage(network_scores, author_scores,
                  pick(journalists, cfg.inputs.journalists, "--journalists"), out, plot,
                  config_digest(cfg));
    };
  });

  auto* corr = analyze->add_subcommand("correlate", "outlet correlations and D/R separation");
  corr->add_option("--outlet-means", outlet_means)->required();
  corr->add_option("--network-scores", network_scores)->required();
  corr->add_option("--external", external, "outlet,score CSV of external ratings");
  corr->callback([&] {
    action = [&] {
      const auto cfg = resolve_config(g);
      correlate_stage(outlet_means, network_scores,
                      external.empty() ? cfg.inputs.external : fs::path(external), need_out(g),
                      config_digest(cfg));
    };
  });

  auto* regress = analyze->add_subcommand("regress", "outlet fixed-effects regression");
  regress->add_option("--network-scores", network_scores)->required();
  regress->add_option("--author-scores", author_scores)->required();
  regress->add_option("--journalists", journalists);
  regress->add_option("--reference", reference, "reference outlet");
  regress->add_flag("--robust", robust, "HC1 standard errors");
  regress->add_option("--svg", svg, "coefficient plot (default <out>.svg)");
  regress->callback([&] {
    action = [&] {
      auto cfg = resolve_config(g);
      if (!reference.empty()) cfg.reference_outlet = reference;
      if (robust) cfg.regression.robust_se = true;
      const fs::path out = need_out(g);
      fs::path plot = svg.empty() ? fs::path(out).replace_extension(".svg") : fs::path(svg);
      regress_stage(network_scores, author_scores,
                    pick(journalists, cfg.inputs.journalists, "--journalists"), cfg.reference_outlet,
                    cfg.regression, out, plot, config_digest(cfg));
    };
  });

  // run
  auto* run = app.add_subcommand("run", "all stages end to end");
  bool use_synth = false;
  run->add_flag("--synth", use_synth, "generate synthetic inputs into <out>/inputs first");
  run->callback([&] {
    action = [&] { run_pipeline(resolve_config(g), RunOptions{need_out(g), use_synth}); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::Usage);
  }

  set_log_level(g.quiet ? LogLevel::Quiet : g.verbose ? LogLevel::Info : LogLevel::Warn);
  try {
    if (action) action();
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::Data);
  }
}
