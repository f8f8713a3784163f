#include "ideoscale/pipeline/stages.hpp"

#include "ideoscale/error.hpp"
#include "ideoscale/log.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace ideoscale::pipeline {

namespace {

class DirectoryLock {
 public:
  explicit DirectoryLock(fs::path path) : path_(std::move(path)) {
    std::FILE* f = std::fopen(path_.c_str(), "wx");
    if (f == nullptr) {
      throw UsageError("output directory is locked by another run (" + path_.string() +
                       "); remove the lock file if no run is active");
    }
    std::fputs("ideoscale run\n", f);
    std::fclose(f);
  }
  ~DirectoryLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  fs::path path_;
};

void run_stage(const Layout& layout, const std::string& name, const std::function<void()>& body) {
  log_info("stage: " + name);
  try {
    body();
  } catch (const std::exception& e) {
    ErrorKind kind = ErrorKind::Data;
    if (const auto* err = dynamic_cast<const Error*>(&e)) kind = err->kind();
    std::string what = e.what();
    for (char& c : what) {
      if (c == '\n') c = ' ';
    }
    model::write_file(layout.sentinel(), "stage\t" + name + "\nerror\t" + what + "\n");
    throw Error(kind, name + ": " + e.what());
  }
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_manifest(const Layout& layout) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(layout.root)) {
    if (!entry.is_regular_file()) continue;
    const fs::path p = entry.path();
    if (p == layout.manifest() || p == layout.lock() || p == layout.sentinel()) continue;
    files.push_back(p);
  }
  std::sort(files.begin(), files.end());
  std::string out = "# file\tdigest\n";
  for (const auto& p : files) {
    out += fs::relative(p, layout.root).generic_string() + "\t" + model::digest(slurp(p)) + "\n";
  }
  model::write_file(layout.manifest(), out);
}

}  // namespace

void run_pipeline(PipelineConfig cfg, const RunOptions& options) {
  if (options.out.empty()) throw UsageError("run: --out is required");
  const Layout layout{options.out};
  fs::create_directories(layout.root);
  const DirectoryLock lock(layout.lock());
  std::error_code ec;
  fs::remove(layout.sentinel(), ec);
  fs::remove(layout.manifest(), ec);
  cfg.svd.seed = cfg.seed;

  if (options.synth) {
    run_stage(layout, "synth", [&] {
      cfg.synth.seed = cfg.seed;
      const SynthFiles files{layout.inputs_dir()};
      synth_network(cfg.synth, files.dir);
      synth_corpus(cfg.synth, files.truth(), files.dir);
      InputPaths in = files.inputs();
      in.keep = cfg.inputs.keep;
      in.stopwords = cfg.inputs.stopwords;
      cfg.inputs = in;
    });
  }
  if (!cfg.inputs.stopwords.empty()) {
    run_stage(layout, "text extract-terms", [&] {
      if (!fs::exists(cfg.inputs.stopwords)) {
        throw DataError("stopwords file not found: " + cfg.inputs.stopwords.string());
      }
      cfg.phrases.stopwords = text::load_word_list(cfg.inputs.stopwords);
    });
  }

  const std::string digest = config_digest(cfg);
  {
    // Inputs inside the output directory are recorded relative to it.
    PipelineConfig shown = cfg;
    for (fs::path* p : {&shown.inputs.edges, &shown.inputs.anchors, &shown.inputs.congress,
                        &shown.inputs.registrations, &shown.inputs.journalists,
                        &shown.inputs.statements, &shown.inputs.articles, &shown.inputs.external,
                        &shown.inputs.keep, &shown.inputs.stopwords}) {
      const fs::path rel = p->lexically_relative(layout.root);
      if (!p->empty() && !rel.empty() && *rel.begin() != "..") *p = rel;
    }
    auto resolved = nlohmann::json::parse(to_json(shown));
    resolved["digest"] = digest;
    model::write_file(layout.resolved_config(), resolved.dump(2) + "\n");
  }
  const InputPaths& in = cfg.inputs;

  run_stage(layout, "net build-matrix", [&] {
    build_matrix_stage({in.edges, in.anchors, in.congress, in.registrations, in.journalists,
                        cfg.anchor_scale},
                       cfg.elites, cfg.active, layout.matrix(), digest);
  });
  run_stage(layout, "net embed",
            [&] { embed_stage(layout.matrix(), cfg.svd, layout.embedding(), digest); });
  run_stage(layout, "net fit", [&] {
    fit_stage(layout.embedding(), in.anchors, cfg.anchor_scale, cfg.projection, layout.model(),
              digest);
  });
  run_stage(layout, "net score", [&] {
    score_stage(layout.matrix(), layout.embedding(), layout.model(), in.journalists,
                layout.network_scores(), digest);
  });
  run_stage(layout, "text extract-terms",
            [&] { extract_terms_stage(in.statements, cfg.phrases, layout.terms(), digest); });
  run_stage(layout, "text score-terms", [&] {
    score_terms_stage(in.statements, layout.terms(), cfg.scoring, layout.term_scores(), digest);
  });
  run_stage(layout, "text build-lexicon", [&] {
    build_lexicon_stage(layout.term_scores(), in.keep, cfg.scoring, layout.lexicon(), digest);
  });
  run_stage(layout, "text score-authors", [&] {
    score_authors_stage(in.articles, layout.lexicon(), cfg.authors, layout.author_scores(), digest);
  });
  run_stage(layout, "analyze means", [&] {
    means_stage(layout.network_scores(), layout.author_scores(), in.journalists,
                layout.outlet_means(), layout.scatter(), digest);
  });
  run_stage(layout, "analyze correlate", [&] {
    correlate_stage(layout.outlet_means(), layout.network_scores(), in.external,
                    layout.correlations(), digest);
  });
  run_stage(layout, "analyze regress", [&] {
    regress_stage(layout.network_scores(), layout.author_scores(), in.journalists,
                  cfg.reference_outlet, cfg.regression, layout.regression(), layout.coefficients(),
                  digest);
  });
  write_manifest(layout);
}

}  // namespace ideoscale::pipeline
