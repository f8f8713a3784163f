#include "ideoscale/pipeline/stages.hpp"

#include "ideoscale/analysis/plots.hpp"
#include "ideoscale/analysis/stats.hpp"
#include "ideoscale/error.hpp"
#include "ideoscale/log.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace ideoscale::pipeline {

using model::format_real;
using model::header_line;
using model::write_file;

namespace {

void require(const fs::path& path, const char* what) {
  if (path.empty()) throw UsageError(std::string("no ") + what + " file given");
  if (!fs::exists(path)) throw DataError(std::string(what) + " file not found: " + path.string());
}

std::string na_or(const std::optional<double>& v) { return v ? format_real(*v) : "NA"; }

std::optional<double> parse_optional(const std::string& s, const std::string& where) {
  if (s == "NA") return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(where + ": bad number '" + s + "'");
  }
}

struct OutletRow {
  std::size_t n_network = 0;
  std::optional<double> network;
  std::size_t n_text = 0;
  std::optional<double> text;
};

const char* kOutletHeader = "outlet,n_network,network_mean,n_text,text_mean";

std::map<std::string, OutletRow> load_outlet_means(const fs::path& path) {
  std::map<std::string, OutletRow> out;
  const auto lines = model::read_data_lines(path);
  if (lines.empty() || lines.front().text != kOutletHeader) {
    throw DataError(path.string() + ": expected header '" + kOutletHeader + "'");
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string where = path.string() + ":" + std::to_string(lines[i].number);
    const auto f = model::split(lines[i].text, ',');
    if (f.size() != 5) throw DataError(where + ": expected 5 fields");
    OutletRow r;
    r.n_network = static_cast<std::size_t>(std::stoul(f[1]));
    r.network = parse_optional(f[2], where);
    r.n_text = static_cast<std::size_t>(std::stoul(f[3]));
    r.text = parse_optional(f[4], where);
    out[f[0]] = r;
  }
  return out;
}

// `outlet,score` with that header; the outlet name may not contain commas.
std::map<std::string, double> load_external(const fs::path& path) {
  std::map<std::string, double> out;
  const auto lines = model::read_data_lines(path);
  if (lines.empty() || lines.front().text != "outlet,score") {
    throw DataError(path.string() + ": expected header 'outlet,score'");
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string where = path.string() + ":" + std::to_string(lines[i].number);
    const auto f = model::split(lines[i].text, ',');
    if (f.size() != 2) throw DataError(where + ": expected 'outlet,score'");
    const auto v = parse_optional(f[1], where);
    if (!v) throw DataError(where + ": missing score");
    if (!out.emplace(f[0], *v).second) throw DataError(where + ": duplicate outlet '" + f[0] + "'");
  }
  return out;
}

std::map<model::AccountId, double> score_map(const std::vector<model::IdeologyEstimate>& est) {
  std::map<model::AccountId, double> out;
  for (const auto& e : est) out[e.account] = e.score;
  return out;
}

std::map<model::AccountId, double> text_score_map(const fs::path& author_scores) {
  std::map<model::AccountId, double> out;
  for (const auto& a : text::load_author_scores(author_scores)) out[a.author] = a.score;
  return out;
}

}  // namespace

InputPaths SynthFiles::inputs() const {
  InputPaths in;
  in.edges = edges();
  in.anchors = anchors();
  in.congress = congress();
  in.registrations = registrations();
  in.journalists = journalists();
  in.statements = statements();
  in.articles = articles();
  in.external = external();
  return in;
}

std::string synth_digest(const synth::SynthConfig& cfg) {
  PipelineConfig c;
  c.synth = cfg;
  return model::digest(nlohmann::json::parse(to_json(c))["synth"].dump());
}

void synth_network(const synth::SynthConfig& cfg, const fs::path& dir) {
  const SynthFiles files{dir};
  const std::string digest = synth_digest(cfg);
  const synth::NetworkSample s = synth::gen_network(cfg);

  model::AnchorTable unit;
  std::string congress = header_line(digest);
  for (const auto& [id, score] : s.anchors.scores) {
    unit.scores[id] = score + 0.5;
    congress += id + "\n";
  }
  write_file(files.edges(), model::serialize_edges(s.edges, digest));
  write_file(files.anchors(), model::serialize_anchors(unit, digest));
  write_file(files.congress(), congress);
  write_file(files.registrations(), model::serialize_registrations(s.registrations, digest));
  write_file(files.journalists(), model::serialize_journalists(s.outlets, digest));
  write_file(files.truth(), synth::serialize_truth(s.records, digest));
  std::string external = header_line(digest) + "outlet,score\n";
  for (const auto& [outlet, v] : s.outlet_truth) external += outlet + "," + format_real(v) + "\n";
  write_file(files.external(), external);
}

void synth_corpus(const synth::SynthConfig& cfg, const fs::path& truth, const fs::path& dir) {
  require(truth, "ground-truth");
  const SynthFiles files{dir};
  const std::string digest = synth_digest(cfg);
  const auto records = synth::load_truth(truth);
  const auto statements = synth::gen_corpus(cfg, synth::statement_authors(records), 0);
  const auto articles = synth::gen_corpus(cfg, synth::article_authors(records), 1);
  write_file(files.statements(), model::serialize_corpus(statements, digest));
  write_file(files.articles(), model::serialize_corpus(articles, digest));
}

void build_matrix_stage(const BuildMatrixInputs& in, const net::EliteSelectionConfig& elites,
                        const net::ActiveUserFilter& active, const fs::path& out,
                        const std::string& digest) {
  require(in.edges, "edges");
  require(in.registrations, "registrations");
  require(in.journalists, "journalists");
  std::set<model::AccountId> anchored;
  if (!in.congress.empty()) {
    require(in.congress, "congress");
    anchored = text::load_word_list(in.congress);
  } else {
    require(in.anchors, "anchors");
    anchored = net::anchored_accounts(model::load_anchors(in.anchors, in.anchor_scale));
  }
  if (anchored.empty()) throw DataError("no anchored (congressional) accounts given");

  const auto edges = model::load_edges(in.edges);
  const auto registrations = model::load_registrations(in.registrations);
  const auto outlets = model::load_journalists(in.journalists);
  std::vector<model::AccountId> journalists;
  for (const auto& [id, outlet] : outlets) journalists.push_back(id);

  const auto active_users = net::filter_active_users(edges, registrations, anchored, active);
  const auto roster = net::make_roster(journalists, active_users);
  model::validate(roster);
  const auto cols = net::select_elites(edges, roster, anchored, elites);
  const auto built = net::build_matrix(edges, roster, cols);

  model::RowRoster kept;
  for (const auto& id : built.matrix.rows) {
    if (roster.journalists.count(id) != 0) {
      kept.journalists.insert(id);
    } else {
      kept.politically_active.emplace(id, roster.politically_active.at(id));
    }
  }
  log_info("build-matrix: " + std::to_string(built.matrix.rows.size()) + " rows (" +
           std::to_string(kept.journalists.size()) + " journalists), " +
           std::to_string(built.matrix.cols.size()) + " elite columns, " +
           std::to_string(built.matrix.cells.nonZeros()) + " cells");
  write_file(out, model::serialize_matrix(built.matrix, kept, digest));
}

void embed_stage(const fs::path& matrix, const net::SvdConfig& cfg, const fs::path& out,
                 const std::string& digest) {
  require(matrix, "matrix");
  const auto stored = model::load_matrix(matrix);
  const auto ppmi = net::ppmi_transform(stored.matrix.cells);
  const auto space = net::truncated_svd(ppmi, stored.matrix.rows, stored.matrix.cols, cfg);
  write_file(out, model::serialize_embedding(space, digest));
}

double fit_stage(const fs::path& embedding, const fs::path& anchors, model::AnchorScale scale,
                 const net::ProjectionConfig& cfg, const fs::path& out, const std::string& digest) {
  require(anchors, "anchors");
  require(embedding, "embedding");
  const auto table = model::load_anchors(anchors, scale);
  const auto space = model::load_embedding(embedding);
  const auto fitted = net::fit_projection(space, table, cfg);
  log_info("fit: R^2 = " + format_real(fitted.fit_r_squared) + " on " +
           std::to_string(fitted.n_train) + " anchored columns");
  write_file(out, net::serialize_model(fitted, digest));
  return fitted.fit_r_squared;
}

void score_stage(const fs::path& matrix, const fs::path& embedding, const fs::path& model_path,
                 const fs::path& journalists, const fs::path& out, const std::string& digest) {
  require(matrix, "matrix");
  require(embedding, "embedding");
  require(model_path, "model");
  require(journalists, "journalists");
  const auto stored = model::load_matrix(matrix);
  const auto space = model::load_embedding(embedding);
  const auto fitted = net::load_model(model_path);
  const auto outlets = model::load_journalists(journalists);
  auto estimates = net::project_rows(space, fitted);
  for (auto& e : estimates) {
    if (const auto it = outlets.find(e.account); it != outlets.end()) {
      e.group = it->second;
    } else if (const auto p = stored.roster.politically_active.find(e.account);
               p != stored.roster.politically_active.end()) {
      e.group = std::string(model::to_string(p->second));
    }
  }
  write_file(out, model::serialize_estimates(estimates, digest));
}

void extract_terms_stage(const fs::path& statements, const text::PhraseConfig& cfg,
                         const fs::path& out, const std::string& digest) {
  require(statements, "statements");
  const auto corpus = model::load_corpus(statements);
  auto support = text::phrase_support(corpus, cfg);
  std::erase_if(support, [&](const auto& kv) { return kv.second < cfg.min_authors; });
  log_info("extract-terms: " + std::to_string(support.size()) + " candidate terms");
  write_file(out, text::serialize_terms(support, digest));
}

void score_terms_stage(const fs::path& statements, const fs::path& terms,
                       const text::ScoringConfig& cfg, const fs::path& out,
                       const std::string& digest) {
  require(statements, "statements");
  require(terms, "terms");
  const auto corpus = model::load_corpus(statements);
  const auto table = text::score_terms(corpus, text::load_terms(terms), cfg);
  write_file(out, model::serialize_term_scores(table, digest));
}

void build_lexicon_stage(const fs::path& term_scores, const fs::path& keep,
                         const text::ScoringConfig& cfg, const fs::path& out,
                         const std::string& digest) {
  require(term_scores, "term scores");
  const auto table = model::load_term_scores(term_scores);
  std::optional<std::set<std::string>> keep_list;
  if (!keep.empty()) {
    require(keep, "keep-list");
    std::set<std::string> terms;
    for (const auto& line : model::read_data_lines(keep)) terms.insert(line.text);
    keep_list = std::move(terms);
  }
  text::LexiconReport report;
  const auto lexicon = text::build_lexicon(table, keep_list, cfg, &report);
  if (report.left_backfilled + report.right_backfilled > 0) {
    log_info("build-lexicon: back-filled " + std::to_string(report.left_backfilled) + " left and " +
             std::to_string(report.right_backfilled) + " right terms");
  }
  write_file(out, model::serialize_lexicon(lexicon, digest));
}

void score_authors_stage(const fs::path& articles, const fs::path& lexicon_path,
                         const text::AuthorFilter& filter, const fs::path& out,
                         const std::string& digest) {
  require(articles, "articles");
  require(lexicon_path, "lexicon");
  const auto corpus = model::load_corpus(articles);
  const auto lexicon = model::load_lexicon(lexicon_path);
  const auto eligible = text::filter_authors(corpus, lexicon, filter);
  log_info("score-authors: " + std::to_string(eligible.size()) + " eligible authors");
  const auto scores = text::score_authors(corpus, lexicon, eligible, filter);
  write_file(out, text::serialize_author_scores(scores, digest));
}

void means_stage(const fs::path& network_scores, const fs::path& author_scores,
                 const fs::path& journalists, const fs::path& out_csv, const fs::path& out_svg,
                 const std::string& digest) {
  require(network_scores, "network scores");
  require(author_scores, "author scores");
  require(journalists, "journalists");
  const auto outlets = model::load_journalists(journalists);
  std::vector<model::IdeologyEstimate> net_est;
  for (const auto& e : model::load_estimates(network_scores)) {
    if (const auto it = outlets.find(e.account); it != outlets.end()) {
      net_est.push_back({e.account, e.score, model::Source::Network, it->second});
    }
  }
  std::vector<model::IdeologyEstimate> text_est;
  for (const auto& [id, score] : text_score_map(author_scores)) {
    if (const auto it = outlets.find(id); it != outlets.end()) {
      text_est.push_back({id, score, model::Source::Text, it->second});
    }
  }
  const auto net_means = analysis::group_summaries(net_est);
  const auto text_means = analysis::group_summaries(text_est);

  std::set<std::string> names;
  for (const auto& [id, outlet] : outlets) names.insert(outlet);
  std::string csv = header_line(digest) + kOutletHeader + "\n";
  std::vector<analysis::LabeledPoint> points;
  for (const auto& name : names) {
    OutletRow r;
    if (const auto it = net_means.find(name); it != net_means.end()) {
      r.n_network = it->second.n;
      r.network = it->second.mean;
    }
    if (const auto it = text_means.find(name); it != text_means.end()) {
      r.n_text = it->second.n;
      r.text = it->second.mean;
    }
    csv += name + "," + std::to_string(r.n_network) + "," + na_or(r.network) + "," +
           std::to_string(r.n_text) + "," + na_or(r.text) + "\n";
    if (r.network && r.text) points.push_back({name, *r.network, *r.text});
  }
  write_file(out_csv, csv);
  write_file(out_svg, analysis::scatter_svg(points, "mean network score (followed accounts)",
                                            "mean text score (articles)",
                                            "Outlet means: network vs text ideology"));
}

void correlate_stage(const fs::path& outlet_means, const fs::path& network_scores,
                     const fs::path& external, const fs::path& out, const std::string& digest) {
  require(outlet_means, "outlet means");
  require(network_scores, "network scores");
  const auto rows = load_outlet_means(outlet_means);
  std::map<std::string, double> network, text_side;
  for (const auto& [name, r] : rows) {
    if (r.network) network[name] = *r.network;
    if (r.text) text_side[name] = *r.text;
  }
  std::string csv = header_line(digest) + "comparison,method,coefficient,n\n";
  auto add = [&](const std::string& label, const std::map<std::string, double>& a,
                 const std::map<std::string, double>& b) {
    std::size_t shared = 0;
    for (const auto& [k, v] : a) shared += b.count(k);
    if (shared < 3) {
      log_warn("correlate: " + label + " has only " + std::to_string(shared) +
               " shared outlets; skipped");
      return;
    }
    for (auto method : {analysis::CorrelationMethod::Pearson, analysis::CorrelationMethod::Spearman}) {
      const auto c = analysis::correlate(a, b, method);
      csv += label + "," + std::string(analysis::to_string(method)) + "," +
             format_real(c.coefficient) + "," + std::to_string(c.n) + "\n";
    }
  };
  add("network_vs_text", network, text_side);
  if (!external.empty()) {
    require(external, "external outlet scores");
    const auto ext = load_external(external);
    add("network_vs_external", network, ext);
    add("text_vs_external", text_side, ext);
  }

  std::vector<double> dem, rep;
  for (const auto& e : model::load_estimates(network_scores)) {
    if (e.group == "D") dem.push_back(e.score);
    if (e.group == "R") rep.push_back(e.score);
  }
  if (!dem.empty() && !rep.empty()) {
    csv += "registered_D_vs_R,auc," + format_real(analysis::separation_auc(dem, rep)) + "," +
           std::to_string(dem.size() + rep.size()) + "\n";
  } else {
    log_warn("correlate: no scored D and R active users; separation AUC skipped");
  }
  write_file(out, csv);
}

void regress_stage(const fs::path& network_scores, const fs::path& author_scores,
                   const fs::path& journalists, const std::string& reference,
                   const analysis::RegressionOptions& options, const fs::path& out_csv,
                   const fs::path& out_svg, const std::string& digest) {
  require(network_scores, "network scores");
  require(author_scores, "author scores");
  require(journalists, "journalists");
  const auto outlets = model::load_journalists(journalists);
  const auto network = score_map(model::load_estimates(network_scores));
  const auto text_scores = text_score_map(author_scores);
  std::map<model::AccountId, double> outcome, predictor;
  std::map<model::AccountId, std::string> groups;
  for (const auto& [id, outlet] : outlets) {
    const auto n = network.find(id);
    const auto t = text_scores.find(id);
    if (n == network.end() || t == text_scores.end()) continue;
    outcome[id] = t->second;
    predictor[id] = n->second;
    groups[id] = outlet;
  }
  const auto report = analysis::fit_fixed_effects(outcome, predictor, groups, reference, options);
  write_file(out_csv, analysis::serialize_report(report, digest));
  write_file(out_svg,
             analysis::coefficient_svg(report, "Text ideology on network ideology, outlet fixed effects"));
}

}  // namespace ideoscale::pipeline
