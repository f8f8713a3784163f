#include "ideoscale/pipeline/config.hpp"

#include "ideoscale/error.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace ideoscale::pipeline {

using nlohmann::json;

namespace {

// Walks one JSON object, remembering which keys were read so that leftovers
// can be reported as unknown.
class Section {
 public:
  Section(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) throw UsageError("config: '" + where_ + "' must be an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    const json* v = take(key);
    if (v == nullptr) return;
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v->is_boolean()) throw std::invalid_argument("bool");
      } else if constexpr (std::is_arithmetic_v<T>) {
        if (!v->is_number()) throw std::invalid_argument("number");
        if constexpr (std::is_unsigned_v<T>) {
          if (v->is_number_float() || v->get<double>() < 0) throw std::invalid_argument("unsigned");
        }
      } else {
        if (!v->is_string()) throw std::invalid_argument("string");
      }
      out = v->get<T>();
    } catch (const std::exception&) {
      throw UsageError("config: '" + path(key) + "' has the wrong type");
    }
  }

  void read_path(const char* key, fs::path& out, const fs::path& base) {
    std::string s;
    read(key, s);
    if (!s.empty()) out = fs::path(s).is_absolute() ? fs::path(s) : base / s;
  }

  template <typename E>
  void read_enum(const char* key, E& out, const std::vector<std::pair<std::string, E>>& names) {
    std::string s;
    read(key, s);
    if (s.empty()) return;
    for (const auto& [n, e] : names) {
      if (n == s) {
        out = e;
        return;
      }
    }
    std::string allowed;
    for (const auto& [n, e] : names) allowed += (allowed.empty() ? "" : "|") + n;
    throw UsageError("config: '" + path(key) + "' must be one of " + allowed);
  }

  const json* child(const char* key) { return take(key); }

  std::string path(const char* key) const { return where_.empty() ? key : where_ + "." + key; }

  void finish() const {
    for (const auto& [k, v] : obj_.items()) {
      if (seen_.count(k) == 0) throw UsageError("config: unknown key '" + path(k.c_str()) + "'");
    }
  }

 private:
  const json* take(const char* key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  const json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(origin + ": invalid JSON: " + e.what());
  }
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<std::pair<std::string, model::AnchorScale>> kScales = {
    {"auto", model::AnchorScale::Auto},
    {"unit", model::AnchorScale::UnitInterval},
    {"centered", model::AnchorScale::Centered}};
const std::vector<std::pair<std::string, net::SvdMethod>> kSvdMethods = {
    {"auto", net::SvdMethod::Auto},
    {"dense", net::SvdMethod::Dense},
    {"randomized", net::SvdMethod::Randomized}};
const std::vector<std::pair<std::string, net::ProjectionKind>> kKinds = {
    {"gam", net::ProjectionKind::Gam}, {"linear", net::ProjectionKind::Linear}};
const std::vector<std::pair<std::string, model::LogOddsForm>> kForms = {
    {"dirichlet", model::LogOddsForm::DirichletPrior}, {"laplace", model::LogOddsForm::Laplace}};

template <typename E>
std::string name_of(E value, const std::vector<std::pair<std::string, E>>& names) {
  for (const auto& [n, e] : names) {
    if (e == value) return n;
  }
  return "?";
}

void read_synth(Section& s, synth::SynthConfig& c) {
  s.read("n_journalists", c.n_journalists);
  s.read("n_active_users", c.n_active_users);
  s.read("n_elites", c.n_elites);
  s.read("n_anchored", c.n_anchored);
  s.read("k_true", c.k_true);
  s.read("follow_steepness", c.follow_steepness);
  s.read("term_pool_size", c.term_pool_size);
  s.read("docs_per_author", c.docs_per_author);
  s.read("seed", c.seed);
  s.read("n_outlets", c.n_outlets);
  s.read("popularity_base", c.popularity_base);
  s.read("popularity_mu", c.popularity_mu);
  s.read("popularity_sigma", c.popularity_sigma);
  s.read("anchored_popularity_boost", c.anchored_popularity_boost);
  s.read("outlet_sorting_noise", c.outlet_sorting_noise);
  s.read("min_words_per_doc", c.min_words_per_doc);
  s.read("max_words_per_doc", c.max_words_per_doc);
  s.read("polar_rate", c.polar_rate);
  s.read("polar_lean", c.polar_lean);
  s.read("neutral_vocabulary", c.neutral_vocabulary);
  s.finish();
  synth::validate(c);
}

json synth_json(const synth::SynthConfig& c) {
  return {{"n_journalists", c.n_journalists},
          {"n_active_users", c.n_active_users},
          {"n_elites", c.n_elites},
          {"n_anchored", c.n_anchored},
          {"k_true", c.k_true},
          {"follow_steepness", c.follow_steepness},
          {"term_pool_size", c.term_pool_size},
          {"docs_per_author", c.docs_per_author},
          {"seed", c.seed},
          {"n_outlets", c.n_outlets},
          {"popularity_base", c.popularity_base},
          {"popularity_mu", c.popularity_mu},
          {"popularity_sigma", c.popularity_sigma},
          {"anchored_popularity_boost", c.anchored_popularity_boost},
          {"outlet_sorting_noise", c.outlet_sorting_noise},
          {"min_words_per_doc", c.min_words_per_doc},
          {"max_words_per_doc", c.max_words_per_doc},
          {"polar_rate", c.polar_rate},
          {"polar_lean", c.polar_lean},
          {"neutral_vocabulary", c.neutral_vocabulary}};
}

json inputs_json(const InputPaths& in) {
  return {{"edges", in.edges.string()},
          {"anchors", in.anchors.string()},
          {"congress", in.congress.string()},
          {"registrations", in.registrations.string()},
          {"journalists", in.journalists.string()},
          {"statements", in.statements.string()},
          {"articles", in.articles.string()},
          {"external", in.external.string()},
          {"keep", in.keep.string()},
          {"stopwords", in.stopwords.string()}};
}

json settings_json(const PipelineConfig& c) {
  return {
      {"seed", c.seed},
      {"anchor_scale", name_of(c.anchor_scale, kScales)},
      {"elites",
       {{"follow_fraction_threshold", c.elites.follow_fraction_threshold},
        {"always_include_anchored", c.elites.always_include_anchored}}},
      {"active_users",
       {{"min_congressional_follows", c.active.min_congressional_follows},
        {"require_party", c.active.require_party}}},
      {"embedding",
       {{"k", c.svd.k},
        {"exponent", c.svd.exponent},
        {"oversampling", c.svd.oversampling},
        {"power_iterations", c.svd.power_iterations},
        {"method", name_of(c.svd.method, kSvdMethods)},
        {"dense_limit", c.svd.dense_limit}}},
      {"projection",
       {{"kind", name_of(c.projection.kind, kKinds)},
        {"basis_size", c.projection.basis_size},
        {"penalty_grid_size", c.projection.penalty_grid_size},
        {"penalty_min", c.projection.penalty_min},
        {"penalty_max", c.projection.penalty_max}}},
      {"phrases",
       {{"max_ngram", c.phrases.max_ngram},
        {"min_authors", c.phrases.min_authors},
        {"use_pos_patterns", c.phrases.use_pos_patterns}}},
      {"scoring",
       {{"lambda", c.scoring.lambda},
        {"top_n_per_side", c.scoring.top_n_per_side},
        {"lexicon_size_per_side", c.scoring.lexicon_size_per_side},
        {"allow_size_override", c.scoring.allow_size_override},
        {"form", name_of(c.scoring.form, kForms)}}},
      {"authors",
       {{"min_articles", c.authors.min_articles}, {"min_words", c.authors.min_words}}},
      {"regression",
       {{"reference", c.reference_outlet},
        {"robust_se", c.regression.robust_se},
        {"z_critical", c.regression.z_critical}}},
      {"synth", synth_json(c.synth)}};
}

}  // namespace

synth::SynthConfig PipelineConfig::small_synth_config() {
  synth::SynthConfig c;
  c.n_journalists = 50;
  c.n_active_users = 200;
  c.n_elites = 100;
  c.n_anchored = 40;
  c.n_outlets = 10;
  c.docs_per_author = 20;
  return c;
}

PipelineConfig default_config() { return PipelineConfig{}; }

PipelineConfig parse_config(const std::string& json_text, const fs::path& base_dir) {
  const json root = parse_json(json_text, "config");
  PipelineConfig c;
  Section top(root, "");
  top.read("seed", c.seed);
  top.read_enum("anchor_scale", c.anchor_scale, kScales);
  // Written into config.resolved.json; accepted so that file can be fed back in.
  top.child("digest");
  if (const json* v = top.child("inputs")) {
    Section s(*v, "inputs");
    s.read_path("edges", c.inputs.edges, base_dir);
    s.read_path("anchors", c.inputs.anchors, base_dir);
    s.read_path("congress", c.inputs.congress, base_dir);
    s.read_path("registrations", c.inputs.registrations, base_dir);
    s.read_path("journalists", c.inputs.journalists, base_dir);
    s.read_path("statements", c.inputs.statements, base_dir);
    s.read_path("articles", c.inputs.articles, base_dir);
    s.read_path("external", c.inputs.external, base_dir);
    s.read_path("keep", c.inputs.keep, base_dir);
    s.read_path("stopwords", c.inputs.stopwords, base_dir);
    s.finish();
  }
  if (const json* v = top.child("elites")) {
    Section s(*v, "elites");
    s.read("follow_fraction_threshold", c.elites.follow_fraction_threshold);
    s.read("always_include_anchored", c.elites.always_include_anchored);
    s.finish();
  }
  if (const json* v = top.child("active_users")) {
    Section s(*v, "active_users");
    s.read("min_congressional_follows", c.active.min_congressional_follows);
    s.read("require_party", c.active.require_party);
    s.finish();
  }
  if (const json* v = top.child("embedding")) {
    Section s(*v, "embedding");
    s.read("k", c.svd.k);
    s.read("exponent", c.svd.exponent);
    s.read("oversampling", c.svd.oversampling);
    s.read("power_iterations", c.svd.power_iterations);
    s.read_enum("method", c.svd.method, kSvdMethods);
    s.read("dense_limit", c.svd.dense_limit);
    s.finish();
  }
  if (const json* v = top.child("projection")) {
    Section s(*v, "projection");
    s.read_enum("kind", c.projection.kind, kKinds);
    s.read("basis_size", c.projection.basis_size);
    s.read("penalty_grid_size", c.projection.penalty_grid_size);
    s.read("penalty_min", c.projection.penalty_min);
    s.read("penalty_max", c.projection.penalty_max);
    s.finish();
  }
  if (const json* v = top.child("phrases")) {
    Section s(*v, "phrases");
    s.read("max_ngram", c.phrases.max_ngram);
    s.read("min_authors", c.phrases.min_authors);
    s.read("use_pos_patterns", c.phrases.use_pos_patterns);
    s.finish();
  }
  if (const json* v = top.child("scoring")) {
    Section s(*v, "scoring");
    s.read("lambda", c.scoring.lambda);
    s.read("top_n_per_side", c.scoring.top_n_per_side);
    s.read("lexicon_size_per_side", c.scoring.lexicon_size_per_side);
    s.read("allow_size_override", c.scoring.allow_size_override);
    s.read_enum("form", c.scoring.form, kForms);
    s.finish();
  }
  if (const json* v = top.child("authors")) {
    Section s(*v, "authors");
    s.read("min_articles", c.authors.min_articles);
    s.read("min_words", c.authors.min_words);
    s.finish();
  }
  if (const json* v = top.child("regression")) {
    Section s(*v, "regression");
    s.read("reference", c.reference_outlet);
    s.read("robust_se", c.regression.robust_se);
    s.read("z_critical", c.regression.z_critical);
    s.finish();
  }
  if (const json* v = top.child("synth")) {
    Section s(*v, "synth");
    read_synth(s, c.synth);
  }
  top.finish();

  if (c.svd.k < 1) throw UsageError("config: embedding.k must be positive");
  if (!(c.scoring.lambda > 0.0)) throw UsageError("config: scoring.lambda must be positive");
  if (c.phrases.max_ngram < 1) throw UsageError("config: phrases.max_ngram must be positive");
  if (c.phrases.use_pos_patterns) {
    throw UsageError("config: phrases.use_pos_patterns is not supported");
  }
  if (!c.active.require_party) {
    throw UsageError("config: active_users.require_party cannot be false");
  }
  if (c.reference_outlet.empty()) throw UsageError("config: regression.reference is empty");
  c.svd.seed = c.seed;
  return c;
}

PipelineConfig load_config(const fs::path& path) {
  return parse_config(read_text(path), path.parent_path());
}

synth::SynthConfig parse_synth_config(const std::string& json_text) {
  const json root = parse_json(json_text, "synth config");
  if (root.is_object() && root.contains("synth")) {
    return parse_config(json_text, fs::path(".")).synth;
  }
  synth::SynthConfig c;
  Section s(root, "");
  read_synth(s, c);
  return c;
}

synth::SynthConfig load_synth_config(const fs::path& path) {
  return parse_synth_config(read_text(path));
}

std::string to_json(const PipelineConfig& cfg) {
  json j = settings_json(cfg);
  j["inputs"] = inputs_json(cfg.inputs);
  return j.dump(2) + "\n";
}

std::string file_digest(const fs::path& path) {
  if (path.empty() || !fs::exists(path)) return "-";
  return model::digest(read_text(path));
}

std::string config_digest(const PipelineConfig& cfg) {
  json j = settings_json(cfg);
  json inputs = inputs_json(cfg.inputs);
  for (auto& [key, value] : inputs.items()) value = file_digest(value.get<std::string>());
  j["inputs"] = inputs;
  return model::digest(j.dump());
}

}  // namespace ideoscale::pipeline
