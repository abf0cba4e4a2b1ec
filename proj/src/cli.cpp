#include "iconcode/cli.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <optional>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "iconcode/artifact.hpp"
#include "iconcode/codegen.hpp"
#include "iconcode/colorizer.hpp"
#include "iconcode/composer.hpp"
#include "iconcode/errors.hpp"
#include "iconcode/eval.hpp"
#include "iconcode/labeler.hpp"
#include "iconcode/tracer.hpp"
#include "iconcode/vocabminer.hpp"

namespace iconcode {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct PipelineConfig {
  std::vector<double> weights{1.0 / 3, 1.0 / 3, 1.0 / 3};
  double threshold = 0.6;
  IconPolicy policy;
  std::string method = "hac";
  double bandwidth = 40.0;
  double eps = 20.0;
  int min_pts = 2;
  TraceOptions trace;
  std::string masks;
  std::string model;
  std::string predictions;
  std::string output;
  std::string family = "iconfont";
  int jobs = 1;
  int top_k = 3;
  int bins = kDefaultBins;
  double t_sup = kDefaultMinSupport;
  double t_conf = kDefaultMinConfidence;
  std::size_t min_class_size = 0;
  bool groups = false;
  double sim_threshold = 0.9;
  double jaccard = 0.0;
  int n_max = 4;
  std::string config;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& path) {
  const std::string text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": malformed JSON: " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Runs fn(0..n-1) on up to `jobs` threads and returns results in index order.
// The first failure by index is rethrown.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, int jobs, Fn fn) {
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

void check_range(double v, double lo, double hi, const char* name) {
  if (!(v >= lo && v <= hi)) {
    throw ValidationError(std::string("--") + name + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

ComposeSettings compose_settings(const PipelineConfig& cfg) {
  if (cfg.weights.size() != 3) throw ValidationError("--weights takes exactly three values");
  check_range(cfg.threshold, 0, 1, "threshold");
  check_range(cfg.policy.max_area_ratio, 0, 1, "max-area");
  check_range(cfg.policy.max_coverage, 0, 1, "max-coverage");
  if (!(cfg.policy.min_aspect > 0 && cfg.policy.min_aspect <= cfg.policy.max_aspect))
    throw ValidationError("aspect bounds must satisfy 0 < min-aspect <= max-aspect");
  if (cfg.jobs < 1) throw ValidationError("--jobs must be at least 1");

  ComposeSettings s;
  s.weights = Weights(cfg.weights[0], cfg.weights[1], cfg.weights[2]);
  s.threshold = cfg.threshold;
  s.policy = cfg.policy;
  s.bandwidth = cfg.bandwidth;
  s.eps = cfg.eps;
  s.min_pts = cfg.min_pts;
  if (cfg.method == "hac") {
    s.method = ClusterMethod::hac;
  } else if (cfg.method == "meanshift") {
    s.method = ClusterMethod::mean_shift;
  } else if (cfg.method == "dbscan") {
    s.method = ClusterMethod::dbscan;
  } else {
    throw ValidationError("unknown --method " + cfg.method);
  }
  return s;
}

void check_trace(const PipelineConfig& cfg) {
  if (!(cfg.trace.d_max > 0)) throw ValidationError("--dmax must be positive");
  check_range(cfg.trace.smoothing, 0, 1, "smooth");
}

std::vector<ColorMask> load_masks(const PipelineConfig& cfg) {
  return cfg.masks.empty() ? default_masks() : parse_masks(read_json(cfg.masks));
}

DesignArtifact load_artifact(const fs::path& path) { return parse_artifact(read_json(path)); }

AssetLoader assets_beside(const fs::path& file) { return file_asset_loader(file.parent_path()); }

void emit(const PipelineConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.output.empty()) {
    out << text;
  } else {
    write_text(cfg.output, text);
  }
}

// ---- subcommands -----------------------------------------------------------

void cmd_compose(const PipelineConfig& cfg, const std::vector<std::string>& inputs, std::ostream& out) {
  const ComposeSettings settings = compose_settings(cfg);
  auto results = parallel_map<std::string>(inputs.size(), cfg.jobs, [&](std::size_t i) {
    const DesignArtifact artifact = load_artifact(inputs[i]);
    const AssetLoader assets = assets_beside(inputs[i]);
    return dump(clusters_to_json(artifact.name, compose_icons(artifact, settings, &assets)));
  });
  if (inputs.size() == 1) {
    emit(cfg, out, results.front());
    return;
  }
  if (cfg.output.empty()) throw ValidationError("-o <directory> is required when composing several artifacts");
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    write_text(fs::path(cfg.output) / (fs::path(inputs[i]).stem().string() + ".clusters.json"), results[i]);
  }
}

void cmd_trace(const PipelineConfig& cfg, const std::string& input, std::ostream& out) {
  check_trace(cfg);
  const Raster raster = read_png(input);
  const auto outlines = vectorize(raster, cfg.trace);
  emit(cfg, out, svg_document(outline_to_svg(outlines), raster.width(), raster.height()));
}

void cmd_color(const PipelineConfig& cfg, const std::string& input, std::ostream& out) {
  const auto masks = load_masks(cfg);
  const ColorReport report = primary_color(read_png(input), masks);
  out << report.primary.value_or("none") << "\n";
}

json prediction_json(const std::string& icon, const LabelPrediction& pred) {
  json list = json::array();
  for (const auto& [label, score] : pred.ranked) list.push_back({{"label", label}, {"score", score}});
  return {{"icon", icon}, {"predictions", std::move(list)}};
}

void cmd_classify(const PipelineConfig& cfg, const std::string& input, std::ostream& out) {
  if (cfg.model.empty()) throw ValidationError("--model is required");
  const ClassifierModel model = model_from_json(read_json(cfg.model));
  out << dump(prediction_json(input, classify(read_png(input), model, cfg.top_k)));
}

void cmd_train(const PipelineConfig& cfg, const std::string& dir, std::ostream& out) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
  std::vector<fs::path> label_dirs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory()) label_dirs.push_back(entry.path());
  }
  std::sort(label_dirs.begin(), label_dirs.end());
  std::vector<LabeledRaster> samples;
  for (const auto& label_dir : label_dirs) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(label_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".png") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) samples.push_back({read_png(f), label_dir.filename().string()});
  }
  emit(cfg, out, dump(model_to_json(train_centroids(samples, cfg.bins))));
}

struct GeneratedIcon {
  bool ok = false;
  std::string reason;
  Raster raster;
  std::vector<BezierOutline> outlines;
  std::string label;
  double score = 0;
  std::string color;
};

void cmd_generate(const PipelineConfig& cfg, const std::string& input, std::ostream& out) {
  const ComposeSettings settings = compose_settings(cfg);
  check_trace(cfg);
  if (cfg.output.empty()) throw ValidationError("-o <directory> is required");
  if (cfg.model.empty() == cfg.predictions.empty()) throw ValidationError("give exactly one of --model or --predictions");

  const DesignArtifact artifact = load_artifact(input);
  const AssetLoader assets = assets_beside(input);
  const auto masks = load_masks(cfg);
  std::optional<ClassifierModel> model;
  std::map<std::string, LabelPrediction> injected;
  if (!cfg.model.empty()) {
    model = model_from_json(read_json(cfg.model));
  } else {
    std::istringstream lines(read_text(cfg.predictions));
    injected = parse_prediction_lines(lines);
  }

  const auto clusters = compose_icons(artifact, settings, &assets);
  std::vector<const IconCluster*> icons;
  for (const auto& c : clusters) {
    if (c.accepted) icons.push_back(&c);
  }

  auto icon_key = [&](const IconCluster& c) { return artifact.name + ":" + std::to_string(c.id); };
  auto results = parallel_map<GeneratedIcon>(icons.size(), cfg.jobs, [&](std::size_t i) {
    const IconCluster& cluster = *icons[i];
    GeneratedIcon g;
    try {
      g.raster = compose_raster(cluster, artifact, assets);
    } catch (const IoError& e) {
      g.reason = e.what();
      return g;
    }
    g.outlines = vectorize(g.raster, cfg.trace);
    if (g.outlines.empty()) {
      g.reason = "no dark pixels to trace";
      return g;
    }
    g.color = primary_color(g.raster, masks).primary.value_or("none");
    if (model) {
      const auto pred = classify(g.raster, *model, 1);
      g.label = pred.top();
      g.score = pred.ranked.front().second;
    } else {
      auto it = injected.find(icon_key(cluster));
      if (it == injected.end() || it->second.ranked.empty()) {
        g.reason = "no injected prediction for " + icon_key(cluster);
        return g;
      }
      g.label = it->second.top();
      g.score = it->second.ranked.front().second;
    }
    g.ok = true;
    return g;
  });

  const fs::path out_dir(cfg.output);
  std::vector<GlyphSource> sources;
  std::vector<GalleryItem> gallery;
  json report_icons = json::array();
  json skipped = json::array();
  std::map<std::string, int> name_uses;
  for (std::size_t i = 0; i < icons.size(); ++i) {
    auto& g = results[i];
    if (!g.ok) {
      skipped.push_back({{"cluster", icons[i]->id}, {"reason", g.reason}});
      continue;
    }
    std::string name = sanitize_label(g.label);
    if (const int uses = ++name_uses[name]; uses > 1) name += "-" + std::to_string(uses);
    const CodeSnippet snippet = render_snippet(name, g.color);
    const std::string svg_file = "glyphs/" + name + ".svg";
    write_text(out_dir / svg_file, svg_document(outline_to_svg(g.outlines), g.raster.width(), g.raster.height()));
    gallery.push_back({snippet, svg_file});
    report_icons.push_back({{"cluster", icons[i]->id},
                            {"members", icons[i]->members},
                            {"label", g.label},
                            {"score", g.score},
                            {"color", g.color},
                            {"class", snippet.class_name},
                            {"snippet", snippet.html},
                            {"svg", svg_file}});
    sources.push_back({name, std::move(g.outlines), g.raster.width(), g.raster.height()});
  }

  const GlyphManifest manifest = build_glyph_set(sources, cfg.family);
  for (std::size_t i = 0; i < manifest.glyphs.size(); ++i) {
    report_icons[i]["codepoint"] = codepoint_label(manifest.glyphs[i].codepoint);
  }
  write_text(out_dir / "clusters.json", dump(clusters_to_json(artifact.name, clusters)));
  write_text(out_dir / "glyphs" / "manifest.json", dump(manifest_to_json(manifest)));
  write_text(out_dir / "icons.css", render_css(manifest));
  write_text(out_dir / "index.html", render_gallery(artifact.name, gallery));
  write_text(out_dir / "report.json",
             dump({{"artifact", artifact.name}, {"clusters", clusters.size()}, {"icons", report_icons}, {"skipped", skipped}}));
  out << manifest.glyphs.size() << " icon(s) written to " << out_dir.string() << "\n";
}

void cmd_mine(const PipelineConfig& cfg, const std::string& input, std::ostream& out) {
  std::istringstream lines(read_text(input));
  const auto corpus = parse_corpus_lines(lines);
  const MiningResult mined = mine_rules(corpus, cfg.t_sup, cfg.t_conf);
  const auto components = filter_components(label_graph_components(mined.graph), corpus, cfg.min_class_size);
  json doc = vocabulary_to_json(mined, components);
  if (cfg.groups) {
    json groups = json::array();
    for (const auto& g : group_labels(corpus, assets_beside(input), cfg.sim_threshold)) {
      groups.push_back({{"labels", {g.first, g.second}}, {"visual", g.visual}, {"lexical", g.lexical}});
    }
    doc["groups"] = std::move(groups);
  }
  emit(cfg, out, dump(doc));
}

void cmd_eval_compose(const PipelineConfig& cfg, const std::vector<std::string>& inputs,
                      const std::vector<std::string>& truth_files, std::ostream& out) {
  const ComposeSettings settings = compose_settings(cfg);
  std::map<std::string, CompositionTruth> truths;
  for (const auto& f : truth_files) {
    auto t = parse_truth(read_json(f));
    truths[t.artifact] = std::move(t);
  }
  std::vector<LabeledArtifact> corpus;
  for (const auto& in : inputs) {
    DesignArtifact artifact = load_artifact(in);
    auto it = truths.find(artifact.name);
    if (it == truths.end()) throw ValidationError("no truth file for artifact \"" + artifact.name + "\"");
    corpus.push_back({std::move(artifact), it->second});
  }
  const auto scores = compare_composers(corpus, settings, cfg.jaccard);
  json doc = comparison_to_json(scores, corpus);
  doc["table"] = format_comparison(scores);
  if (cfg.output.empty()) {
    out << dump(doc);
  } else {
    write_text(cfg.output, dump(doc));
    out << format_comparison(scores);
  }
}

std::vector<IconLabel> read_icon_labels(const std::string& path) {
  std::istringstream in(read_text(path));
  std::vector<IconLabel> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = json::parse(line);
      out.emplace_back(j.at("icon").get<std::string>(), j.at("label").get<std::string>());
    } catch (const json::exception& e) {
      throw ValidationError(path + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void cmd_eval_classify(const PipelineConfig& cfg, const std::string& truth_file, std::ostream& out) {
  if (cfg.predictions.empty()) throw ValidationError("--predictions is required");
  std::istringstream lines(read_text(cfg.predictions));
  std::vector<IconLabel> top1;
  for (const auto& [icon, pred] : parse_prediction_lines(lines)) top1.emplace_back(icon, pred.top());
  const auto truth = read_icon_labels(truth_file);
  emit(cfg, out, dump({{"accuracy", classification_accuracy(top1, truth)}, {"icons", truth.size()}}));
}

void cmd_eval_bleu(const PipelineConfig& cfg, const std::string& candidate, const std::string& reference,
                   std::ostream& out) {
  emit(cfg, out, dump({{"bleu", bleu(read_text(candidate), read_text(reference), cfg.n_max)}}));
}

// ---- option wiring ---------------------------------------------------------

void add_compose_options(CLI::App* app, PipelineConfig& cfg) {
  app->add_option("--threshold", cfg.threshold, "Dendrogram cut correlation")->capture_default_str();
  app->add_option("--weights", cfg.weights, "alpha,beta,gamma for kind, parent group and overlap")
      ->delimiter(',')
      ->expected(3);
  app->add_option("--max-area", cfg.policy.max_area_ratio, "Largest icon bbox area / canvas area")->capture_default_str();
  app->add_option("--min-aspect", cfg.policy.min_aspect, "Smallest icon width / height")->capture_default_str();
  app->add_option("--max-aspect", cfg.policy.max_aspect, "Largest icon width / height")->capture_default_str();
  app->add_option("--max-coverage", cfg.policy.max_coverage, "Largest opaque-pixel fraction of an icon")
      ->capture_default_str();
  app->add_option("--method", cfg.method, "hac, meanshift or dbscan")->capture_default_str();
  app->add_option("--bandwidth", cfg.bandwidth, "Mean-shift window (px)")->capture_default_str();
  app->add_option("--eps", cfg.eps, "DBSCAN neighbourhood radius (px)")->capture_default_str();
  app->add_option("--min-pts", cfg.min_pts, "DBSCAN core point size")->capture_default_str();
}

void add_trace_options(CLI::App* app, PipelineConfig& cfg) {
  app->add_option("--dmax", cfg.trace.d_max, "Polygon edge tolerance (px)")->capture_default_str();
  app->add_option("--smooth", cfg.trace.smoothing, "Control point fraction toward each polygon vertex")
      ->capture_default_str();
}

void add_jobs(CLI::App* app, PipelineConfig& cfg) {
  app->add_option("-j,--jobs", cfg.jobs, "Worker threads; output does not depend on it")->capture_default_str();
}

CLI::Option* add_output(CLI::App* app, PipelineConfig& cfg, const char* help) {
  return app->add_option("-o,--output", cfg.output, help);
}

// Values from --config fill in every option the command line left unset.
void apply_config(const std::string& path, const std::vector<CLI::App*>& chain) {
  const json doc = read_json(path);
  if (!doc.is_object()) throw ValidationError(path + ": config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    CLI::Option* opt = nullptr;
    for (auto it = chain.rbegin(); it != chain.rend() && !opt; ++it) opt = (*it)->get_option_no_throw("--" + key);
    if (!opt || opt->count() > 0 || key == "config") continue;
    std::vector<std::string> inputs;
    auto to_input = [&](const json& v) {
      if (v.is_string()) {
        inputs.push_back(v.get<std::string>());
      } else if (v.is_boolean()) {
        inputs.push_back(v.get<bool>() ? "true" : "false");
      } else if (v.is_number()) {
        inputs.push_back(v.dump());
      } else {
        throw ValidationError(path + ": unsupported value for \"" + key + "\"");
      }
    };
    if (value.is_array()) {
      for (const auto& v : value) to_input(v);
    } else {
      to_input(value);
    }
    try {
      opt->clear();
      for (auto& in : inputs) opt->add_result(in);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ValidationError(path + ": \"" + key + "\": " + e.what());
    }
  }
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  PipelineConfig cfg;
  CLI::App app{"Turns UI design artifacts into icon fonts, colour classes and code snippets.", "iconcode"};
  app.require_subcommand(1);
  app.add_option("--config", cfg.config, "JSON file of option defaults (keys are long option names)");

  std::vector<std::string> inputs;
  std::vector<std::string> truth_files;
  std::string single;
  std::string candidate;
  std::string reference;

  auto* compose = app.add_subcommand("compose", "Cluster an artifact's components into icon candidates");
  compose->add_option("artifacts", inputs, "Artifact JSON file(s)")->required();
  add_compose_options(compose, cfg);
  add_jobs(compose, cfg);
  add_output(compose, cfg, "clusters.json (one artifact) or output directory (several)");

  auto* trace = app.add_subcommand("trace", "Vectorize an icon raster into an SVG outline");
  trace->add_option("raster", single, "PNG icon")->required();
  add_trace_options(trace, cfg);
  add_output(trace, cfg, "SVG file (default: stdout)");

  auto* color = app.add_subcommand("color", "Print the primary colour of an icon raster");
  color->add_option("raster", single, "PNG icon")->required();
  color->add_option("--masks", cfg.masks, "JSON mask overrides");

  auto* cls = app.add_subcommand("classify", "Rank labels for an icon raster");
  cls->add_option("raster", single, "PNG icon")->required();
  cls->add_option("--model", cfg.model, "Model JSON from `train`");
  cls->add_option("-k,--top", cfg.top_k, "Number of labels to return")->capture_default_str();

  auto* train = app.add_subcommand("train", "Fit the colour-histogram classifier on a labelled directory");
  train->add_option("dir", single, "Directory with one sub-directory of PNGs per label")->required();
  train->add_option("--bins", cfg.bins, "Histogram bins per channel")->capture_default_str();
  add_output(train, cfg, "Model JSON (default: stdout)");

  auto* generate = app.add_subcommand("generate", "Run the full pipeline: glyph manifest, CSS, HTML and report");
  generate->add_option("artifact", single, "Artifact JSON file")->required();
  generate->add_option("--model", cfg.model, "Model JSON from `train`");
  generate->add_option("--predictions", cfg.predictions, "JSON lines of external predictions, keyed <artifact>:<cluster>");
  generate->add_option("--family", cfg.family, "Font family name")->capture_default_str();
  generate->add_option("--masks", cfg.masks, "JSON mask overrides");
  add_compose_options(generate, cfg);
  add_trace_options(generate, cfg);
  add_jobs(generate, cfg);
  add_output(generate, cfg, "Output directory")->required();

  auto* mine = app.add_subcommand("mine", "Mine label association rules and candidate categories");
  mine->add_option("corpus", single, "JSON lines corpus")->required();
  mine->add_option("--tsup", cfg.t_sup, "Minimum pair support")->capture_default_str();
  mine->add_option("--tconf", cfg.t_conf, "Minimum rule confidence")->capture_default_str();
  mine->add_option("--min-class-size", cfg.min_class_size, "Drop categories tagging fewer icons")->capture_default_str();
  mine->add_flag("--groups", cfg.groups, "Also report visually or lexically similar label pairs");
  mine->add_option("--sim-threshold", cfg.sim_threshold, "Similarity needed to group two labels")->capture_default_str();
  add_output(mine, cfg, "vocab.json (default: stdout)");

  auto* eval = app.add_subcommand("eval", "Score composition, classification or generated code");
  eval->require_subcommand(1);
  auto* eval_compose = eval->add_subcommand("compose", "Composition P/R/F1 for every clustering method");
  eval_compose->add_option("artifacts", inputs, "Artifact JSON file(s)")->required();
  eval_compose->add_option("--truth", truth_files, "Truth JSON file(s)")->required();
  eval_compose->add_option("--jaccard", cfg.jaccard, "Relaxed matching: minimum Jaccard index (0 = exact)")
      ->capture_default_str();
  add_compose_options(eval_compose, cfg);
  add_output(eval_compose, cfg, "Report JSON (table goes to stdout)");
  auto* eval_classify = eval->add_subcommand("classify", "Top-1 accuracy of a predictions file");
  eval_classify->add_option("--predictions", cfg.predictions, "JSON lines {icon,label,score}")->required();
  eval_classify->add_option("--truth", single, "JSON lines {icon,label}")->required();
  add_output(eval_classify, cfg, "Report JSON (default: stdout)");
  auto* eval_bleu = eval->add_subcommand("bleu", "BLEU of generated code against a reference");
  eval_bleu->add_option("--candidate", candidate, "Generated code file")->required();
  eval_bleu->add_option("--reference", reference, "Reference code file")->required();
  eval_bleu->add_option("--n", cfg.n_max, "Largest n-gram order")->capture_default_str();
  add_output(eval_bleu, cfg, "Report JSON (default: stdout)");

  for (auto* sub : {compose, trace, color, cls, train, generate, mine, eval, eval_compose, eval_classify, eval_bleu}) {
    sub->fallthrough();
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    std::vector<CLI::App*> chain{&app};
    for (CLI::App* cur = &app; !cur->get_subcommands().empty();) {
      cur = cur->get_subcommands().front();
      chain.push_back(cur);
    }
    if (!cfg.config.empty()) apply_config(cfg.config, chain);

    if (*compose) cmd_compose(cfg, inputs, out);
    else if (*trace) cmd_trace(cfg, single, out);
    else if (*color) cmd_color(cfg, single, out);
    else if (*cls) cmd_classify(cfg, single, out);
    else if (*train) cmd_train(cfg, single, out);
    else if (*generate) cmd_generate(cfg, single, out);
    else if (*mine) cmd_mine(cfg, single, out);
    else if (*eval_compose) cmd_eval_compose(cfg, inputs, truth_files, out);
    else if (*eval_classify) cmd_eval_classify(cfg, single, out);
    else if (*eval_bleu) cmd_eval_bleu(cfg, candidate, reference, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

int run_command(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_command(args, std::cout, std::cerr);
}

}  // namespace iconcode
