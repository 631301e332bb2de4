#include "cli/commands.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "taxalign/taxalign.hpp"

namespace taxalign::cli {

namespace {

using nlohmann::json;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io: return kExitIo;
    case ErrorKind::Config: return kExitConfig;
    default: return kExitFormat;
  }
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  return f;
}

void require_file(const std::string& path, const char* what) {
  if (!std::filesystem::is_regular_file(path)) {
    throw Error(ErrorKind::Io, std::string(what) + " file not found: '" + path + "'");
  }
}

struct TransformFlags {
  bool add_top = false;
  std::string top_word = "TOP";
  std::string top_file;
  std::string top_target;
  bool collapse = false;

  void attach(CLI::App& cmd) {
    cmd.add_flag("--add-top", add_top, "Insert a virtual top above every source root");
    cmd.add_option("--top-word", top_word, "Word carried by the virtual top")->capture_default_str();
    cmd.add_option("--top-file", top_file, "Semantic-file tag for the virtual top");
    cmd.add_flag("--collapse-senses", collapse, "Merge same-word sibling sense nodes (applied before --add-top)");
  }

  json to_json() const {
    json j{{"collapse_senses", collapse}, {"add_top", add_top}};
    if (add_top) {
      j["top_word"] = top_word;
      if (!top_file.empty()) j["top_file"] = top_file;
      if (!top_target.empty()) j["top_target"] = top_target;
    }
    return j;
  }
};

struct Transformed {
  TaxonomyGraph graph;
  std::optional<NodeId> top;
  std::map<NodeId, NodeId> merge_map;
};

Transformed apply_transforms(TaxonomyGraph g, const TransformFlags& t) {
  Transformed out{std::move(g), std::nullopt, {}};
  if (t.collapse) {
    auto c = collapse_sense_siblings(out.graph);
    out.graph = std::move(c.graph);
    out.merge_map = std::move(c.merge_map);
  }
  if (t.add_top) {
    auto v = add_virtual_top(out.graph, t.top_word,
                             t.top_file.empty() ? std::nullopt : std::optional<std::string>(t.top_file));
    out.graph = std::move(v.graph);
    out.top = v.top;
  }
  return out;
}

PinMap parse_pins(const std::vector<std::string>& specs) {
  PinMap pins;
  for (const auto& p : specs) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == p.size()) {
      throw Error(ErrorKind::Config, "--pin expects SRC=TGT, got '" + p + "'");
    }
    pins[p.substr(0, eq)] = p.substr(eq + 1);
  }
  return pins;
}

json pins_json(const PinMap& pins) {
  json j = json::object();
  for (const auto& [s, t] : pins) j[s] = t;
  return j;
}

std::string joined(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) {
    if (!s.empty()) s += ' ';
    const bool quote = a.find_first_of(" \t*'\"") != std::string::npos;
    s += quote ? "'" + a + "'" : a;
  }
  return s;
}

void write_manifest(const std::string& path, const json& j) {
  auto f = open_out(path);
  f << j.dump(2) << '\n';
}

struct AlignArgs {
  std::string source, target, dict, constraints, out;
  std::string dump_weights, manifest;
  std::string init = "uniform";
  std::uint64_t seed = 0;
  double epsilon = 1e-4;
  std::size_t max_iters = 500;
  double support_cap = kDefaultSupportCap;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::string> pins;
  TransformFlags transforms;
};

int cmd_align(const AlignArgs& a, const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  const auto started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();

  RelaxConfig cfg;
  cfg.pack = expand_pack(a.constraints);
  cfg.init = a.init == "random" ? InitMode::Random : InitMode::Uniform;
  cfg.seed = a.seed;
  cfg.epsilon = a.epsilon;
  cfg.max_iters = a.max_iters;
  cfg.support_cap = a.support_cap;
  cfg.threads = std::max(1u, a.threads);
  cfg.validate();

  require_file(a.source, "source taxonomy");
  require_file(a.target, "target taxonomy");
  require_file(a.dict, "dictionary");
  auto pins = parse_pins(a.pins);
  if (!a.transforms.top_target.empty() && !a.transforms.add_top) {
    throw Error(ErrorKind::Config, "--top-target requires --add-top");
  }

  auto src = apply_transforms(load_taxonomy_file(a.source), a.transforms);
  const auto tgt = load_taxonomy_file(a.target);
  const auto dict = load_dict_file(a.dict);
  if (src.top && !a.transforms.top_target.empty()) pins[*src.top] = a.transforms.top_target;

  const auto cand = generate_candidates(src.graph, tgt, dict, pins);
  const ClosureIndex src_closure(src.graph);
  const ClosureIndex tgt_closure(tgt);
  const auto result = run({src.graph, tgt, src_closure, tgt_closure, cand}, cfg);

  {
    auto f = open_out(a.out);
    write_mapping(f, result.mapping);
  }
  if (!a.dump_weights.empty()) {
    auto f = open_out(a.dump_weights);
    write_weights(f, src.graph, tgt, cand, result.weights);
  }

  json warnings = json::array();
  if (!result.trace.converged) {
    warnings.push_back("did not converge within " + std::to_string(cfg.max_iters) + " iterations (last max delta " +
                       std::to_string(result.trace.deltas.empty() ? 0.0 : result.trace.deltas.back()) + ")");
    err << "warning: " << warnings.back().get<std::string>() << '\n';
  }

  const auto manifest_path = a.manifest.empty() ? a.out + ".manifest.json" : a.manifest;
  json rules = json::array();
  for (const auto& r : cfg.pack) rules.push_back({{"code", r.code()}, {"strength", r.strength}});
  const auto stats = connection_stats(cand);
  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json m{
      {"engine", "taxalign"},
      {"version", kVersion},
      {"command", "align"},
      {"argv", argv},
      {"replay", joined(argv)},
      {"inputs", {{"source", a.source}, {"target", a.target}, {"dict", a.dict}}},
      {"transforms", a.transforms.to_json()},
      {"pins", pins_json(pins)},
      {"config",
       {{"constraints", a.constraints},
        {"rules", rules},
        {"init", a.init},
        {"seed", cfg.seed},
        {"epsilon", cfg.epsilon},
        {"max_iters", cfg.max_iters},
        {"support_cap", cfg.support_cap},
        {"threads", cfg.threads}}},
      {"outputs", {{"mapping", a.out}, {"weights", a.dump_weights.empty() ? json(nullptr) : json(a.dump_weights)},
                   {"manifest", manifest_path}}},
      {"started_at", started},
      {"wall_clock_seconds", elapsed},
      {"iterations", result.trace.iterations},
      {"converged", result.trace.converged},
      {"variables", stats.polysemous},
      {"labels", cand.label_count()},
      {"cost_estimate", cost_estimate(cand.label_count(), cfg.pack.size())},
      {"coverage", coverage(result.trace, cand).count},
      {"warnings", warnings},
  };
  write_manifest(manifest_path, m);

  out << "aligned " << stats.connected << " connected nodes (" << stats.polysemous << " polysemous) in "
      << result.trace.iterations << " iterations" << (result.trace.converged ? "" : " [not converged]") << '\n';
  return kExitOk;
}

struct TransformArgs {
  std::string input, out, merge_map, manifest;
  TransformFlags transforms;
};

int cmd_transform(const TransformArgs& a, const std::vector<std::string>& argv, std::ostream& out) {
  if (!a.transforms.add_top && !a.transforms.collapse) {
    throw Error(ErrorKind::Config, "transform needs --add-top and/or --collapse-senses");
  }
  const auto started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  require_file(a.input, "taxonomy");
  const auto before = load_taxonomy_file(a.input);
  const auto result = apply_transforms(before, a.transforms);
  {
    auto f = open_out(a.out);
    write_taxonomy(f, result.graph);
  }
  std::string merge_path;
  if (a.transforms.collapse) {
    merge_path = a.merge_map.empty() ? a.out + ".merge" : a.merge_map;
    auto f = open_out(merge_path);
    for (const auto& [from, to] : result.merge_map) f << from << '\t' << to << '\n';
  }
  const auto manifest_path = a.manifest.empty() ? a.out + ".manifest.json" : a.manifest;
  write_manifest(manifest_path,
                 json{{"engine", "taxalign"},
                      {"version", kVersion},
                      {"command", "transform"},
                      {"argv", argv},
                      {"replay", joined(argv)},
                      {"inputs", {{"taxonomy", a.input}}},
                      {"transforms", a.transforms.to_json()},
                      {"outputs", {{"taxonomy", a.out},
                                   {"merge_map", merge_path.empty() ? json(nullptr) : json(merge_path)},
                                   {"manifest", manifest_path}}},
                      {"started_at", started},
                      {"wall_clock_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
                      {"nodes_before", before.size()},
                      {"nodes_after", result.graph.size()},
                      {"top", result.top ? json(*result.top) : json(nullptr)}});
  out << before.size() << " -> " << result.graph.size() << " nodes, " << result.graph.roots().size() << " root(s)\n";
  return kExitOk;
}

struct EvalArgs {
  std::string mapping, gold, target, source, dict, tsv;
  std::string level = "file";
  std::vector<std::string> pins;
  TransformFlags transforms;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  require_file(a.mapping, "mapping");
  require_file(a.gold, "gold");
  const auto level = a.level == "node" ? EvalLevel::Node : EvalLevel::File;
  const auto mapping = read_mapping_file(a.mapping);
  auto gold = load_gold_file(a.gold);

  std::optional<TaxonomyGraph> tgt;
  if (!a.target.empty()) {
    require_file(a.target, "target taxonomy");
    tgt = load_taxonomy_file(a.target);
    resolve_gold_files(gold, *tgt);
  }
  auto report = precision(mapping, gold, level);

  if (!a.source.empty() || !a.dict.empty()) {
    if (a.source.empty() || a.dict.empty() || !tgt) {
      throw Error(ErrorKind::Config, "the random baseline needs --source, --target and --dict together");
    }
    require_file(a.source, "source taxonomy");
    require_file(a.dict, "dictionary");
    auto src = apply_transforms(load_taxonomy_file(a.source), a.transforms);
    auto pins = parse_pins(a.pins);
    if (src.top && !a.transforms.top_target.empty()) pins[*src.top] = a.transforms.top_target;
    const auto cand = generate_candidates(src.graph, *tgt, load_dict_file(a.dict), pins);
    report.random_baseline = baseline_random(cand, src.graph, *tgt, gold, level);
  }

  write_report(out, report);
  if (!a.tsv.empty()) {
    auto f = open_out(a.tsv);
    write_report_tsv(f, report);
  }
  return kExitOk;
}

struct StatsArgs {
  std::string source, target, dict;
  std::vector<std::string> pins;
  TransformFlags transforms;
};

int cmd_stats(const StatsArgs& a, std::ostream& out) {
  require_file(a.source, "source taxonomy");
  require_file(a.target, "target taxonomy");
  require_file(a.dict, "dictionary");
  auto src = apply_transforms(load_taxonomy_file(a.source), a.transforms);
  const auto tgt = load_taxonomy_file(a.target);
  auto pins = parse_pins(a.pins);
  if (src.top && !a.transforms.top_target.empty()) pins[*src.top] = a.transforms.top_target;
  const auto cand = generate_candidates(src.graph, tgt, load_dict_file(a.dict), pins);
  const auto st = connection_stats(cand);

  const auto pct = [](std::optional<double> p) {
    if (!p) return std::string("n/a");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", *p);
    return std::string(buf);
  };
  out << "nodes\t" << st.nodes << '\n';
  out << "with_connection\t" << st.connected << '\t' << pct(st.pct_with_connection) << '\n';
  out << "polysemous\t" << st.polysemous << '\t' << pct(st.pct_polysemous_of_connected) << '\n';
  if (st.mean_polysemy) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *st.mean_polysemy);
    out << "mean_polysemy\t" << buf << '\n';
  } else {
    out << "mean_polysemy\tn/a\n";
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Taxonomy alignment by relaxation labeling", "taxalign"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  AlignArgs align;
  auto* c_align = app.add_subcommand("align", "Map source nodes onto target nodes");
  c_align->add_option("--source", align.source, "Source taxonomy file")->required();
  c_align->add_option("--target", align.target, "Target taxonomy file")->required();
  c_align->add_option("--dict", align.dict, "Bilingual dictionary file")->required();
  c_align->add_option("--constraints", align.constraints, "Constraint pack, e.g. AA* or IIE")->required();
  c_align->add_option("--out", align.out, "Mapping output file")->required();
  c_align->add_option("--dump-weights", align.dump_weights, "Write final weights here");
  c_align->add_option("--manifest", align.manifest, "Manifest path (default: <out>.manifest.json)");
  c_align->add_option("--init", align.init, "Initial weights")
      ->check(CLI::IsMember({"uniform", "random"}))
      ->capture_default_str();
  c_align->add_option("--seed", align.seed, "Seed for --init random")->capture_default_str();
  c_align->add_option("--epsilon", align.epsilon, "Convergence threshold on max weight change")->capture_default_str();
  c_align->add_option("--max-iters", align.max_iters, "Iteration limit")->capture_default_str();
  c_align->add_option("--support-cap", align.support_cap, "Upper clamp on support")->capture_default_str();
  c_align->add_option("--threads", align.threads, "Worker threads for support evaluation")->capture_default_str();
  c_align->add_option("--pin", align.pins, "Fix a source node to one target, SRC=TGT (repeatable)");
  align.transforms.attach(*c_align);
  c_align->add_option("--top-target", align.transforms.top_target, "Target node the virtual top is pinned to");

  TransformArgs transform;
  auto* c_transform = app.add_subcommand("transform", "Apply +top / no-senses variants to a taxonomy");
  c_transform->add_option("--input", transform.input, "Taxonomy file")->required();
  c_transform->add_option("--out", transform.out, "Transformed taxonomy file")->required();
  c_transform->add_option("--merge-map", transform.merge_map, "Merge map path (default: <out>.merge)");
  c_transform->add_option("--manifest", transform.manifest, "Manifest path (default: <out>.manifest.json)");
  transform.transforms.attach(*c_transform);

  EvalArgs eval;
  auto* c_eval = app.add_subcommand("eval", "Score a mapping against a gold standard");
  c_eval->add_option("--mapping", eval.mapping, "Mapping file written by align")->required();
  c_eval->add_option("--gold", eval.gold, "Gold standard file")->required();
  c_eval->add_option("--target", eval.target, "Target taxonomy (resolves node gold to semantic files)");
  c_eval->add_option("--level", eval.level, "Scoring level")
      ->check(CLI::IsMember({"file", "node"}))
      ->capture_default_str();
  c_eval->add_option("--tsv", eval.tsv, "Also write a tab-separated report here");
  c_eval->add_option("--source", eval.source, "Source taxonomy (with --dict: random baseline)");
  c_eval->add_option("--dict", eval.dict, "Bilingual dictionary (with --source: random baseline)");
  c_eval->add_option("--pin", eval.pins, "Pins used by the aligned run, SRC=TGT");
  eval.transforms.attach(*c_eval);
  c_eval->add_option("--top-target", eval.transforms.top_target, "Target node the virtual top is pinned to");

  StatsArgs stats;
  auto* c_stats = app.add_subcommand("stats", "Bilingual connection and polysemy statistics");
  c_stats->add_option("--source", stats.source, "Source taxonomy file")->required();
  c_stats->add_option("--target", stats.target, "Target taxonomy file")->required();
  c_stats->add_option("--dict", stats.dict, "Bilingual dictionary file")->required();
  c_stats->add_option("--pin", stats.pins, "Fix a source node to one target, SRC=TGT");
  stats.transforms.attach(*c_stats);
  c_stats->add_option("--top-target", stats.transforms.top_target, "Target node the virtual top is pinned to");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const auto code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*c_align) return cmd_align(align, args, out, err);
    if (*c_transform) return cmd_transform(transform, args, out);
    if (*c_eval) return cmd_eval(eval, out);
    if (*c_stats) return cmd_stats(stats, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitConfig;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace taxalign::cli
