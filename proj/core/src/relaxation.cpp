#include "taxalign/relaxation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "taxalign/error.hpp"
#include "text.hpp"

namespace taxalign {

WeightTable::WeightTable(const CandidateSet& c, std::vector<double> flat) : values_(std::move(flat)) {
  if (values_.size() != c.label_count()) throw Error(ErrorKind::Config, "weight table size mismatch");
  offsets_.reserve(c.source_count() + 1);
  for (NodeIndex s = 0; s < c.source_count(); ++s) offsets_.push_back(c.offset(s));
  offsets_.push_back(c.label_count());
}

void RelaxConfig::validate() const {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::Config, "epsilon must be > 0");
  if (max_iters == 0) throw Error(ErrorKind::Config, "max_iters must be >= 1");
  if (!(support_cap >= 0.0)) throw Error(ErrorKind::Config, "support cap must be >= 0");
  if (pack.empty()) throw Error(ErrorKind::Config, "empty constraint pack");
}

WeightTable init_weights(const CandidateSet& cand, const RelaxConfig& cfg) {
  std::vector<double> flat(cand.label_count(), 0.0);
  std::mt19937_64 rng(cfg.seed);
  for (NodeIndex s = 0; s < cand.source_count(); ++s) {
    const auto k = cand.count(s);
    if (k == 0) continue;
    auto* w = flat.data() + cand.offset(s);
    if (k == 1) {
      w[0] = 1.0;
      continue;
    }
    if (cfg.init == InitMode::Uniform) {
      std::fill(w, w + k, 1.0 / static_cast<double>(k));
      continue;
    }
    // 53 random bits mapped onto (0, 1]; never zero.
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      w[j] = static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
      sum += w[j];
    }
    for (std::size_t j = 0; j < k; ++j) w[j] /= sum;
  }
  return WeightTable(cand, std::move(flat));
}

StepResult apply_support(const WeightTable& w, const CandidateSet& cand, std::span<const double> supports) {
  StepResult r{w, 0.0, {}};
  for (NodeIndex s = 0; s < cand.source_count(); ++s) {
    const auto k = cand.count(s);
    if (k < 2) continue;
    const auto sup = supports.subspan(cand.offset(s), k);
    if (std::all_of(sup.begin(), sup.end(), [&](double x) { return x == sup[0]; })) continue;

    const auto before = w.of(s);
    auto after = r.weights.of(s);
    double z = 0.0;
    for (std::size_t j = 0; j < k; ++j) z += before[j] * (1.0 + sup[j]);
    bool changed = false;
    for (std::size_t j = 0; j < k; ++j) {
      after[j] = before[j] * (1.0 + sup[j]) / z;
      r.max_delta = std::max(r.max_delta, std::abs(after[j] - before[j]));
      changed = changed || after[j] != before[j];
    }
    if (changed) r.changed.push_back(s);
  }
  return r;
}

StepResult step(const WeightTable& w, const CandidateSet& cand, const CompiledSupport& model, unsigned threads) {
  std::vector<double> supports(cand.label_count());
  model.evaluate_all(w.flat(), supports, threads);
  return apply_support(w, cand, supports);
}

std::size_t RelaxTrace::touched_count() const {
  return static_cast<std::size_t>(std::count(touched.begin(), touched.end(), true));
}

const char* to_string(MapStatus s) {
  switch (s) {
    case MapStatus::NoTranslation: return "no-translation";
    case MapStatus::Monosemous: return "monosemous";
    case MapStatus::Resolved: return "resolved";
    case MapStatus::Tied: return "tied";
    case MapStatus::Untouched: return "untouched";
  }
  return "?";
}

std::optional<MapStatus> parse_map_status(std::string_view s) {
  for (auto st : {MapStatus::NoTranslation, MapStatus::Monosemous, MapStatus::Resolved, MapStatus::Tied,
                  MapStatus::Untouched}) {
    if (s == to_string(st)) return st;
  }
  return std::nullopt;
}

Mapping select_mapping(const TaxonomyGraph& source, const TaxonomyGraph& target, const CandidateSet& cand,
                       const WeightTable& w, const std::vector<bool>& touched) {
  Mapping m;
  m.reserve(source.size());
  for (NodeIndex s = 0; s < source.size(); ++s) {
    MappingEntry e;
    e.source = source.node(s).id;
    e.candidates = cand.count(s);
    if (e.candidates == 0) {
      e.status = MapStatus::NoTranslation;
      m.push_back(std::move(e));
      continue;
    }
    const auto labels = cand.of(s);
    const auto weights = w.of(s);
    const auto top = *std::max_element(weights.begin(), weights.end());
    // Labels are in target-id order, so the first near-maximal one is the
    // lexicographic tie-break.
    std::size_t pick = 0;
    std::size_t near_top = 0;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (top - weights[j] < kTieTolerance) {
        if (near_top == 0) pick = j;
        ++near_top;
      }
    }
    const auto& chosen = target.node(labels[pick]);
    e.target = chosen.id;
    e.target_file = chosen.semfile;
    e.weight = weights[pick];
    if (e.candidates == 1) {
      e.status = MapStatus::Monosemous;
    } else if (s >= touched.size() || !touched[s]) {
      e.status = MapStatus::Untouched;
    } else {
      e.status = near_top > 1 ? MapStatus::Tied : MapStatus::Resolved;
    }
    m.push_back(std::move(e));
  }
  return m;
}

RelaxResult run(const AlignmentInput& in, const RelaxConfig& cfg, const IterationObserver& observer) {
  cfg.validate();
  const AlignmentContext ctx{in.source_closure, in.target_closure, in.candidates};
  const CompiledSupport model(cfg.pack, ctx, cfg.support_cap);

  RelaxResult r;
  r.weights = init_weights(in.candidates, cfg);
  r.trace.touched.assign(in.candidates.source_count(), false);
  while (r.trace.iterations < cfg.max_iters) {
    auto next = step(r.weights, in.candidates, model, cfg.threads);
    ++r.trace.iterations;
    r.trace.deltas.push_back(next.max_delta);
    for (auto s : next.changed) r.trace.touched[s] = true;
    r.weights = std::move(next.weights);
    if (observer) observer(r.trace.iterations, r.weights, next.max_delta);
    if (next.max_delta < cfg.epsilon) {
      r.trace.converged = true;
      break;
    }
  }
  r.mapping = select_mapping(in.source, in.target, in.candidates, r.weights, r.trace.touched);
  return r;
}

std::uint64_t cost_estimate(std::uint64_t n_vars, std::uint64_t n_constraint_applications) {
  return n_vars * n_constraint_applications;
}

namespace {

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

}  // namespace

void write_weights(std::ostream& out, const TaxonomyGraph& source, const TaxonomyGraph& target,
                   const CandidateSet& cand, const WeightTable& w) {
  struct Row {
    const std::string* src;
    const std::string* tgt;
    double weight;
  };
  std::vector<Row> rows;
  rows.reserve(cand.label_count());
  for (NodeIndex s = 0; s < cand.source_count(); ++s) {
    const auto labels = cand.of(s);
    const auto weights = w.of(s);
    for (std::size_t j = 0; j < labels.size(); ++j) {
      rows.push_back({&source.node(s).id, &target.node(labels[j]).id, weights[j]});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(*a.src, *a.tgt) < std::tie(*b.src, *b.tgt);
  });
  for (const auto& r : rows) out << *r.src << '\t' << *r.tgt << '\t' << fixed6(r.weight) << '\n';
}

void write_mapping(std::ostream& out, const Mapping& m) {
  std::vector<const MappingEntry*> rows;
  rows.reserve(m.size());
  for (const auto& e : m) rows.push_back(&e);
  std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->source < b->source; });
  out << "# source\ttarget\ttarget_file\tweight\tstatus\tcandidates\n";
  for (const auto* e : rows) {
    out << e->source << '\t' << e->target.value_or("-") << '\t' << e->target_file.value_or("-") << '\t'
        << fixed6(e->weight) << '\t' << to_string(e->status) << '\t' << e->candidates << '\n';
  }
}

Mapping read_mapping(std::istream& in) {
  Mapping m;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::chomp(raw);
    if (detail::skippable(line)) continue;
    const auto f = detail::split(line, '\t');
    if (f.size() != 6) throw ParseError(line_no, "mapping record needs 6 fields");
    MappingEntry e;
    e.source = std::string(f[0]);
    if (e.source.empty()) throw ParseError(line_no, "empty source id");
    if (f[1] != "-") e.target = std::string(f[1]);
    if (f[2] != "-") e.target_file = std::string(f[2]);
    const auto status = parse_map_status(f[4]);
    if (!status) throw ParseError(line_no, "unknown status '" + std::string(f[4]) + "'");
    e.status = *status;
    {
      const auto [ptr, ec] = std::from_chars(f[5].data(), f[5].data() + f[5].size(), e.candidates);
      if (ec != std::errc() || ptr != f[5].data() + f[5].size()) throw ParseError(line_no, "bad candidate count");
    }
    try {
      std::size_t used = 0;
      e.weight = std::stod(std::string(f[3]), &used);
      if (used != f[3].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad weight '" + std::string(f[3]) + "'");
    }
    if ((e.status == MapStatus::NoTranslation) != (e.candidates == 0) ||
        (e.status != MapStatus::NoTranslation && !e.target)) {
      throw ParseError(line_no, "status inconsistent with candidates");
    }
    m.push_back(std::move(e));
  }
  return m;
}

Mapping read_mapping_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open mapping file '" + path + "'");
  return read_mapping(in);
}

}  // namespace taxalign
