#include "taxalign/evaluation.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>

#include "taxalign/error.hpp"
#include "text.hpp"

namespace taxalign {

GoldStandard load_gold(std::istream& in) {
  GoldStandard gold;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::chomp(raw);
    if (detail::skippable(line)) continue;
    const auto f = detail::split(line, '\t');
    if (f.size() < 2 || f.size() > 3) throw ParseError(line_no, "expected src_id<TAB>gold[<TAB>quality]");
    if (f[0].empty()) throw ParseError(line_no, "empty source id");
    GoldEntry e;
    if (f[1].starts_with("node:") && f[1].size() > 5) {
      e.node = std::string(f[1].substr(5));
    } else if (f[1].starts_with("file:") && f[1].size() > 5) {
      e.file = std::string(f[1].substr(5));
    } else {
      throw ParseError(line_no, "gold must be node:<id> or file:<tag>");
    }
    if (f.size() == 3) {
      if (f[2] == "ok") {
        e.quality = Quality::TaxonomyOkFileOk;
      } else if (f[2] == "oknf") {
        e.quality = Quality::TaxonomyOkFileNok;
      } else if (f[2] == "nok") {
        e.quality = Quality::TaxonomyNok;
      } else {
        throw ParseError(line_no, "quality must be ok, oknf or nok");
      }
    }
    if (!gold.emplace(std::string(f[0]), std::move(e)).second) {
      throw Error(ErrorKind::Duplicate,
                  "line " + std::to_string(line_no) + ": duplicate gold entry '" + std::string(f[0]) + "'");
    }
  }
  return gold;
}

GoldStandard load_gold_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open gold file '" + path + "'");
  return load_gold(in);
}

void resolve_gold_files(GoldStandard& gold, const TaxonomyGraph& target) {
  for (auto& [src, e] : gold) {
    if (!e.node || e.file) continue;
    e.file = target.node(target.index_of(*e.node)).semfile;
  }
}

const char* to_string(EvalLevel l) { return l == EvalLevel::File ? "file" : "node"; }

std::optional<double> Tally::pct() const {
  if (total == 0) return std::nullopt;
  return 100.0 * static_cast<double>(right) / static_cast<double>(total);
}

namespace {

std::optional<double> percent(std::size_t part, std::size_t whole) {
  if (whole == 0) return std::nullopt;
  return 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

bool connected(const MappingEntry& e) { return e.candidates > 0 && e.target.has_value(); }

}  // namespace

Coverage coverage(const RelaxTrace& trace, const CandidateSet& cand) {
  Coverage c;
  for (NodeIndex s = 0; s < cand.source_count(); ++s) {
    if (cand.count(s) == 0) continue;
    ++c.connected;
    if (s < trace.touched.size() && trace.touched[s]) ++c.count;
  }
  c.pct = percent(c.count, c.connected);
  return c;
}

Coverage coverage(const Mapping& m) {
  Coverage c;
  for (const auto& e : m) {
    if (!connected(e)) continue;
    ++c.connected;
    if (e.status == MapStatus::Resolved || e.status == MapStatus::Tied) ++c.count;
  }
  c.pct = percent(c.count, c.connected);
  return c;
}

EvalReport precision(const Mapping& m, const GoldStandard& gold, EvalLevel level) {
  EvalReport r;
  r.level = level;
  r.coverage = coverage(m);
  std::vector<std::size_t> counts;
  counts.reserve(m.size());
  for (const auto& e : m) counts.push_back(e.candidates);
  r.polysemy = connection_stats(counts);

  for (const auto& e : m) {
    if (!connected(e)) continue;
    const auto it = gold.find(e.source);
    const bool usable = it != gold.end() && (level == EvalLevel::File || it->second.node.has_value());
    if (!usable) {
      ++r.unevaluated;
      continue;
    }
    const auto& g = it->second;
    auto& slice = e.candidates >= 2 ? r.polysemous : r.monosemous;
    if (g.quality == Quality::TaxonomyNok) {
      ++slice.excluded;
      ++r.all.excluded;
      continue;
    }
    bool right = false;
    if (level == EvalLevel::Node) {
      right = e.target == g.node;
    } else {
      if (!g.file) {
        throw Error(ErrorKind::Config, "gold entry for '" + e.source +
                                           "' has no semantic file; resolve node gold against the target taxonomy");
      }
      right = e.target_file == g.file;
    }
    if (e.status == MapStatus::Tied) ++r.ties;
    const Tally one{right ? 1u : 0u, 1};
    auto& bucket = g.quality == Quality::TaxonomyOkFileOk ? slice.file_ok : slice.file_nok;
    auto& total_bucket = g.quality == Quality::TaxonomyOkFileOk ? r.all.file_ok : r.all.file_nok;
    bucket += one;
    total_bucket += one;
  }
  return r;
}

std::optional<double> baseline_random(const CandidateSet& cand, const TaxonomyGraph& source,
                                      const TaxonomyGraph& target, const GoldStandard& gold, EvalLevel level) {
  double sum = 0.0;
  std::size_t vars = 0;
  for (NodeIndex s = 0; s < cand.source_count(); ++s) {
    if (cand.count(s) < 2) continue;
    const auto it = gold.find(source.node(s).id);
    if (it == gold.end() || it->second.quality == Quality::TaxonomyNok) continue;
    const auto& g = it->second;
    if (level == EvalLevel::Node && !g.node) continue;
    if (level == EvalLevel::File && !g.file) continue;
    std::size_t good = 0;
    for (auto t : cand.of(s)) {
      const auto& n = target.node(t);
      good += level == EvalLevel::Node ? (n.id == *g.node) : (n.semfile == g.file);
    }
    sum += static_cast<double>(good) / static_cast<double>(cand.count(s));
    ++vars;
  }
  if (vars == 0) return std::nullopt;
  return sum / static_cast<double>(vars);
}

namespace {

std::string fmt_pct(std::optional<double> p) {
  if (!p) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", *p);
  return buf;
}

std::string cell(const Tally& t) { return std::to_string(t.right) + " (" + fmt_pct(t.pct()) + ")"; }

std::string fmt_num(std::optional<double> x) {
  if (!x) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *x);
  return buf;
}

void precision_table(std::ostream& out, const char* title, const PrecisionSlice& s, bool show_excluded) {
  out << title << '\n';
  out << "  " << std::left << std::setw(18) << "T_OK,F_OK" << std::setw(18) << "T_OK,F_NOK" << std::setw(18)
      << "total T_OK";
  if (show_excluded) out << "T_NOK";
  out << '\n';
  out << "  " << std::setw(18) << cell(s.file_ok) << std::setw(18) << cell(s.file_nok) << std::setw(18)
      << cell(s.taxonomy_ok());
  if (show_excluded) out << s.excluded;
  out << '\n';
  out << std::right;
}

}  // namespace

void write_report(std::ostream& out, const EvalReport& r) {
  out << "Bilingual connection\n";
  out << "  nodes                      " << r.polysemy.nodes << '\n';
  out << "  with connection            " << r.polysemy.connected << " (" << fmt_pct(r.polysemy.pct_with_connection)
      << ")\n";
  out << "  polysemous of connected    " << r.polysemy.polysemous << " ("
      << fmt_pct(r.polysemy.pct_polysemous_of_connected) << ")\n";
  out << "  mean polysemy              " << fmt_num(r.polysemy.mean_polysemy) << "\n\n";

  out << "Coverage\n";
  out << "  touched                    " << r.coverage.count << " (" << fmt_pct(r.coverage.pct) << ")\n\n";

  const auto level = std::string(" (") + to_string(r.level) + " level)";
  precision_table(out, ("Precision over polysemous words" + level).c_str(), r.polysemous, true);
  out << '\n';
  precision_table(out, ("Precision over all words" + level).c_str(), r.all, false);
  out << '\n';
  out << "  ties " << r.ties << ", unevaluated " << r.unevaluated << ", T_NOK excluded " << r.all.excluded << '\n';
  if (r.random_baseline) out << "  random baseline " << fmt_pct(100.0 * *r.random_baseline) << '\n';
}

void write_report_tsv(std::ostream& out, const EvalReport& r) {
  const auto opt = [](std::optional<double> x) {
    if (!x) return std::string("NA");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", *x);
    return std::string(buf);
  };
  out << "level\t" << to_string(r.level) << '\n';
  out << "nodes\t" << r.polysemy.nodes << '\n';
  out << "connected\t" << r.polysemy.connected << '\n';
  out << "connected_pct\t" << opt(r.polysemy.pct_with_connection) << '\n';
  out << "polysemous\t" << r.polysemy.polysemous << '\n';
  out << "polysemous_pct\t" << opt(r.polysemy.pct_polysemous_of_connected) << '\n';
  out << "mean_polysemy\t" << opt(r.polysemy.mean_polysemy) << '\n';
  out << "coverage\t" << r.coverage.count << '\n';
  out << "coverage_pct\t" << opt(r.coverage.pct) << '\n';
  const auto slice = [&](const char* name, const PrecisionSlice& s) {
    const auto row = [&](const char* col, const Tally& t) {
      out << name << '.' << col << ".right\t" << t.right << '\n';
      out << name << '.' << col << ".total\t" << t.total << '\n';
      out << name << '.' << col << ".pct\t" << opt(t.pct()) << '\n';
    };
    row("tok_fok", s.file_ok);
    row("tok_fnok", s.file_nok);
    row("tok", s.taxonomy_ok());
    out << name << ".tnok\t" << s.excluded << '\n';
  };
  slice("polysemous", r.polysemous);
  slice("monosemous", r.monosemous);
  slice("all", r.all);
  out << "ties\t" << r.ties << '\n';
  out << "unevaluated\t" << r.unevaluated << '\n';
  out << "random_baseline\t" << opt(r.random_baseline) << '\n';
}

}  // namespace taxalign
