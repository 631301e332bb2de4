#include "taxalign/constraints.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <thread>

#include "taxalign/error.hpp"

namespace taxalign {

namespace {

char upper(char c) { return static_cast<char>(std::toupper(static_cast<unsigned char>(c))); }

Scope parse_scope(char c, std::string_view code) {
  switch (upper(c)) {
    case 'I': return Scope::Immediate;
    case 'A': return Scope::Any;
    default: throw Error(ErrorKind::Format, "bad scope letter in constraint '" + std::string(code) + "'");
  }
}

Direction parse_direction(char c, std::string_view code) {
  switch (upper(c)) {
    case 'E': return Direction::Hypernym;
    case 'O': return Direction::Hyponym;
    case 'B': return Direction::Both;
    default:
      throw Error(ErrorKind::Format, "bad direction letter in constraint '" + std::string(code) + "'");
  }
}

// Calls visit(s', position of t' in candidates(s')) for every one-sided
// supporter of `conn`, in a fixed order: s' ascending, then label order.
template <typename Visit>
void for_each_supporter(Scope src_scope, Scope tgt_scope, bool hypernym_side, Connection conn,
                        const AlignmentContext& ctx, Visit&& visit) {
  const auto& src = ctx.source;
  const auto& tgt = ctx.target;
  const auto context_nodes =
      hypernym_side ? (src_scope == Scope::Immediate ? src.immediate_hypernyms(conn.src) : src.ancestors(conn.src))
                    : (src_scope == Scope::Immediate ? src.immediate_hyponyms(conn.src) : src.descendants(conn.src));
  for (auto s : context_nodes) {
    const auto labels = ctx.candidates.of(s);
    for (std::size_t j = 0; j < labels.size(); ++j) {
      const auto t = labels[j];
      bool related = false;
      if (hypernym_side) {
        related = tgt_scope == Scope::Immediate ? tgt.is_immediate_hypernym(t, conn.tgt) : tgt.is_ancestor(t, conn.tgt);
      } else {
        related = tgt_scope == Scope::Immediate ? tgt.is_immediate_hyponym(t, conn.tgt) : tgt.is_descendant(t, conn.tgt);
      }
      if (related) visit(s, j);
    }
  }
}

}  // namespace

std::string ConstraintRule::code() const {
  std::string c(3, '?');
  c[0] = source == Scope::Immediate ? 'I' : 'A';
  c[1] = target == Scope::Immediate ? 'I' : 'A';
  c[2] = direction == Direction::Hypernym ? 'E' : direction == Direction::Hyponym ? 'O' : 'B';
  return c;
}

ConstraintRule parse_constraint(std::string_view code) {
  if (code.size() != 3) {
    throw Error(ErrorKind::Format, "constraint code must have 3 letters: '" + std::string(code) + "'");
  }
  return {parse_scope(code[0], code), parse_scope(code[1], code), parse_direction(code[2], code)};
}

ConstraintPack expand_pack(std::string_view pattern) {
  if (pattern.size() == 3 && pattern[2] == '*') {
    const auto s = parse_scope(pattern[0], pattern);
    const auto t = parse_scope(pattern[1], pattern);
    return {{s, t, Direction::Hypernym}, {s, t, Direction::Hyponym}, {s, t, Direction::Both}};
  }
  if (pattern.size() == 3) return {parse_constraint(pattern)};
  throw Error(ErrorKind::Format, "constraint pack must be XY* or a full code: '" + std::string(pattern) + "'");
}

std::string pack_name(const ConstraintPack& pack) {
  if (pack.size() == 3 && pack[0].source == pack[1].source && pack[1].source == pack[2].source &&
      pack[0].target == pack[1].target && pack[1].target == pack[2].target &&
      pack[0].direction == Direction::Hypernym && pack[1].direction == Direction::Hyponym &&
      pack[2].direction == Direction::Both) {
    return pack[0].code().substr(0, 2) + "*";
  }
  std::string name;
  for (const auto& r : pack) {
    if (!name.empty()) name += ',';
    name += r.code();
  }
  return name;
}

std::vector<Connection> supporters(const ConstraintRule& rule, Connection conn, const AlignmentContext& ctx) {
  std::vector<Connection> hyper;
  std::vector<Connection> hypo;
  const auto collect = [&](std::vector<Connection>& into) {
    return [&](NodeIndex s, std::size_t j) { into.push_back({s, ctx.candidates.of(s)[j]}); };
  };
  if (rule.direction != Direction::Hyponym) {
    for_each_supporter(rule.source, rule.target, true, conn, ctx, collect(hyper));
  }
  if (rule.direction != Direction::Hypernym) {
    for_each_supporter(rule.source, rule.target, false, conn, ctx, collect(hypo));
  }

  std::vector<Connection> out;
  if (rule.direction == Direction::Hypernym) {
    out = std::move(hyper);
  } else if (rule.direction == Direction::Hyponym) {
    out = std::move(hypo);
  } else if (!hyper.empty() && !hypo.empty()) {
    out = std::move(hyper);
    out.insert(out.end(), hypo.begin(), hypo.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double support(const ConstraintPack& pack, Connection conn, const WeightTable& w, const AlignmentContext& ctx,
               double cap) {
  double total = 0.0;
  for (const auto& rule : pack) {
    double hyper_sum = 0.0;
    double hypo_sum = 0.0;
    bool any_hyper = false;
    bool any_hypo = false;
    if (rule.direction != Direction::Hyponym) {
      for_each_supporter(rule.source, rule.target, true, conn, ctx, [&](NodeIndex s, std::size_t j) {
        hyper_sum += w.of(s)[j];
        any_hyper = true;
      });
    }
    if (rule.direction != Direction::Hypernym) {
      for_each_supporter(rule.source, rule.target, false, conn, ctx, [&](NodeIndex s, std::size_t j) {
        hypo_sum += w.of(s)[j];
        any_hypo = true;
      });
    }
    double term = 0.0;
    switch (rule.direction) {
      case Direction::Hypernym: term = hyper_sum; break;
      case Direction::Hyponym: term = hypo_sum; break;
      case Direction::Both: term = (any_hyper && any_hypo) ? std::min(hyper_sum, hypo_sum) : 0.0; break;
    }
    total += rule.strength * term;
  }
  return std::clamp(total, 0.0, cap);
}

CompiledSupport::CompiledSupport(const ConstraintPack& pack, const AlignmentContext& ctx, double cap)
    : cap_(cap) {
  const auto& cand = ctx.candidates;
  const auto n_labels = cand.label_count();
  if (n_labels > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorKind::Config, "too many candidate labels");
  }
  term_offsets_.reserve(n_labels + 1);
  term_offsets_.push_back(0);

  const auto append_side = [&](Scope s, Scope t, bool hypernym_side, Connection conn) {
    const auto begin = links_.size();
    for_each_supporter(s, t, hypernym_side, conn, ctx, [&](NodeIndex src, std::size_t j) {
      links_.push_back(static_cast<std::uint32_t>(cand.offset(src) + j));
    });
    if (links_.size() > std::numeric_limits<std::uint32_t>::max()) {
      throw Error(ErrorKind::Config, "supporter structure too large");
    }
    return std::pair{static_cast<std::uint32_t>(begin), static_cast<std::uint32_t>(links_.size())};
  };

  for (NodeIndex s = 0; s < cand.source_count(); ++s) {
    const auto labels = cand.of(s);
    for (auto t : labels) {
      const Connection conn{s, t};
      for (const auto& rule : pack) {
        Term term{rule.strength, 0, 0, 0, 0, rule.direction};
        if (rule.direction != Direction::Hyponym) {
          std::tie(term.hyper_begin, term.hyper_end) = append_side(rule.source, rule.target, true, conn);
        }
        if (rule.direction != Direction::Hypernym) {
          std::tie(term.hypo_begin, term.hypo_end) = append_side(rule.source, rule.target, false, conn);
        }
        const bool empty = (rule.direction == Direction::Hypernym && term.hyper_begin == term.hyper_end) ||
                           (rule.direction == Direction::Hyponym && term.hypo_begin == term.hypo_end) ||
                           (rule.direction == Direction::Both &&
                            (term.hyper_begin == term.hyper_end || term.hypo_begin == term.hypo_end));
        if (!empty) terms_.push_back(term);
      }
      term_offsets_.push_back(terms_.size());
    }
  }
}

double CompiledSupport::evaluate(std::size_t label, std::span<const double> w) const {
  double total = 0.0;
  for (auto k = term_offsets_[label]; k < term_offsets_[label + 1]; ++k) {
    const auto& term = terms_[k];
    double hyper_sum = 0.0;
    double hypo_sum = 0.0;
    for (auto i = term.hyper_begin; i < term.hyper_end; ++i) hyper_sum += w[links_[i]];
    for (auto i = term.hypo_begin; i < term.hypo_end; ++i) hypo_sum += w[links_[i]];
    double value = 0.0;
    switch (term.direction) {
      case Direction::Hypernym: value = hyper_sum; break;
      case Direction::Hyponym: value = hypo_sum; break;
      case Direction::Both: value = std::min(hyper_sum, hypo_sum); break;
    }
    total += term.strength * value;
  }
  return std::clamp(total, 0.0, cap_);
}

void CompiledSupport::evaluate_all(std::span<const double> w, std::span<double> out, unsigned threads) const {
  const auto n = label_count();
  const auto run = [&](std::size_t begin, std::size_t end) {
    for (auto i = begin; i < end; ++i) out[i] = evaluate(i, w);
  };
  if (threads <= 1 || n < 2048) {
    run(0, n);
    return;
  }
  const auto chunk = (n + threads - 1) / threads;
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (std::size_t begin = 0; begin < n; begin += chunk) {
    workers.emplace_back(run, begin, std::min(n, begin + chunk));
  }
}

}  // namespace taxalign
