#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "taxalign/candidates.hpp"
#include "taxalign/taxonomy.hpp"
#include "taxalign/weights.hpp"

namespace taxalign {

/// How far a hyper/hyponym relation may reach on one side.
enum class Scope { Immediate, Any };

/// Which related connection a rule looks for.
enum class Direction { Hypernym, Hyponym, Both };

/// One structural constraint, written as three letters XYZ:
///   X  source-side scope   I (immediate) | A (any ancestor/descendant)
///   Y  target-side scope   I | A
///   Z  direction           E (hypernym) | O (hyponym) | B (both at once)
struct ConstraintRule {
  Scope source = Scope::Immediate;
  Scope target = Scope::Immediate;
  Direction direction = Direction::Hypernym;
  double strength = 1.0;

  std::string code() const;

  friend bool operator==(const ConstraintRule&, const ConstraintRule&) = default;
};

/// Case-insensitive. Throws Error(Format) on anything outside {I,A}{I,A}{E,O,B}.
ConstraintRule parse_constraint(std::string_view code);

using ConstraintPack = std::vector<ConstraintRule>;

/// "XY*" expands to {XYE, XYO, XYB}; a full three-letter code yields itself.
ConstraintPack expand_pack(std::string_view pattern);

std::string pack_name(const ConstraintPack& pack);

/// A candidate link from a source node to one of its target labels.
struct Connection {
  NodeIndex src;
  NodeIndex tgt;

  friend auto operator<=>(const Connection&, const Connection&) = default;
};

/// Everything the constraints read besides the weights.
struct AlignmentContext {
  const ClosureIndex& source;
  const ClosureIndex& target;
  const CandidateSet& candidates;
};

inline constexpr double kDefaultSupportCap = 10.0;

/// Connections (s', t') where s' relates to conn.src and t' relates to
/// conn.tgt the way `rule` demands, and t' is a candidate of s'. For
/// Direction::Both this is the union of the hypernym and hyponym supporters,
/// or empty unless both are non-empty. Sorted by (src, tgt).
std::vector<Connection> supporters(const ConstraintRule& rule, Connection conn,
                                   const AlignmentContext& ctx);

/// Sum over the pack of strength * (summed weight of supporters). A Both rule
/// contributes min(hypernym sum, hyponym sum), and nothing unless both
/// supporter sets are non-empty. Clamped to [0, cap].
double support(const ConstraintPack& pack, Connection conn, const WeightTable& w,
               const AlignmentContext& ctx, double cap = kDefaultSupportCap);

/// The supporter structure of every label slot, resolved once so that each
/// relaxation iteration only has to sum weights. Produces exactly what
/// support() does.
class CompiledSupport {
 public:
  CompiledSupport(const ConstraintPack& pack, const AlignmentContext& ctx,
                  double cap = kDefaultSupportCap);

  double evaluate(std::size_t label, std::span<const double> flat_weights) const;

  /// Fills `out[label]` for every label slot. Work is split across up to
  /// `threads` workers; the result does not depend on the split.
  void evaluate_all(std::span<const double> flat_weights, std::span<double> out,
                    unsigned threads = 1) const;

  std::size_t label_count() const { return term_offsets_.size() - 1; }
  /// Total supporter references across all slots and rules.
  std::size_t link_count() const { return links_.size(); }

 private:
  struct Term {
    double strength;
    std::uint32_t hyper_begin, hyper_end;  // into links_
    std::uint32_t hypo_begin, hypo_end;
    Direction direction;
  };

  double cap_;
  std::vector<std::size_t> term_offsets_;
  std::vector<Term> terms_;
  std::vector<std::uint32_t> links_;  // flat label slots
};

}  // namespace taxalign
