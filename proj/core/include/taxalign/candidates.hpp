#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "taxalign/taxonomy.hpp"

namespace taxalign {

/// Lookup key for both dictionary headwords and taxonomy words: trimmed,
/// ASCII-lowercased, internal whitespace runs replaced by a single '_'.
std::string normalize_word(std::string_view w);

class BilingualDict {
 public:
  /// Both words are normalized; repeated pairs are stored once.
  void add(std::string_view source_word, std::string_view target_word);

  /// Translations of `source_word` (normalized before lookup); empty when absent.
  const std::set<std::string>& translations(std::string_view source_word) const;

  /// Number of distinct (source, target) pairs.
  std::size_t size() const { return pairs_; }
  std::size_t headword_count() const { return entries_.size(); }

 private:
  std::map<std::string, std::set<std::string>, std::less<>> entries_;
  std::size_t pairs_ = 0;
};

/// Reads `src_word<TAB>tgt_word` lines; '#' comments and blank lines skipped.
BilingualDict load_dict(std::istream& in);
BilingualDict load_dict_file(const std::string& path);

enum class CandidateStatus { NoTranslation, Monosemous, Polysemous };

const char* to_string(CandidateStatus s);

/// Candidate target nodes per source node, stored flat: the labels of source
/// node s occupy [offset(s), offset(s) + count(s)) of the label space. Within
/// a node, labels are ordered by target id.
class CandidateSet {
 public:
  CandidateSet() = default;
  explicit CandidateSet(std::vector<std::vector<NodeIndex>> per_source);

  std::size_t source_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t label_count() const { return targets_.size(); }

  std::span<const NodeIndex> of(NodeIndex s) const {
    return {targets_.data() + offsets_[s], offsets_[s + 1] - offsets_[s]};
  }
  std::size_t count(NodeIndex s) const { return offsets_[s + 1] - offsets_[s]; }
  std::size_t offset(NodeIndex s) const { return offsets_[s]; }

  /// Position of `t` in the label list of `s`, if it is a candidate.
  std::optional<std::size_t> position(NodeIndex s, NodeIndex t) const;
  bool contains(NodeIndex s, NodeIndex t) const { return position(s, t).has_value(); }

  CandidateStatus status(NodeIndex s) const;

  /// Source node owning a flat label slot.
  NodeIndex source_of_label(std::size_t label) const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeIndex> targets_;
};

/// Source node id -> the single target id it must map to.
using PinMap = std::map<NodeId, NodeId>;

/// Candidates of a source node are every target node whose word or synonym
/// list contains a translation of the source word. Pinned nodes get exactly
/// their pin. Throws Error(Reference) if a pin names an unknown node.
CandidateSet generate_candidates(const TaxonomyGraph& source, const TaxonomyGraph& target,
                                 const BilingualDict& dict, const PinMap& pins = {});

struct ConnectionStats {
  std::size_t nodes = 0;
  std::size_t connected = 0;
  std::size_t polysemous = 0;
  std::size_t candidate_total = 0;  // over connected nodes
  // Undefined (nullopt) when the denominator is zero.
  std::optional<double> pct_with_connection;
  std::optional<double> pct_polysemous_of_connected;
  std::optional<double> mean_polysemy;
};

ConnectionStats connection_stats(const CandidateSet& c);
/// Same statistics from per-node candidate counts.
ConnectionStats connection_stats(std::span<const std::size_t> candidate_counts);

}  // namespace taxalign
