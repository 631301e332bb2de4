#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace taxalign {

using NodeId = std::string;

/// Dense position of a node inside one TaxonomyGraph.
using NodeIndex = std::uint32_t;

struct TaxNode {
  NodeId id;
  std::string word;
  std::optional<int> sense;
  std::optional<std::string> semfile;
  std::vector<std::string> synonyms;
};

/// Directed acyclic hypernym graph. Edges run hypernym -> hyponym.
///
/// Nodes keep the order in which they were added; adjacency lists keep the
/// order in which edges were added. Instances are immutable once built and
/// validated.
class TaxonomyGraph {
 public:
  /// Throws Error(Duplicate) on a repeated id, Error(Parse) on an empty id or
  /// word or a non-positive sense.
  NodeIndex add_node(TaxNode node);

  /// Duplicate edges are ignored. Throws Error(Reference) on unknown ids.
  void add_edge(const NodeId& hypernym, const NodeId& hyponym);
  void add_edge(NodeIndex hypernym, NodeIndex hyponym);

  /// Throws CycleError naming one node that lies on a cycle.
  void check_acyclic() const;

  std::size_t size() const { return nodes_.size(); }
  std::size_t edge_count() const;

  const TaxNode& node(NodeIndex i) const { return nodes_[i]; }
  std::span<const TaxNode> nodes() const { return nodes_; }
  std::optional<NodeIndex> find(std::string_view id) const;
  /// Like find(), but throws Error(Reference) for unknown ids.
  NodeIndex index_of(std::string_view id) const;

  std::span<const NodeIndex> hypernyms(NodeIndex i) const { return up_[i]; }
  std::span<const NodeIndex> hyponyms(NodeIndex i) const { return down_[i]; }

  std::vector<NodeIndex> roots() const;

  /// Kahn order: every hypernym precedes its hyponyms.
  std::vector<NodeIndex> topological_order() const;

 private:
  std::vector<TaxNode> nodes_;
  std::vector<std::vector<NodeIndex>> up_;
  std::vector<std::vector<NodeIndex>> down_;
  std::unordered_map<std::string, NodeIndex> by_id_;
};

/// Transitive hyper/hyponym closure of a graph. Every set is sorted by index.
class ClosureIndex {
 public:
  explicit ClosureIndex(const TaxonomyGraph& g);

  std::span<const NodeIndex> ancestors(NodeIndex i) const { return anc_[i]; }
  std::span<const NodeIndex> descendants(NodeIndex i) const { return desc_[i]; }
  std::span<const NodeIndex> immediate_hypernyms(NodeIndex i) const { return imm_up_[i]; }
  std::span<const NodeIndex> immediate_hyponyms(NodeIndex i) const { return imm_down_[i]; }

  bool is_ancestor(NodeIndex ancestor, NodeIndex of) const;
  bool is_descendant(NodeIndex descendant, NodeIndex of) const;
  bool is_immediate_hypernym(NodeIndex hypernym, NodeIndex of) const;
  bool is_immediate_hyponym(NodeIndex hyponym, NodeIndex of) const;

  std::size_t size() const { return anc_.size(); }

 private:
  std::vector<std::vector<NodeIndex>> anc_;
  std::vector<std::vector<NodeIndex>> desc_;
  std::vector<std::vector<NodeIndex>> imm_up_;
  std::vector<std::vector<NodeIndex>> imm_down_;
};

inline ClosureIndex build_closure(const TaxonomyGraph& g) { return ClosureIndex(g); }

/// Reads the tab-separated taxonomy format:
///
///   N <id> <word> [sense=<k>] [file=<tag>] [syn=<w1,w2,...>]
///   E <hypernym_id> <hyponym_id>
///
/// Lines starting with '#' and blank lines are skipped. Nodes must be
/// declared before any edge that references them.
TaxonomyGraph load_taxonomy(std::istream& in);
TaxonomyGraph load_taxonomy_file(const std::string& path);

/// Writes `g` in the format accepted by load_taxonomy: all N records in node
/// order, then all E records grouped by hypernym.
void write_taxonomy(std::ostream& out, const TaxonomyGraph& g);

struct VirtualTop {
  TaxonomyGraph graph;
  NodeId top;
};

/// Adds a fresh node above every current root, so the result has exactly one
/// root. The node is named "__TOP__", suffixed with a counter on collision.
VirtualTop add_virtual_top(const TaxonomyGraph& g, const std::string& top_word,
                           std::optional<std::string> semfile = std::nullopt);

struct CollapseResult {
  TaxonomyGraph graph;
  /// Every original id mapped to the id that survives it.
  std::map<NodeId, NodeId> merge_map;
};

/// Merges nodes that share a word and an identical immediate-hypernym set,
/// repeated until nothing more merges. The survivor keeps the smallest id of
/// its group, drops the sense index and takes the union of hyponyms and
/// synonyms.
CollapseResult collapse_sense_siblings(const TaxonomyGraph& g);

}  // namespace taxalign
