#include "taxalign/taxonomy.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <set>

#include "taxalign/error.hpp"
#include "text.hpp"

namespace taxalign {

namespace {

bool contains_sorted(std::span<const NodeIndex> set, NodeIndex x) {
  return std::binary_search(set.begin(), set.end(), x);
}

std::vector<NodeIndex> sorted_copy(std::span<const NodeIndex> s) {
  std::vector<NodeIndex> v(s.begin(), s.end());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

NodeIndex TaxonomyGraph::add_node(TaxNode node) {
  if (node.id.empty()) throw Error(ErrorKind::Parse, "empty node id");
  if (node.word.empty()) throw Error(ErrorKind::Parse, "node '" + node.id + "' has an empty word");
  if (node.sense && *node.sense < 1) {
    throw Error(ErrorKind::Parse, "node '" + node.id + "' has sense < 1");
  }
  if (by_id_.count(node.id)) throw Error(ErrorKind::Duplicate, "duplicate node id '" + node.id + "'");
  const auto idx = static_cast<NodeIndex>(nodes_.size());
  by_id_.emplace(node.id, idx);
  nodes_.push_back(std::move(node));
  up_.emplace_back();
  down_.emplace_back();
  return idx;
}

void TaxonomyGraph::add_edge(const NodeId& hypernym, const NodeId& hyponym) {
  add_edge(index_of(hypernym), index_of(hyponym));
}

void TaxonomyGraph::add_edge(NodeIndex hypernym, NodeIndex hyponym) {
  if (hypernym >= nodes_.size() || hyponym >= nodes_.size()) {
    throw Error(ErrorKind::Reference, "edge endpoint out of range");
  }
  auto& ups = up_[hyponym];
  if (std::find(ups.begin(), ups.end(), hypernym) != ups.end()) return;
  ups.push_back(hypernym);
  down_[hypernym].push_back(hyponym);
}

std::size_t TaxonomyGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& d : down_) n += d.size();
  return n;
}

std::optional<NodeIndex> TaxonomyGraph::find(std::string_view id) const {
  const auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

NodeIndex TaxonomyGraph::index_of(std::string_view id) const {
  if (auto i = find(id)) return *i;
  throw Error(ErrorKind::Reference, "unknown node id '" + std::string(id) + "'");
}

std::vector<NodeIndex> TaxonomyGraph::roots() const {
  std::vector<NodeIndex> out;
  for (NodeIndex i = 0; i < nodes_.size(); ++i) {
    if (up_[i].empty()) out.push_back(i);
  }
  return out;
}

std::vector<NodeIndex> TaxonomyGraph::topological_order() const {
  std::vector<std::size_t> pending(nodes_.size());
  std::deque<NodeIndex> ready;
  for (NodeIndex i = 0; i < nodes_.size(); ++i) {
    pending[i] = up_[i].size();
    if (pending[i] == 0) ready.push_back(i);
  }
  std::vector<NodeIndex> order;
  order.reserve(nodes_.size());
  while (!ready.empty()) {
    const auto n = ready.front();
    ready.pop_front();
    order.push_back(n);
    for (auto c : down_[n]) {
      if (--pending[c] == 0) ready.push_back(c);
    }
  }
  if (order.size() == nodes_.size()) return order;

  // Every node left over still has an unprocessed hypernym. Walking upward
  // through those for n steps must land on a cycle.
  NodeIndex walk = 0;
  while (pending[walk] == 0) ++walk;
  for (std::size_t step = 0; step < nodes_.size(); ++step) {
    for (auto p : up_[walk]) {
      if (pending[p] != 0) {
        walk = p;
        break;
      }
    }
  }
  throw CycleError(nodes_[walk].id);
}

void TaxonomyGraph::check_acyclic() const { (void)topological_order(); }

ClosureIndex::ClosureIndex(const TaxonomyGraph& g)
    : anc_(g.size()), desc_(g.size()), imm_up_(g.size()), imm_down_(g.size()) {
  const auto order = g.topological_order();
  for (NodeIndex i = 0; i < g.size(); ++i) {
    imm_up_[i] = sorted_copy(g.hypernyms(i));
    imm_down_[i] = sorted_copy(g.hyponyms(i));
  }
  for (auto n : order) {
    std::vector<NodeIndex> acc;
    for (auto p : g.hypernyms(n)) {
      acc.push_back(p);
      acc.insert(acc.end(), anc_[p].begin(), anc_[p].end());
    }
    std::sort(acc.begin(), acc.end());
    acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
    anc_[n] = std::move(acc);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    std::vector<NodeIndex> acc;
    for (auto c : g.hyponyms(*it)) {
      acc.push_back(c);
      acc.insert(acc.end(), desc_[c].begin(), desc_[c].end());
    }
    std::sort(acc.begin(), acc.end());
    acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
    desc_[*it] = std::move(acc);
  }
}

bool ClosureIndex::is_ancestor(NodeIndex ancestor, NodeIndex of) const {
  return contains_sorted(anc_[of], ancestor);
}
bool ClosureIndex::is_descendant(NodeIndex descendant, NodeIndex of) const {
  return contains_sorted(desc_[of], descendant);
}
bool ClosureIndex::is_immediate_hypernym(NodeIndex hypernym, NodeIndex of) const {
  return contains_sorted(imm_up_[of], hypernym);
}
bool ClosureIndex::is_immediate_hyponym(NodeIndex hyponym, NodeIndex of) const {
  return contains_sorted(imm_down_[of], hyponym);
}

namespace {

TaxNode parse_node(std::size_t line_no, const std::vector<std::string_view>& f) {
  if (f.size() < 3) throw ParseError(line_no, "node record needs an id and a word");
  TaxNode node;
  node.id = std::string(f[1]);
  node.word = std::string(f[2]);
  if (node.id.empty()) throw ParseError(line_no, "empty node id");
  if (node.word.empty()) throw ParseError(line_no, "empty word");
  for (std::size_t k = 3; k < f.size(); ++k) {
    const auto field = f[k];
    const auto eq = field.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(line_no, "expected key=value, got '" + std::string(field) + "'");
    }
    const auto key = field.substr(0, eq);
    const auto value = field.substr(eq + 1);
    if (key == "sense") {
      int sense = 0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), sense);
      if (ec != std::errc() || ptr != value.data() + value.size() || sense < 1) {
        throw ParseError(line_no, "sense must be a positive integer");
      }
      node.sense = sense;
    } else if (key == "file") {
      if (value.empty()) throw ParseError(line_no, "empty file tag");
      node.semfile = std::string(value);
    } else if (key == "syn") {
      for (auto w : detail::split(value, ',')) {
        w = detail::trim(w);
        if (!w.empty()) node.synonyms.emplace_back(w);
      }
    } else {
      throw ParseError(line_no, "unknown node attribute '" + std::string(key) + "'");
    }
  }
  return node;
}

}  // namespace

TaxonomyGraph load_taxonomy(std::istream& in) {
  TaxonomyGraph g;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::chomp(raw);
    if (detail::skippable(line)) continue;
    const auto f = detail::split(line, '\t');
    if (f[0] == "N") {
      auto node = parse_node(line_no, f);
      if (g.find(node.id)) {
        throw Error(ErrorKind::Duplicate,
                    "line " + std::to_string(line_no) + ": duplicate node id '" + node.id + "'");
      }
      g.add_node(std::move(node));
    } else if (f[0] == "E") {
      if (f.size() != 3) throw ParseError(line_no, "edge record needs exactly two ids");
      const auto hyper = g.find(f[1]);
      const auto hypo = g.find(f[2]);
      if (!hyper || !hypo) {
        const auto missing = hyper ? f[2] : f[1];
        throw Error(ErrorKind::Reference, "line " + std::to_string(line_no) +
                                              ": edge references undeclared node '" +
                                              std::string(missing) + "'");
      }
      g.add_edge(*hyper, *hypo);
    } else {
      throw ParseError(line_no, "unknown record type '" + std::string(f[0]) + "'");
    }
  }
  g.check_acyclic();
  return g;
}

TaxonomyGraph load_taxonomy_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open taxonomy file '" + path + "'");
  return load_taxonomy(in);
}

void write_taxonomy(std::ostream& out, const TaxonomyGraph& g) {
  for (const auto& n : g.nodes()) {
    out << "N\t" << n.id << '\t' << n.word;
    if (n.sense) out << "\tsense=" << *n.sense;
    if (n.semfile) out << "\tfile=" << *n.semfile;
    if (!n.synonyms.empty()) {
      out << "\tsyn=";
      for (std::size_t k = 0; k < n.synonyms.size(); ++k) {
        if (k) out << ',';
        out << n.synonyms[k];
      }
    }
    out << '\n';
  }
  for (NodeIndex i = 0; i < g.size(); ++i) {
    for (auto c : g.hyponyms(i)) out << "E\t" << g.node(i).id << '\t' << g.node(c).id << '\n';
  }
}

VirtualTop add_virtual_top(const TaxonomyGraph& g, const std::string& top_word,
                           std::optional<std::string> semfile) {
  VirtualTop result{g, "__TOP__"};
  for (int k = 1; result.graph.find(result.top); ++k) result.top = "__TOP__" + std::to_string(k);

  const auto former_roots = g.roots();
  TaxNode top;
  top.id = result.top;
  top.word = top_word;
  top.semfile = std::move(semfile);
  const auto t = result.graph.add_node(std::move(top));
  for (auto r : former_roots) result.graph.add_edge(t, r);
  return result;
}

namespace {

// One merge round. Returns false when no two nodes share (word, hypernyms).
bool collapse_once(const TaxonomyGraph& g, TaxonomyGraph& out, std::vector<NodeIndex>& survivor_of) {
  std::map<std::pair<std::string, std::vector<NodeIndex>>, std::vector<NodeIndex>> groups;
  for (NodeIndex i = 0; i < g.size(); ++i) {
    groups[{g.node(i).word, sorted_copy(g.hypernyms(i))}].push_back(i);
  }
  if (groups.size() == g.size()) return false;

  // Survivor of each group: the member with the smallest id.
  std::vector<NodeIndex> rep(g.size());
  for (const auto& [key, members] : groups) {
    const auto best = *std::min_element(members.begin(), members.end(), [&](NodeIndex a, NodeIndex b) {
      return g.node(a).id < g.node(b).id;
    });
    for (auto m : members) rep[m] = best;
  }

  std::vector<NodeIndex> new_index(g.size());
  for (NodeIndex i = 0; i < g.size(); ++i) {
    if (rep[i] != i) continue;
    const auto& members = groups.at({g.node(i).word, sorted_copy(g.hypernyms(i))});
    TaxNode merged = g.node(i);
    if (members.size() > 1) {
      merged.sense.reset();
      for (auto m : members) {
        const auto& other = g.node(m);
        if (!merged.semfile && other.semfile) merged.semfile = other.semfile;
        for (const auto& s : other.synonyms) {
          if (std::find(merged.synonyms.begin(), merged.synonyms.end(), s) == merged.synonyms.end()) {
            merged.synonyms.push_back(s);
          }
        }
      }
    }
    new_index[i] = out.add_node(std::move(merged));
  }
  for (NodeIndex i = 0; i < g.size(); ++i) {
    for (auto c : g.hyponyms(i)) out.add_edge(new_index[rep[i]], new_index[rep[c]]);
  }
  for (auto& s : survivor_of) s = new_index[rep[s]];
  return true;
}

}  // namespace

CollapseResult collapse_sense_siblings(const TaxonomyGraph& g) {
  std::vector<NodeIndex> survivor_of(g.size());
  for (NodeIndex i = 0; i < g.size(); ++i) survivor_of[i] = i;

  TaxonomyGraph current = g;
  while (true) {
    TaxonomyGraph next;
    if (!collapse_once(current, next, survivor_of)) break;
    current = std::move(next);
  }

  CollapseResult result{std::move(current), {}};
  for (NodeIndex i = 0; i < g.size(); ++i) {
    result.merge_map.emplace(g.node(i).id, result.graph.node(survivor_of[i]).id);
  }
  return result;
}

}  // namespace taxalign
