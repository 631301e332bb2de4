#include "taxalign/candidates.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_map>

#include "taxalign/error.hpp"
#include "text.hpp"

namespace taxalign {

std::string normalize_word(std::string_view w) {
  w = detail::trim(w);
  std::string out;
  out.reserve(w.size());
  bool in_space = false;
  for (char ch : w) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      in_space = true;
      continue;
    }
    if (in_space) out.push_back('_');
    in_space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

void BilingualDict::add(std::string_view source_word, std::string_view target_word) {
  auto src = normalize_word(source_word);
  auto tgt = normalize_word(target_word);
  if (src.empty() || tgt.empty()) throw Error(ErrorKind::Parse, "empty dictionary word");
  if (entries_[std::move(src)].insert(std::move(tgt)).second) ++pairs_;
}

const std::set<std::string>& BilingualDict::translations(std::string_view source_word) const {
  static const std::set<std::string> none;
  const auto it = entries_.find(normalize_word(source_word));
  return it == entries_.end() ? none : it->second;
}

BilingualDict load_dict(std::istream& in) {
  BilingualDict dict;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::chomp(raw);
    if (detail::skippable(line)) continue;
    const auto f = detail::split(line, '\t');
    if (f.size() != 2) throw ParseError(line_no, "expected src_word<TAB>tgt_word");
    if (normalize_word(f[0]).empty() || normalize_word(f[1]).empty()) {
      throw ParseError(line_no, "empty dictionary word");
    }
    dict.add(f[0], f[1]);
  }
  return dict;
}

BilingualDict load_dict_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open dictionary file '" + path + "'");
  return load_dict(in);
}

const char* to_string(CandidateStatus s) {
  switch (s) {
    case CandidateStatus::NoTranslation: return "no-translation";
    case CandidateStatus::Monosemous: return "monosemous";
    case CandidateStatus::Polysemous: return "polysemous";
  }
  return "?";
}

CandidateSet::CandidateSet(std::vector<std::vector<NodeIndex>> per_source) {
  offsets_.reserve(per_source.size() + 1);
  offsets_.push_back(0);
  for (const auto& labels : per_source) {
    targets_.insert(targets_.end(), labels.begin(), labels.end());
    offsets_.push_back(targets_.size());
  }
}

std::optional<std::size_t> CandidateSet::position(NodeIndex s, NodeIndex t) const {
  const auto labels = of(s);
  const auto it = std::find(labels.begin(), labels.end(), t);
  if (it == labels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels.begin());
}

CandidateStatus CandidateSet::status(NodeIndex s) const {
  switch (count(s)) {
    case 0: return CandidateStatus::NoTranslation;
    case 1: return CandidateStatus::Monosemous;
    default: return CandidateStatus::Polysemous;
  }
}

NodeIndex CandidateSet::source_of_label(std::size_t label) const {
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), label);
  return static_cast<NodeIndex>(it - offsets_.begin() - 1);
}

CandidateSet generate_candidates(const TaxonomyGraph& source, const TaxonomyGraph& target,
                                 const BilingualDict& dict, const PinMap& pins) {
  std::unordered_map<std::string, std::vector<NodeIndex>> by_word;
  for (NodeIndex t = 0; t < target.size(); ++t) {
    const auto& n = target.node(t);
    auto& own = by_word[normalize_word(n.word)];
    if (own.empty() || own.back() != t) own.push_back(t);
    for (const auto& syn : n.synonyms) {
      auto& v = by_word[normalize_word(syn)];
      if (v.empty() || v.back() != t) v.push_back(t);
    }
  }

  std::vector<std::optional<NodeIndex>> pinned(source.size());
  for (const auto& [src_id, tgt_id] : pins) {
    const auto s = source.find(src_id);
    if (!s) throw Error(ErrorKind::Reference, "pin names unknown source node '" + src_id + "'");
    const auto t = target.find(tgt_id);
    if (!t) throw Error(ErrorKind::Reference, "pin names unknown target node '" + tgt_id + "'");
    pinned[*s] = *t;
  }

  const auto by_id = [&](NodeIndex a, NodeIndex b) { return target.node(a).id < target.node(b).id; };
  std::vector<std::vector<NodeIndex>> per_source(source.size());
  for (NodeIndex s = 0; s < source.size(); ++s) {
    auto& labels = per_source[s];
    if (pinned[s]) {
      labels.push_back(*pinned[s]);
      continue;
    }
    for (const auto& translation : dict.translations(source.node(s).word)) {
      const auto it = by_word.find(translation);
      if (it != by_word.end()) labels.insert(labels.end(), it->second.begin(), it->second.end());
    }
    std::sort(labels.begin(), labels.end(), by_id);
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  }
  return CandidateSet(std::move(per_source));
}

ConnectionStats connection_stats(std::span<const std::size_t> candidate_counts) {
  ConnectionStats st;
  st.nodes = candidate_counts.size();
  for (auto k : candidate_counts) {
    if (k == 0) continue;
    ++st.connected;
    st.candidate_total += k;
    if (k >= 2) ++st.polysemous;
  }
  if (st.nodes > 0) st.pct_with_connection = 100.0 * static_cast<double>(st.connected) / static_cast<double>(st.nodes);
  if (st.connected > 0) {
    const auto c = static_cast<double>(st.connected);
    st.pct_polysemous_of_connected = 100.0 * static_cast<double>(st.polysemous) / c;
    st.mean_polysemy = static_cast<double>(st.candidate_total) / c;
  }
  return st;
}

ConnectionStats connection_stats(const CandidateSet& c) {
  std::vector<std::size_t> counts(c.source_count());
  for (NodeIndex s = 0; s < counts.size(); ++s) counts[s] = c.count(s);
  return connection_stats(counts);
}

}  // namespace taxalign
