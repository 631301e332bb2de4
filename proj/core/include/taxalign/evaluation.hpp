#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>

#include "taxalign/candidates.hpp"
#include "taxalign/relaxation.hpp"
#include "taxalign/taxonomy.hpp"

namespace taxalign {

/// How trustworthy the source hierarchy around a node is.
enum class Quality {
  TaxonomyOkFileOk,   // well built, filed under the right semantic file
  TaxonomyOkFileNok,  // well built, filed under the wrong semantic file
  TaxonomyNok,        // badly built; never evaluated
};

struct GoldEntry {
  std::optional<NodeId> node;
  std::optional<std::string> file;
  Quality quality = Quality::TaxonomyOkFileOk;
};

using GoldStandard = std::map<NodeId, GoldEntry>;

/// Reads `src_id<TAB>node:<tgt_id>|file:<tag>[<TAB>ok|oknf|nok]`.
GoldStandard load_gold(std::istream& in);
GoldStandard load_gold_file(const std::string& path);

/// Fills the file tag of node-level entries from the target taxonomy.
/// Throws Error(Reference) when a gold node is not in `target`.
void resolve_gold_files(GoldStandard& gold, const TaxonomyGraph& target);

enum class EvalLevel { File, Node };

const char* to_string(EvalLevel l);

struct Tally {
  std::size_t right = 0;
  std::size_t total = 0;

  std::optional<double> pct() const;
  Tally& operator+=(const Tally& o) {
    right += o.right;
    total += o.total;
    return *this;
  }
};

struct PrecisionSlice {
  Tally file_ok;      // T_OK, F_OK
  Tally file_nok;     // T_OK, F_NOK
  std::size_t excluded = 0;  // T_NOK nodes

  Tally taxonomy_ok() const {
    Tally t = file_ok;
    t += file_nok;
    return t;
  }
};

struct Coverage {
  std::size_t count = 0;
  std::size_t connected = 0;
  std::optional<double> pct;
};

/// Connected nodes whose weights changed during relaxation.
Coverage coverage(const RelaxTrace& trace, const CandidateSet& cand);
/// Same figure recovered from mapping statuses (resolved or tied).
Coverage coverage(const Mapping& m);

struct EvalReport {
  EvalLevel level = EvalLevel::File;
  Coverage coverage;
  ConnectionStats polysemy;
  PrecisionSlice polysemous;
  PrecisionSlice monosemous;
  PrecisionSlice all;
  std::size_t ties = 0;         // evaluated nodes whose selection was a tie
  std::size_t unevaluated = 0;  // connected nodes without usable gold
  std::optional<double> random_baseline;
};

/// Scores each connected, gold-covered, non-T_NOK node: at file level the
/// selected target's semantic file must equal the gold file, at node level
/// the selected id must equal the gold node. Throws Error(Config) when a
/// file-level comparison needs a gold file that was never resolved.
EvalReport precision(const Mapping& m, const GoldStandard& gold, EvalLevel level);

/// Expected accuracy of picking a candidate uniformly at random, averaged
/// over polysemous, gold-covered, non-T_NOK nodes. nullopt if there are none.
std::optional<double> baseline_random(const CandidateSet& cand, const TaxonomyGraph& source,
                                      const TaxonomyGraph& target, const GoldStandard& gold, EvalLevel level);

/// Aligned text tables: coverage, then precision over polysemous and over all
/// connected words.
void write_report(std::ostream& out, const EvalReport& r);
/// `key<TAB>value` lines carrying the same numbers.
void write_report_tsv(std::ostream& out, const EvalReport& r);

}  // namespace taxalign
