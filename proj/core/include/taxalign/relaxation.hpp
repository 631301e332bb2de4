#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "taxalign/candidates.hpp"
#include "taxalign/constraints.hpp"
#include "taxalign/taxonomy.hpp"
#include "taxalign/weights.hpp"

namespace taxalign {

enum class InitMode { Uniform, Random };

struct RelaxConfig {
  ConstraintPack pack;
  InitMode init = InitMode::Uniform;
  std::uint64_t seed = 0;
  /// Stop once the largest per-weight change of an iteration drops below this.
  double epsilon = 1e-4;
  std::size_t max_iters = 500;
  double support_cap = kDefaultSupportCap;
  unsigned threads = 1;

  /// Throws Error(Config) when epsilon <= 0, max_iters == 0, cap < 0 or the
  /// pack is empty.
  void validate() const;
};

/// Uniform 1/k per label, or seeded positive random values normalized per
/// node. Single-candidate nodes always get 1.
WeightTable init_weights(const CandidateSet& cand, const RelaxConfig& cfg);

struct StepResult {
  WeightTable weights;
  double max_delta = 0.0;
  /// Source nodes whose weight vector changed in this step.
  std::vector<NodeIndex> changed;
};

/// One synchronous update from precomputed supports (one per label slot):
///
///   w'[i][j] = w[i][j] (1 + S[i][j]) / sum_k w[i][k] (1 + S[i][k])
///
/// Nodes whose labels all receive equal support are left exactly as they are.
StepResult apply_support(const WeightTable& w, const CandidateSet& cand, std::span<const double> supports);

/// Computes every support against `w`, then applies them.
StepResult step(const WeightTable& w, const CandidateSet& cand, const CompiledSupport& model,
                unsigned threads = 1);

struct RelaxTrace {
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> deltas;  // one per iteration
  /// Per source node: did its weights ever change.
  std::vector<bool> touched;

  std::size_t touched_count() const;
};

enum class MapStatus { NoTranslation, Monosemous, Resolved, Tied, Untouched };

const char* to_string(MapStatus s);
std::optional<MapStatus> parse_map_status(std::string_view s);

struct MappingEntry {
  NodeId source;
  std::optional<NodeId> target;
  std::optional<std::string> target_file;
  double weight = 0.0;
  MapStatus status = MapStatus::NoTranslation;
  std::size_t candidates = 0;
};

/// One entry per source node, in source node order.
using Mapping = std::vector<MappingEntry>;

/// Top two weights closer than this count as a tie.
inline constexpr double kTieTolerance = 1e-9;

/// Picks the heaviest label of every node. Ties go to the smallest target id
/// and are marked Tied; polysemous nodes never touched are marked Untouched.
Mapping select_mapping(const TaxonomyGraph& source, const TaxonomyGraph& target, const CandidateSet& cand,
                       const WeightTable& w, const std::vector<bool>& touched);

struct RelaxResult {
  WeightTable weights;
  Mapping mapping;
  RelaxTrace trace;
};

/// Called after every iteration with the iteration number (1-based), the new
/// weights and that iteration's max delta.
using IterationObserver = std::function<void(std::size_t, const WeightTable&, double)>;

struct AlignmentInput {
  const TaxonomyGraph& source;
  const TaxonomyGraph& target;
  const ClosureIndex& source_closure;
  const ClosureIndex& target_closure;
  const CandidateSet& candidates;
};

/// Iterates until the max delta of an iteration is below cfg.epsilon or
/// cfg.max_iters iterations ran. Not converging is reported in the trace.
RelaxResult run(const AlignmentInput& in, const RelaxConfig& cfg, const IterationObserver& observer = {});

/// Work units of one iteration: variables times constraints.
std::uint64_t cost_estimate(std::uint64_t n_vars, std::uint64_t n_constraint_applications);

/// `src_id<TAB>tgt_id<TAB>weight`, sorted by (src_id, tgt_id), 6 decimals.
void write_weights(std::ostream& out, const TaxonomyGraph& source, const TaxonomyGraph& target,
                   const CandidateSet& cand, const WeightTable& w);

/// `source target target_file weight status candidates`, tab-separated,
/// sorted by source id, with a leading '#' header. Missing values print "-".
void write_mapping(std::ostream& out, const Mapping& m);
Mapping read_mapping(std::istream& in);
Mapping read_mapping_file(const std::string& path);

}  // namespace taxalign
