#pragma once

#include <span>
#include <vector>

#include "taxalign/candidates.hpp"

namespace taxalign {

/// Per source node, one weight per candidate label, laid out like the
/// CandidateSet it was built from.
class WeightTable {
 public:
  WeightTable() = default;
  WeightTable(const CandidateSet& c, std::vector<double> flat);

  std::span<const double> of(NodeIndex s) const {
    return {values_.data() + offsets_[s], offsets_[s + 1] - offsets_[s]};
  }
  std::span<double> of(NodeIndex s) {
    return {values_.data() + offsets_[s], offsets_[s + 1] - offsets_[s]};
  }

  std::span<const double> flat() const { return values_; }
  std::span<double> flat() { return values_; }

  std::size_t source_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }

  friend bool operator==(const WeightTable&, const WeightTable&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<double> values_;
};

}  // namespace taxalign
