#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "taxalign/taxalign.hpp"

#ifndef TAXALIGN_TEST_DATA
#error "TAXALIGN_TEST_DATA must point at tests/data"
#endif

namespace taxalign::testing {

inline std::string data_path(const std::string& name) { return std::string(TAXALIGN_TEST_DATA) + "/" + name; }

inline TaxonomyGraph load_fixture(const std::string& name) { return load_taxonomy_file(data_path(name)); }

inline TaxonomyGraph parse_taxonomy(const std::string& text) {
  std::istringstream in(text);
  return load_taxonomy(in);
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// The bird fragment wired up end to end.
struct Problem {
  TaxonomyGraph source;
  TaxonomyGraph target;
  BilingualDict dict;
  CandidateSet candidates;
  ClosureIndex source_closure;
  ClosureIndex target_closure;

  Problem(TaxonomyGraph src, TaxonomyGraph tgt, BilingualDict d, const PinMap& pins = {})
      : source(std::move(src)),
        target(std::move(tgt)),
        dict(std::move(d)),
        candidates(generate_candidates(source, target, dict, pins)),
        source_closure(source),
        target_closure(target) {}

  AlignmentInput input() const { return {source, target, source_closure, target_closure, candidates}; }
  AlignmentContext context() const { return {source_closure, target_closure, candidates}; }

  RelaxResult align(const std::string& pack, InitMode init = InitMode::Uniform, std::uint64_t seed = 0) const {
    RelaxConfig cfg;
    cfg.pack = expand_pack(pack);
    cfg.init = init;
    cfg.seed = seed;
    return run(input(), cfg);
  }

  const MappingEntry& entry(const std::string& src_id, const RelaxResult& r) const {
    return r.mapping.at(source.index_of(src_id));
  }
};

inline Problem bird_problem(const PinMap& pins = {}) {
  return Problem(load_fixture("bird_source.tax"), load_fixture("bird_target.tax"),
                 load_dict_file(data_path("bird_dict.tsv")), pins);
}

inline Problem fur_problem() {
  return Problem(load_fixture("fur_source.tax"), load_fixture("fur_target.tax"),
                 load_dict_file(data_path("fur_dict.tsv")));
}

}  // namespace taxalign::testing
