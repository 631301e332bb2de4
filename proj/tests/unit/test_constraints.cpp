#include <doctest.h>

#include <algorithm>

#include "support/fixtures.hpp"
#include "support/naive_oracle.hpp"
#include "support/random_instance.hpp"

using namespace taxalign;
using namespace taxalign::testing;

namespace {

Connection conn(const Problem& p, const std::string& s, const std::string& t) {
  return {p.source.index_of(s), p.target.index_of(t)};
}

bool includes(std::vector<Connection> big, std::vector<Connection> small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

// A reconstruction of the six-connection example: C1 links the source top,
// C2..C4 are the candidates of the middle node, C5 and C6 link its children.
struct SixConnections {
  TaxonomyGraph source = parse_taxonomy(
      "N\ttop\ttop\nN\tmid\tmid\nN\ta\ta\nN\tb\tb\n"
      "E\ttop\tmid\nE\tmid\ta\nE\tmid\tb\n");
  TaxonomyGraph target = parse_taxonomy(
      "N\tt0\troot\nN\tt1\tone\nN\tt2\ttwo\nN\tt3\tthree\nN\tt4\tfour\nN\tt5\tfive\nN\tt6\tsix\n"
      "E\tt0\tt1\nE\tt0\tt2\nE\tt0\tt3\nE\tt1\tt4\nE\tt4\tt5\nE\tt4\tt6\n");
  CandidateSet cand{std::vector<std::vector<NodeIndex>>{{1, 3}, {2, 3, 4}, {2, 5}, {3, 6}}};
  ClosureIndex src_c{source};
  ClosureIndex tgt_c{target};
  // C1 = (top,t1) 0.9; C5 = (a,t5) 0.8; C6 = (b,t6) 0.7.
  WeightTable w{cand, {0.9, 0.1, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0.2, 0.8, 0.3, 0.7}};

  AlignmentContext ctx() const { return {src_c, tgt_c, cand}; }
};

}  // namespace

TEST_CASE("parse_constraint") {
  CHECK(parse_constraint("IIE") == ConstraintRule{Scope::Immediate, Scope::Immediate, Direction::Hypernym});
  CHECK(parse_constraint("aab") == ConstraintRule{Scope::Any, Scope::Any, Direction::Both});
  CHECK(parse_constraint("iAo") == ConstraintRule{Scope::Immediate, Scope::Any, Direction::Hyponym});
  CHECK_THROWS_AS(parse_constraint("IXZ"), Error);
  CHECK_THROWS_AS(parse_constraint("II"), Error);
  CHECK_THROWS_AS(parse_constraint("IIEE"), Error);
  for (const char* code : {"IIE", "IIO", "IIB", "IAE", "IAO", "IAB", "AIE", "AIO", "AIB", "AAE", "AAO", "AAB"}) {
    CHECK(parse_constraint(code).code() == code);
  }
}

TEST_CASE("expand_pack") {
  const auto ia = expand_pack("IA*");
  REQUIRE(ia.size() == 3);
  CHECK(ia[0].code() == "IAE");
  CHECK(ia[1].code() == "IAO");
  CHECK(ia[2].code() == "IAB");
  CHECK(pack_name(ia) == "IA*");
  CHECK(expand_pack("aa*")[2].code() == "AAB");
  const auto single = expand_pack("IIE");
  REQUIRE(single.size() == 1);
  CHECK(single[0].code() == "IIE");
  CHECK(pack_name(single) == "IIE");
  CHECK_THROWS_AS(expand_pack("Z*"), Error);
  CHECK_THROWS_AS(expand_pack("QQ*"), Error);
  CHECK_THROWS_AS(expand_pack("IA*B"), Error);
  try {
    expand_pack("QQ*");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Format);
  }
}

TEST_CASE("supporters on the bird fragment") {
  const auto p = bird_problem();
  const auto ctx = p.context();
  SUBCASE("IIE finds ave -> animal.bird for rapaz -> bird_of_prey") {
    const auto s = supporters(parse_constraint("IIE"), conn(p, "rapaz", "animal.bird_of_prey"), ctx);
    REQUIRE(s.size() == 1);
    CHECK(s[0] == conn(p, "ave", "animal.bird"));
  }
  SUBCASE("animal pheasant needs target recursion") {
    const auto c = conn(p, "faisan", "animal.pheasant");
    CHECK(supporters(parse_constraint("IIE"), c, ctx).empty());
    const auto iae = supporters(parse_constraint("IAE"), c, ctx);
    CHECK(std::find(iae.begin(), iae.end(), conn(p, "ave", "animal.bird")) != iae.end());
  }
  SUBCASE("food pheasant is supported through food fowl") {
    const auto s = supporters(parse_constraint("IIE"), conn(p, "faisan", "food.pheasant"), ctx);
    REQUIRE(s.size() == 1);
    CHECK(s[0] == conn(p, "ave", "food.fowl"));
  }
  SUBCASE("roots have no hypernym supporters") {
    for (const char* code : {"IIE", "IAE", "AIE", "AAE", "AAB"}) {
      for (auto t : p.candidates.of(p.source.index_of("animal"))) {
        CHECK(supporters(parse_constraint(code), {p.source.index_of("animal"), t}, ctx).empty());
      }
    }
  }
  SUBCASE("both-direction rule needs both sides") {
    // ave -> animal.bird: hypernym side via animal -> tops.animal, hyponym side via rapaz.
    const auto c = conn(p, "ave", "animal.bird");
    const auto e = supporters(parse_constraint("AAE"), c, ctx);
    const auto o = supporters(parse_constraint("AAO"), c, ctx);
    const auto b = supporters(parse_constraint("AAB"), c, ctx);
    CHECK_FALSE(e.empty());
    CHECK_FALSE(o.empty());
    CHECK(b.size() == e.size() + o.size());
    // IIB: no immediate target hypernym of animal.bird is a candidate of animal.
    CHECK(supporters(parse_constraint("IIE"), c, ctx).empty());
    CHECK(supporters(parse_constraint("IIB"), c, ctx).empty());
  }
}

TEST_CASE("support values") {
  SUBCASE("no supporters gives zero") {
    const auto p = bird_problem();
    const auto w = init_weights(p.candidates, RelaxConfig{});
    CHECK(support(expand_pack("II*"), conn(p, "faisan", "animal.pheasant"), w, p.context()) == 0.0);
  }
  SUBCASE("one supporter of weight 0.5") {
    const auto src = parse_taxonomy("N\tp\tp\nN\tc\tc\nE\tp\tc\n");
    const auto tgt = parse_taxonomy("N\ttp\ttp\nN\ttc\ttc\nN\ttx\ttx\nE\ttp\ttc\n");
    const CandidateSet cand(std::vector<std::vector<NodeIndex>>{{0, 2}, {1}});
    const WeightTable w(cand, {0.5, 0.5, 1.0});
    const ClosureIndex sc(src), tc(tgt);
    CHECK(support(expand_pack("IIE"), {1, 1}, w, {sc, tc, cand}) == 0.5);
    // The hyponym side of (p, tp) sees (c, tc) with weight 1; IIB has no hypernym side.
    CHECK(support(expand_pack("IIO"), {0, 0}, w, {sc, tc, cand}) == 1.0);
    CHECK(support(expand_pack("IIB"), {0, 0}, w, {sc, tc, cand}) == 0.0);
  }
  SUBCASE("cap clamps") {
    SixConnections f;
    CHECK(support(expand_pack("AA*"), {1, 4}, f.w, f.ctx(), 1.0) == 1.0);
  }
  SUBCASE("six connections: C4 beats C2 and C3") {
    SixConnections f;
    const auto pack = expand_pack("AA*");
    const NaiveRelations rel(f.source, f.target);
    const double c2 = support(pack, {1, 2}, f.w, f.ctx());
    const double c3 = support(pack, {1, 3}, f.w, f.ctx());
    const double c4 = support(pack, {1, 4}, f.w, f.ctx());
    // Brute force over the six connections: 0.9 (C1) + 0.8 + 0.7 (C5, C6) + min(0.9, 1.5).
    CHECK(c4 == doctest::Approx(naive_support(pack, {1, 4}, f.cand, f.w, rel, kDefaultSupportCap)).epsilon(1e-12));
    CHECK(c4 == doctest::Approx(3.3).epsilon(1e-12));
    CHECK(c2 == 0.0);
    CHECK(c3 == 0.0);
    CHECK(c4 > c2);
    CHECK(c4 > c3);
  }
}

TEST_CASE("support is monotone in each context weight") {
  SixConnections f;
  const auto pack = expand_pack("AA*");
  const double base = support(pack, {1, 4}, f.w, f.ctx());
  for (std::size_t k = 0; k < f.cand.label_count(); ++k) {
    auto flat = std::vector<double>(f.w.flat().begin(), f.w.flat().end());
    flat[k] += 0.25;
    const WeightTable bumped(f.cand, flat);
    CHECK(support(pack, {1, 4}, bumped, f.ctx()) >= base);
  }
}

TEST_CASE("compiled support reproduces support() exactly") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto inst = random_instance(seed, {30, 8, 60});
    const ClosureIndex sc(inst.source), tc(inst.target);
    const AlignmentContext ctx{sc, tc, inst.candidates};
    const auto w = random_weights(inst.candidates, seed * 7);
    for (const char* pattern : {"II*", "IA*", "AI*", "AA*", "AIB"}) {
      const auto pack = expand_pack(pattern);
      const CompiledSupport model(pack, ctx, 2.5);
      std::vector<double> all(inst.candidates.label_count());
      model.evaluate_all(w.flat(), all, 3);
      for (NodeIndex s = 0; s < inst.candidates.source_count(); ++s) {
        for (std::size_t j = 0; j < inst.candidates.count(s); ++j) {
          const auto label = inst.candidates.offset(s) + j;
          const double expected = support(pack, {s, inst.candidates.of(s)[j]}, w, ctx, 2.5);
          REQUIRE(model.evaluate(label, w.flat()) == expected);
          REQUIRE(all[label] == expected);
        }
      }
    }
  }
}

TEST_CASE("supporters are candidate connections and grow with scope") {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    const auto inst = random_instance(seed, {30, 6, 50});
    const ClosureIndex sc(inst.source), tc(inst.target);
    const AlignmentContext ctx{sc, tc, inst.candidates};
    for (NodeIndex s = 0; s < inst.candidates.source_count(); ++s) {
      for (auto t : inst.candidates.of(s)) {
        for (const char dir : {'E', 'O'}) {
          const auto ii = supporters(parse_constraint(std::string("II") + dir), {s, t}, ctx);
          const auto ia = supporters(parse_constraint(std::string("IA") + dir), {s, t}, ctx);
          const auto ai = supporters(parse_constraint(std::string("AI") + dir), {s, t}, ctx);
          const auto aa = supporters(parse_constraint(std::string("AA") + dir), {s, t}, ctx);
          CHECK(includes(ia, ii));
          CHECK(includes(aa, ia));
          CHECK(includes(ai, ii));
          CHECK(includes(aa, ai));
          for (const auto& c : aa) CHECK(inst.candidates.contains(c.src, c.tgt));
        }
      }
    }
  }
}
