#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>
#include <vector>

#include "forcing/context.hpp"
#include "forcing/hfset.hpp"
#include "forcing/posets.hpp"

using namespace forcing;

namespace {

FinitePoset vposet() {
  HfSet one, a = singleton(one), b = singleton(a);
  return FinitePoset({one, a, b},
                     {{one, one}, {a, a}, {b, b}, {a, one}, {b, one}}, one);
}

HfSet seq(std::vector<int> bits) { return cohen_encode(bits); }

std::vector<HfSet> all_bitseqs(std::size_t max_len) {
  std::vector<HfSet> out;
  for (std::size_t len = 0; len <= max_len; ++len)
    for (std::size_t mask = 0; mask < (std::size_t{1} << len); ++mask) {
      std::vector<int> bits(len);
      for (std::size_t k = 0; k < len; ++k) bits[k] = (mask >> k) & 1;
      out.push_back(cohen_encode(bits));
    }
  return out;
}

}  // namespace

TEST_CASE("finite poset validation") {
  HfSet one, a = singleton(one);
  CHECK_THROWS_AS(  // missing reflexivity at a
      FinitePoset({one, a}, {{one, one}, {a, one}}, one),
      std::invalid_argument);
  CHECK_THROWS_AS(  // a is not below the top
      FinitePoset({one, a}, {{one, one}, {a, a}}, one),
      std::invalid_argument);
  CHECK_THROWS_AS(  // top outside the carrier
      FinitePoset({one}, {{one, one}}, a), std::invalid_argument);
  HfSet b = singleton(a);
  CHECK_THROWS_AS(  // b <= a <= one but not b <= one: transitivity fails
      FinitePoset({one, a, b}, {{one, one}, {a, a}, {b, b}, {a, one}, {b, a}},
                  one),
      std::invalid_argument);
}

TEST_CASE("compatibility") {
  FinitePoset P = vposet();
  HfSet one, a = singleton(one), b = singleton(a);
  for (HfSet p : P.carrier()) CHECK(compat(P, p, one));
  CHECK(incompat(P, a, b));
  CHECK(compat(P, a, a));
  CHECK_THROWS(compat(P, vset(3), one));
}

TEST_CASE("filters, dense sets, dense below") {
  HfSet one;
  FinitePoset T({one}, {{one, one}}, one);
  CHECK(is_filter(T, {one}));
  CHECK_FALSE(is_filter(T, {}));

  FinitePoset P = vposet();
  HfSet a = singleton(one), b = singleton(a);
  CHECK(is_filter(P, {one, a}));
  CHECK_FALSE(is_filter(P, {a}));        // not upward closed
  CHECK_FALSE(is_filter(P, {one, a, b}));  // a, b have no common lower bound

  CHECK(is_dense(P, {a, b}));
  CHECK_FALSE(is_dense(P, {a}));
  CHECK(dense_below(P, {a}, a));
  CHECK_FALSE(dense_below(P, {a}, b));
  CHECK(dense_below(P, std::vector<HfSet>{a, b}, one));
}

TEST_CASE("all generic filters on the shipped contexts") {
  ForcingContext triv = trivial_context();
  auto Fs = all_generic_filters(triv);
  REQUIRE(Fs.size() == 1);
  CHECK(Fs[0].elems() == std::vector<HfSet>{triv.one});

  ForcingContext vp = vposet_context();
  HfSet one, a = singleton(one), b = singleton(a);
  auto Gs = all_generic_filters(vp);
  REQUIRE(Gs.size() == 2);
  CHECK(Gs[0].elems() == std::vector<HfSet>{one, a});
  CHECK(Gs[1].elems() == std::vector<HfSet>{one, b});
  for (const GenericFilter& G : Gs) CHECK(is_filter(vp.poset, G.elems()));

  // On a chain the only generic filter is the whole carrier: every final
  // segment is dense, so the bottom element must be in.
  ForcingContext ch = chain3_context();
  auto Hs = all_generic_filters(ch);
  REQUIRE(Hs.size() == 1);
  CHECK(Hs[0].elems().size() == 3);
  CHECK(Hs[0].contains(nat(2)));
}

TEST_CASE("cohen poset encoding and order") {
  CountablePoset C = cohen_poset();
  CHECK(C.one == seq({}));
  CHECK(seq_upd(seq({0}), 1) == seq({0, 1}));
  CHECK(cohen_decode(seq({1, 0, 1})) == std::vector<int>{1, 0, 1});
  for (HfSet f : all_bitseqs(5)) {
    CHECK(C.contains(f));
    CHECK(C.leq(f, C.one));
    CHECK(C.leq(f, f));
    CHECK(cohen_encode(cohen_decode(f)) == f);
  }
  CHECK_FALSE(C.contains(singleton(empty_set())));
  CHECK_THROWS(cohen_decode(singleton(empty_set())));

  // Reverse inclusion: q <= p iff q extends p; two sequences are
  // compatible iff one extends the other.
  CHECK(C.leq(seq({0, 1}), seq({0})));
  CHECK_FALSE(C.leq(seq({0}), seq({0, 1})));
  CHECK_FALSE(C.leq(seq({0}), seq({1})));

  // seq_upd(f,0) is incompatible with seq_upd(f,1), exhaustively to len 6.
  for (HfSet f : all_bitseqs(6)) {
    HfSet f0 = seq_upd(f, 0), f1 = seq_upd(f, 1);
    CHECK_FALSE(C.leq(f0, f1));
    CHECK_FALSE(C.leq(f1, f0));
  }

  auto probes = all_bitseqs(6);
  CHECK(is_separative(C, probes));
}

TEST_CASE("three-valued density probe") {
  CountablePoset C = cohen_poset();
  DenseSet D2{[](HfSet f) { return cohen_decode(f).size() >= 2; }, "len>=2"};
  CHECK(is_dense(C, D2, 200) == Tri::True);

  // Cohen extension streams never run dry, so a non-dense set within the
  // bound reads Undecided rather than False.
  DenseSet not_dense{[](HfSet f) { return cohen_decode(f) ==
                                          std::vector<int>{1}; },
                     "only [1]"};
  CHECK(is_dense(C, not_dense, 200) == Tri::Undecided);
  CHECK(is_dense(C, D2, 1) == Tri::Undecided);

  // A definite False needs an exhaustible extension stream: the one-point
  // poset has no extension into the empty set.
  HfSet top;
  CountablePoset point{[top](HfSet x) { return x == top; },
                       [](HfSet, HfSet) { return true; },
                       top,
                       [top](std::size_t) { return top; },
                       [top](HfSet, std::size_t k) {
                         return k == 0 ? std::optional<HfSet>(top)
                                       : std::nullopt;
                       }};
  DenseSet nothing{[](HfSet) { return false; }, "empty"};
  CHECK(is_dense(point, nothing, 8) == Tri::False);
  DenseSet everything{[](HfSet) { return true; }, "all"};
  CHECK(is_dense(point, everything, 8) == Tri::True);
}

TEST_CASE("Rasiowa-Sikorski chain on cohen") {
  CountablePoset C = cohen_poset();
  auto len_at_least = [](std::size_t n) {
    return DenseSet{[n](HfSet f) { return cohen_decode(f).size() >= n; },
                    "len>=" + std::to_string(n)};
  };
  RslFilter F(C, {len_at_least(1), len_at_least(2), len_at_least(3)},
              1u << 16);
  CHECK(F.contains(C.one));
  CHECK_FALSE(F.contains(seq({1})));
  CHECK(F.contains(seq({0})));
  // Memoized decisions stay stable across chain growth.
  CHECK_FALSE(F.contains(seq({1})));

  auto chain = F.chain();
  REQUIRE(chain.size() >= 4);
  CHECK(chain[0] == C.one);
  CHECK(chain[1] == seq({0}));
  CHECK(chain[2] == seq({0, 0}));
  CHECK(chain[3] == seq({0, 0, 0}));
  // The chain decreases and element n+1 lands in denses[n].
  for (std::size_t n = 0; n + 1 < 4; ++n) {
    CHECK(C.leq(chain[n + 1], chain[n]));
    CHECK(len_at_least(n + 1).contains(chain[n + 1]));
  }
}

TEST_CASE("density bound exceeded is a dedicated error") {
  CountablePoset C = cohen_poset();
  DenseSet impossible{[](HfSet) { return false; }, "impossible"};
  try {
    // The constructor already walks the listed dense sets.
    RslFilter F(C, {impossible}, 64);
    FAIL("expected DensityBoundError");
  } catch (const DensityBoundError& e) {
    CHECK(e.dense_name() == "impossible");
  }
}

TEST_CASE("explicit generic filter accessors") {
  HfSet one;
  GenericFilter G = GenericFilter::explicit_filter({one});
  CHECK(G.is_explicit());
  CHECK(G.contains(one));
  CHECK_FALSE(G.contains(singleton(one)));
  CHECK(G.as_hfset() == singleton(one));
}
