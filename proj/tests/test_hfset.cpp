#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <vector>

#include "forcing/hfset.hpp"

using namespace forcing;

namespace {

// A small pool of sets that is rich enough for the property checks.
std::vector<HfSet> pool() {
  std::vector<HfSet> out;
  HfSet v4 = vset(4);
  out.assign(v4.children().begin(), v4.children().end());
  out.push_back(v4);
  out.push_back(opair(empty_set(), singleton(empty_set())));
  out.push_back(cartprod(vset(2), vset(2)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

TEST_CASE("construction and canonicalization") {
  HfSet e;
  CHECK(e.is_empty());
  CHECK(e == empty_set());

  // Order and duplicates are invisible.
  HfSet a = HfSet::make({singleton(e), e});
  HfSet b = HfSet::make({e, singleton(e), e});
  CHECK(a == b);
  CHECK(a.card() == 2);
  CHECK(a == parse_hf("{0,{0}}"));

  // make(children(x)) == x for every canonical x.
  for (HfSet x : pool()) {
    std::vector<HfSet> kids(x.children().begin(), x.children().end());
    CHECK(HfSet::make(kids) == x);
  }
}

TEST_CASE("membership, subset, transitivity") {
  HfSet e;
  CHECK(mem(e, singleton(e)));
  CHECK_FALSE(mem(singleton(e), e));
  for (HfSet x : pool()) CHECK(subset(e, x));
  CHECK_FALSE(is_transitive(singleton(singleton(e))));  // missing {0}'s member
  CHECK(is_transitive(vset(3)));
  CHECK(is_transitive(e));
}

TEST_CASE("rank and transitive closure") {
  HfSet e;
  CHECK(rank(e) == 0);
  CHECK(rank(HfSet::make({e, singleton(e)})) == 2);
  CHECK(transitive_closure(singleton(singleton(e))) ==
        HfSet::make({e, singleton(e)}));

  // rank is strictly monotone along membership.
  for (HfSet y : pool())
    for (HfSet x : y.children()) CHECK(rank(x) < rank(y));
}

TEST_CASE("extensionality coincides with structural equality") {
  auto P = pool();
  for (HfSet x : P)
    for (HfSet y : P) {
      bool extensional = true;
      for (HfSet z : P)
        if (mem(z, x) != mem(z, y)) extensional = false;
      // The pool contains every member of its elements (vset(4) children
      // are closed downward), so extensional equality is decidable in it.
      if (x == y) CHECK(extensional);
      if (extensional && subset(x, vset(4)) && subset(y, vset(4)))
        CHECK(x == y);
    }
}

TEST_CASE("pairs, Kuratowski pairs, domain") {
  HfSet e;
  HfSet se = singleton(e);
  CHECK(opair(e, se) == parse_hf("{{0},{0,{0}}}"));
  CHECK(pair(e, e) == singleton(e));

  auto d = as_opair(opair(se, e));
  REQUIRE(d.has_value());
  CHECK(d->first == se);
  CHECK(d->second == e);
  CHECK_FALSE(as_opair(e).has_value());

  CHECK(domain(singleton(opair(e, se))) == singleton(e));
  CHECK(domain(singleton(e)) == e);  // non-pair members contribute nothing
}

TEST_CASE("cartesian product and union") {
  HfSet a = vset(2), b = singleton(empty_set());
  CHECK(domain(cartprod(a, b)) == a);
  CHECK(cartprod(a, empty_set()) == empty_set());
  CHECK(union_of(singleton(singleton(empty_set()))) == singleton(empty_set()));
  CHECK(union_of(vset(3)) == vset(2));
}

TEST_CASE("ordinals, cumulative stages, least") {
  HfSet e;
  CHECK(is_ordinal(HfSet::make({e, singleton(e)})));  // the ordinal 2
  CHECK_FALSE(is_ordinal(singleton(singleton(e))));
  CHECK(vset(2) == HfSet::make({e, singleton(e)}));

  for (std::size_t n = 0; n <= 4; ++n) {
    CHECK(as_nat(nat(n)) == n);
    CHECK(is_ordinal(nat(n)));
  }
  for (std::size_t n = 0; n <= 3; ++n) {
    CHECK(is_transitive(vset(n)));
    CHECK(subset(vset(n), vset(n + 1)));
    CHECK(vset(n + 1).card() == (std::size_t{1} << vset(n).card()));
  }

  CHECK(least([](std::size_t k) { return k >= 3; }, 10) == 3);
  CHECK_FALSE(least([](std::size_t) { return false; }, 10).has_value());
}

TEST_CASE("text notation round trip") {
  CHECK(parse_hf("0") == empty_set());
  CHECK(parse_hf("<0,{0}>") == opair(empty_set(), singleton(empty_set())));
  CHECK(parse_hf(" { 0 , { 0 } } ") == vset(2));
  for (HfSet x : pool()) CHECK(parse_hf(print_hf(x)) == x);
  CHECK_THROWS(parse_hf("{0"));
  CHECK_THROWS(parse_hf("{0,}"));
  CHECK_THROWS(parse_hf("x"));
}
