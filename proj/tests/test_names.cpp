#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "forcing/context.hpp"
#include "forcing/hfset.hpp"
#include "forcing/names.hpp"
#include "forcing/posets.hpp"

using namespace forcing;

namespace {

GenericFilter filt(std::vector<HfSet> elems) {
  return GenericFilter::explicit_filter(std::move(elems));
}

}  // namespace

TEST_CASE("ed relation") {
  HfSet one = singleton(empty_set());
  HfSet e;
  CHECK(ed(e, HfSet::make({opair(e, one)})));
  CHECK_FALSE(ed(e, e));
  CHECK_FALSE(ed(singleton(e), HfSet::make({opair(e, one)})));
}

TEST_CASE("val") {
  HfSet one, e;  // the one-point poset's top is the empty set
  GenericFilter G = filt({one});
  CHECK(val(G, e) == e);
  CHECK(val(G, HfSet::make({opair(e, one)})) == singleton(e));
  // A pair whose condition is outside G contributes nothing.
  HfSet p_out = singleton(one);
  CHECK(val(G, HfSet::make({opair(e, p_out)})) == e);
  // Non-pair members contribute nothing.
  CHECK(val(G, singleton(e)) == e);

  // V-poset, G = {1,a}: the inner name {<0,b>} evaluates to 0 since b is
  // not in G, so the outer name evaluates to {0}.
  HfSet a = singleton(one), b = singleton(a);
  GenericFilter Ga = filt({one, a});
  HfSet tau = HfSet::make({opair(HfSet::make({opair(e, b)}), one)});
  CHECK(val(Ga, tau) == singleton(e));

  // ValCache agrees with the one-shot function.
  ValCache vc(Ga);
  CHECK(vc(tau) == val(Ga, tau));
  CHECK(vc(tau) == singleton(e));
}

TEST_CASE("check names") {
  HfSet e, one = singleton(e);
  CHECK(check(e, one) == e);
  CHECK(check(singleton(e), one) == HfSet::make({opair(e, one)}));

  // val(G, check(x)) = x for every filter containing the top.
  GenericFilter G = filt({one});
  CHECK(val(G, check(vset(2), one)) == vset(2));
  for (HfSet x : vset(3).children()) CHECK(val(G, check(x, one)) == x);
}

TEST_CASE("gdot and opair_name") {
  ForcingContext triv = trivial_context();
  GenericFilter G1 = filt({triv.one});
  CHECK(val(G1, gdot(triv.poset)) == singleton(triv.one));

  ForcingContext vp = vposet_context();
  HfSet one, a = singleton(one);
  GenericFilter Ga = filt({one, a});
  CHECK(val(Ga, gdot(vp.poset)) == HfSet::make({one, a}));

  HfSet e;
  CHECK(val(G1, opair_name(check(e, triv.one), check(singleton(e), triv.one),
                           triv.one)) == opair(e, singleton(e)));

  // val(G, opair_name(s,r)) = opair(val(G,s), val(G,r)) on samples.
  for (HfSet s : {e, gdot(vp.poset), check(vset(2), one)})
    for (HfSet r : {singleton(opair(e, a)), e})
      CHECK(val(Ga, opair_name(s, r, one)) ==
            opair(val(Ga, s), val(Ga, r)));
}

TEST_CASE("generic extension") {
  for (ForcingContext ctx :
       {trivial_context(), vposet_context(), chain3_context()}) {
    CAPTURE(ctx.name);
    for (const GenericFilter& G : all_generic_filters(ctx)) {
      Structure MG = generic_extension(ctx, G);
      // M[G] is transitive.
      for (HfSet x : MG.elems())
        for (HfSet y : x.children()) CHECK(MG.contains(y));
      // Elements with their check name inside M persist into M[G].
      for (HfSet x : ctx.check_closed_elems) CHECK(MG.contains(x));
      // G itself lands in M[G] whenever its canonical name is in M.
      if (ctx.gdot_in_M) CHECK(MG.contains(G.as_hfset()));
      // rank(val(G,x)) <= rank(x) across all names.
      for (HfSet x : ctx.M.elems()) CHECK(val(G, x).rank() <= x.rank());
    }
  }

  // The shipped contexts keep their seed inside M[G]; in particular the
  // ordinal 1 survives into the trivial extension.
  ForcingContext triv = trivial_context();
  Structure MG = generic_extension(triv, filt({triv.one}));
  CHECK(MG.contains(nat(1)));
  for (HfSet x : vset(3).children()) CHECK(MG.contains(x));
}

TEST_CASE("val is monotone in the filter") {
  ForcingContext vp = vposet_context();
  HfSet one, a = singleton(one);
  GenericFilter G = filt({one});
  GenericFilter Gp = filt({one, a});
  for (HfSet tau : vp.M.elems()) CHECK(subset(val(G, tau), val(Gp, tau)));
}
