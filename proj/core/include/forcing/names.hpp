#pragma once

#include <unordered_map>
#include <vector>

#include "forcing/context.hpp"
#include "forcing/hfset.hpp"
#include "forcing/posets.hpp"

namespace forcing {

// Every HF set is a name; these operations read it as a set of pairs
// <sigma, p> with p a condition.

// x is in the domain of y; the well-founded relation behind name recursions.
bool ed(HfSet x, HfSet y);

// val(G,tau) = { val(G,sigma) : <sigma,p> in tau, p in G }.  Non-pair
// members and pairs whose condition is outside G contribute nothing.
HfSet val(const GenericFilter& G, HfSet tau);

// A val evaluator with a persistent memo, for repeated queries against one
// fixed filter.
class ValCache {
public:
  explicit ValCache(GenericFilter G) : filter_(std::move(G)) {}
  HfSet operator()(HfSet tau);

private:
  GenericFilter filter_;
  std::unordered_map<HfSet, HfSet, HfSet::Hash> memo_;
};

// check(x) = { <check(y), one> : y in x }; val(G, check(x)) = x.
HfSet check(HfSet x, HfSet one);

// The canonical name for the generic filter:
// { <check(p), p> : p in carrier }.
HfSet gdot(const FinitePoset& P);

// A name for the ordered pair of the values of sigma and rho.
HfSet opair_name(HfSet sigma, HfSet rho, HfSet one);

// M[G] = { val(G,tau) : tau in M }.
Structure generic_extension(const ForcingContext& ctx, const GenericFilter& G);

}  // namespace forcing
