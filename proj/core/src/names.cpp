#include "forcing/names.hpp"

namespace forcing {

bool ed(HfSet x, HfSet y) { return mem(x, domain(y)); }

namespace {

HfSet val_rec(const GenericFilter& G, HfSet tau,
              std::unordered_map<HfSet, HfSet, HfSet::Hash>& memo) {
  if (auto it = memo.find(tau); it != memo.end()) return it->second;
  std::vector<HfSet> elems;
  for (HfSet m : tau.children()) {
    auto p = as_opair(m);
    if (!p) continue;
    if (!G.contains(p->second)) continue;
    elems.push_back(val_rec(G, p->first, memo));
  }
  HfSet v = HfSet::make(std::move(elems));
  memo.emplace(tau, v);
  return v;
}

}  // namespace

HfSet val(const GenericFilter& G, HfSet tau) {
  std::unordered_map<HfSet, HfSet, HfSet::Hash> memo;
  return val_rec(G, tau, memo);
}

HfSet ValCache::operator()(HfSet tau) { return val_rec(filter_, tau, memo_); }

HfSet check(HfSet x, HfSet one) {
  std::vector<HfSet> elems;
  for (HfSet y : x.children()) elems.push_back(opair(check(y, one), one));
  return HfSet::make(std::move(elems));
}

HfSet gdot(const FinitePoset& P) {
  std::vector<HfSet> elems;
  for (HfSet p : P.carrier()) elems.push_back(opair(check(p, P.one()), p));
  return HfSet::make(std::move(elems));
}

HfSet opair_name(HfSet sigma, HfSet rho, HfSet one) {
  // { <{<sigma,one>,<sigma,one>}-style unordered-pair names, one> } built so
  // that the value is the Kuratowski pair of the values.
  HfSet first = HfSet::make({opair(sigma, one)});                    // {val sigma}
  HfSet both = HfSet::make({opair(sigma, one), opair(rho, one)});    // {val sigma, val rho}
  return HfSet::make({opair(first, one), opair(both, one)});
}

Structure generic_extension(const ForcingContext& ctx,
                            const GenericFilter& G) {
  ValCache v(G);
  std::vector<HfSet> out;
  out.reserve(ctx.M.size());
  for (HfSet tau : ctx.M.elems()) out.push_back(v(tau));
  return Structure(std::move(out));
}

}  // namespace forcing
