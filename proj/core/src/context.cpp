#include "forcing/context.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "forcing/names.hpp"

namespace forcing {

namespace {

// Insert x and everything in its transitive closure.
void insert_transitively(std::set<HfSet>& S, HfSet x) {
  if (!S.insert(x).second) return;
  for (HfSet y : x.children()) insert_transitively(S, y);
}

FinitePoset one_point_poset() {
  HfSet o;
  return FinitePoset({o}, {{o, o}}, o);
}

}  // namespace

ForcingContext build_context(const ContextOptions& opts) {
  FinitePoset P = opts.poset ? *opts.poset : one_point_poset();
  HfSet one = P.one();

  std::set<HfSet> S;
  for (HfSet x : opts.seed) insert_transitively(S, x);
  insert_transitively(S, P.carrier_hf());
  insert_transitively(S, P.leq_hf());

  // All subsets of the carrier, so that density-in-M quantifies over every
  // dense subset of P.
  auto carrier = P.carrier();
  for (std::size_t mask = 0; mask < (std::size_t{1} << carrier.size());
       ++mask) {
    std::vector<HfSet> elems;
    for (std::size_t b = 0; b < carrier.size(); ++b)
      if (mask & (std::size_t{1} << b)) elems.push_back(carrier[b]);
    insert_transitively(S, HfSet::make(std::move(elems)));
  }

  if (opts.close_gdot) insert_transitively(S, gdot(P));

  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<HfSet> snapshot(S.begin(), S.end());
    auto add = [&](HfSet x) {
      if (x.rank() <= opts.rank_cap && !S.count(x)) {
        insert_transitively(S, x);
        grew = true;
      }
    };
    for (HfSet x : snapshot) {
      if (opts.close_check) add(check(x, one));
      if (opts.close_domains) add(domain(x));
      if (opts.close_pairs || opts.close_opair_names) {
        for (HfSet y : snapshot) {
          if (opts.close_pairs) add(pair(x, y));
          if (opts.close_opair_names) add(opair_name(x, y, one));
        }
      }
    }
  }

  ForcingContext ctx{.name = opts.name,
                     .M = Structure({S.begin(), S.end()}),
                     .poset = P,
                     .carrier_hf = P.carrier_hf(),
                     .leq_hf = P.leq_hf(),
                     .one = one};

  ctx.gdot_in_M = ctx.M.contains(gdot(P));
  ctx.all_poset_subsets_in_M = true;
  for (std::size_t mask = 0; mask < (std::size_t{1} << carrier.size());
       ++mask) {
    std::vector<HfSet> elems;
    for (std::size_t b = 0; b < carrier.size(); ++b)
      if (mask & (std::size_t{1} << b)) elems.push_back(carrier[b]);
    if (!ctx.M.contains(HfSet::make(std::move(elems))))
      ctx.all_poset_subsets_in_M = false;
  }
  for (HfSet x : ctx.M.elems())
    if (ctx.M.contains(check(x, one))) ctx.check_closed_elems.push_back(x);
  return ctx;
}

ForcingContext trivial_context() {
  ContextOptions o;
  HfSet v3 = vset(3);
  o.seed.assign(v3.children().begin(), v3.children().end());
  o.rank_cap = 6;
  o.name = "trivial";
  return build_context(o);
}

ForcingContext vposet_context() {
  HfSet one;                        // 0
  HfSet a = singleton(one);         // {0}
  HfSet b = singleton(a);           // {{0}}
  FinitePoset P({one, a, b},
                {{one, one}, {a, a}, {b, b}, {a, one}, {b, one}}, one);
  ContextOptions o;
  HfSet v2 = vset(2);
  o.seed.assign(v2.children().begin(), v2.children().end());
  o.poset = P;
  o.rank_cap = 6;
  o.name = "vposet";
  return build_context(o);
}

ForcingContext chain3_context() {
  HfSet one = nat(0), c1 = nat(1), c2 = nat(2);
  FinitePoset P({one, c1, c2},
                {{one, one}, {c1, c1}, {c2, c2},
                 {c1, one}, {c2, one}, {c2, c1}},
                one);
  ContextOptions o;
  HfSet v2 = vset(2);
  o.seed.assign(v2.children().begin(), v2.children().end());
  o.poset = P;
  o.rank_cap = 6;
  o.name = "chain3";
  return build_context(o);
}

std::vector<GenericFilter> all_generic_filters(const ForcingContext& ctx) {
  const FinitePoset& P = ctx.poset;
  auto carrier = P.carrier();
  std::size_t n = carrier.size();
  if (n > 16)
    throw std::invalid_argument("all_generic_filters: carrier too large");

  auto subset_of = [&](std::size_t mask) {
    std::vector<HfSet> elems;
    for (std::size_t b = 0; b < n; ++b)
      if (mask & (std::size_t{1} << b)) elems.push_back(carrier[b]);
    return elems;
  };

  // Dense subsets of P that are elements of M.
  std::vector<std::size_t> dense_masks;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<HfSet> D = subset_of(mask);
    if (!ctx.M.contains(HfSet::make({D.begin(), D.end()}))) continue;
    if (is_dense(P, D)) dense_masks.push_back(mask);
  }

  std::vector<std::pair<std::vector<HfSet>, std::size_t>> found;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    bool generic = true;
    for (std::size_t dm : dense_masks)
      if ((mask & dm) == 0) { generic = false; break; }
    if (!generic) continue;
    std::vector<HfSet> F = subset_of(mask);
    if (!is_filter(P, F)) continue;
    found.emplace_back(std::move(F), mask);
  }
  if (found.empty())
    throw std::logic_error(
        "all_generic_filters: no generic filter on a finite poset");

  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size())
      return a.first.size() < b.first.size();
    return HfSet::make({a.first.begin(), a.first.end()}) <
           HfSet::make({b.first.begin(), b.first.end()});
  });

  std::vector<GenericFilter> out;
  out.reserve(found.size());
  for (auto& [F, mask] : found)
    out.push_back(GenericFilter::explicit_filter(std::move(F)));
  return out;
}

}  // namespace forcing
