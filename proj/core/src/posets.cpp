#include "forcing/posets.hpp"

#include <algorithm>

namespace forcing {

namespace {
std::size_t pack(HfSet q, HfSet p) {
  return q.id() * 0x1f1f1f1f1f1f1f1full ^ p.id();
}
}  // namespace

FinitePoset::FinitePoset(std::vector<HfSet> carrier,
                         std::vector<std::pair<HfSet, HfSet>> leq, HfSet one)
    : carrier_(std::move(carrier)), one_(one) {
  std::sort(carrier_.begin(), carrier_.end(),
            [](HfSet a, HfSet b) { return a < b; });
  carrier_.erase(std::unique(carrier_.begin(), carrier_.end()),
                 carrier_.end());
  if (!in_carrier(one_))
    throw std::invalid_argument("poset: top element not in carrier");
  for (auto& [q, p] : leq) {
    if (!in_carrier(q) || !in_carrier(p))
      throw std::invalid_argument("poset: order pair outside carrier");
    leq_pairs_.insert(pack(q, p));
  }
  for (HfSet p : carrier_) {
    if (!this->leq(p, p))
      throw std::invalid_argument("poset: order not reflexive");
    if (!this->leq(p, one_))
      throw std::invalid_argument("poset: top element is not a top");
  }
  for (HfSet a : carrier_)
    for (HfSet b : carrier_)
      for (HfSet c : carrier_)
        if (this->leq(a, b) && this->leq(b, c) && !this->leq(a, c))
          throw std::invalid_argument("poset: order not transitive");
}

bool FinitePoset::in_carrier(HfSet p) const {
  return std::binary_search(carrier_.begin(), carrier_.end(), p,
                            [](HfSet a, HfSet b) { return a < b; });
}

bool FinitePoset::leq(HfSet q, HfSet p) const {
  return leq_pairs_.count(pack(q, p)) > 0;
}

std::vector<HfSet> FinitePoset::below(HfSet p) const {
  std::vector<HfSet> out;
  for (HfSet q : carrier_)
    if (leq(q, p)) out.push_back(q);
  return out;
}

HfSet FinitePoset::carrier_hf() const {
  return HfSet::make({carrier_.begin(), carrier_.end()});
}

HfSet FinitePoset::leq_hf() const {
  std::vector<HfSet> pairs;
  for (HfSet q : carrier_)
    for (HfSet p : carrier_)
      if (leq(q, p)) pairs.push_back(opair(q, p));
  return HfSet::make(std::move(pairs));
}

bool compat(const FinitePoset& P, HfSet p, HfSet q) {
  if (!P.in_carrier(p) || !P.in_carrier(q))
    throw std::invalid_argument("compat: condition outside carrier");
  for (HfSet r : P.carrier())
    if (P.leq(r, p) && P.leq(r, q)) return true;
  return false;
}

bool incompat(const FinitePoset& P, HfSet p, HfSet q) {
  return !compat(P, p, q);
}

bool is_filter(const FinitePoset& P, const std::vector<HfSet>& F) {
  if (F.empty()) return false;
  auto in_F = [&](HfSet x) {
    return std::find(F.begin(), F.end(), x) != F.end();
  };
  for (HfSet p : F) {
    if (!P.in_carrier(p)) return false;
    // upward closed
    for (HfSet r : P.carrier())
      if (P.leq(p, r) && !in_F(r)) return false;
    // downward directed
    for (HfSet q : F) {
      bool met = false;
      for (HfSet r : F)
        if (P.leq(r, p) && P.leq(r, q)) { met = true; break; }
      if (!met) return false;
    }
  }
  return true;
}

bool is_dense(const FinitePoset& P, const std::vector<HfSet>& D) {
  auto in_D = [&](HfSet x) {
    return std::find(D.begin(), D.end(), x) != D.end();
  };
  for (HfSet p : P.carrier()) {
    bool hit = false;
    for (HfSet q : P.carrier())
      if (P.leq(q, p) && in_D(q)) { hit = true; break; }
    if (!hit) return false;
  }
  return true;
}

bool dense_below(const FinitePoset& P, const std::function<bool(HfSet)>& in_D,
                 HfSet p) {
  for (HfSet q : P.carrier()) {
    if (!P.leq(q, p)) continue;
    bool hit = false;
    for (HfSet r : P.carrier())
      if (P.leq(r, q) && in_D(r)) { hit = true; break; }
    if (!hit) return false;
  }
  return true;
}

bool dense_below(const FinitePoset& P, const std::vector<HfSet>& D, HfSet p) {
  return dense_below(
      P,
      [&](HfSet x) { return std::find(D.begin(), D.end(), x) != D.end(); },
      p);
}

Tri is_dense(const CountablePoset& P, const DenseSet& D, std::size_t bound) {
  const auto& ext = P.extensions;
  for (std::size_t i = 0; i < bound; ++i) {
    HfSet p = P.enumerate(i);
    bool hit = false;
    bool exhausted = false;  // candidate stream ran out below p
    for (std::size_t k = 0; k < bound; ++k) {
      std::optional<HfSet> q =
          ext ? ext(p, k) : std::optional<HfSet>(P.enumerate(k));
      if (!q) { exhausted = true; break; }
      if (!P.leq(*q, p)) continue;
      if (D.contains(*q)) { hit = true; break; }
    }
    if (hit) continue;
    return exhausted ? Tri::False : Tri::Undecided;
  }
  return Tri::True;
}

RslFilter::RslFilter(CountablePoset P, std::vector<DenseSet> denses,
                     std::size_t bound)
    : poset_(std::move(P)), bound_(bound) {
  chain_.push_back(poset_.one);
  for (const DenseSet& D : denses) step_into(D);
}

HfSet RslFilter::step_into(const DenseSet& D) {
  HfSet last = chain_.back();
  for (std::size_t k = 0; k < bound_; ++k) {
    std::optional<HfSet> q;
    if (poset_.extensions) {
      q = poset_.extensions(last, k);
      if (!q) break;
    } else {
      HfSet cand = poset_.enumerate(k);
      if (!poset_.leq(cand, last)) continue;
      q = cand;
    }
    if (D.contains(*q)) {
      chain_.push_back(*q);
      return *q;
    }
  }
  throw DensityBoundError(D.name.empty() ? "<unnamed dense set>" : D.name);
}

bool RslFilter::contains(HfSet r) {
  std::scoped_lock lock(mu_);
  if (auto it = decided_.find(r); it != decided_.end()) return it->second;
  auto decided_by_chain = [&]() -> std::optional<bool> {
    for (HfSet p : chain_)
      if (poset_.leq(p, r)) return true;
    // incompatible with a chain element: never enters the upward closure
    HfSet last = chain_.back();
    bool compat_last = false;
    for (std::size_t k = 0; k < bound_; ++k) {
      std::optional<HfSet> q;
      if (poset_.extensions) {
        q = poset_.extensions(last, k);
        if (!q) break;
      } else {
        HfSet cand = poset_.enumerate(k);
        if (!poset_.leq(cand, last)) continue;
        q = cand;
      }
      if (poset_.leq(*q, r)) { compat_last = true; break; }
    }
    if (!compat_last) return false;
    return std::nullopt;
  };
  if (auto d = decided_by_chain()) {
    decided_[r] = *d;
    return *d;
  }
  // Extend with the decision-dense set for r, then read the chain.
  DenseSet dec{[this, r](HfSet q) {
                 if (poset_.leq(q, r)) return true;
                 // q incompatible with r: no common extension within bound
                 for (std::size_t k = 0; k < bound_; ++k) {
                   std::optional<HfSet> s;
                   if (poset_.extensions) {
                     s = poset_.extensions(q, k);
                     if (!s) break;
                   } else {
                     HfSet cand = poset_.enumerate(k);
                     if (!poset_.leq(cand, q)) continue;
                     s = cand;
                   }
                   if (poset_.leq(*s, r)) return false;
                 }
                 return true;
               },
               "decision(" + print_hf(r) + ")"};
  HfSet witness = step_into(dec);
  bool ans = poset_.leq(witness, r);
  if (!ans)
    for (HfSet p : chain_)
      if (poset_.leq(p, r)) { ans = true; break; }
  decided_[r] = ans;
  return ans;
}

std::vector<HfSet> RslFilter::chain() const {
  std::scoped_lock lock(mu_);
  return chain_;
}

GenericFilter GenericFilter::explicit_filter(std::vector<HfSet> elems) {
  GenericFilter g;
  g.elems_ = std::move(elems);
  std::sort(g.elems_.begin(), g.elems_.end(),
            [](HfSet a, HfSet b) { return a < b; });
  g.elems_.erase(std::unique(g.elems_.begin(), g.elems_.end()),
                 g.elems_.end());
  return g;
}

GenericFilter GenericFilter::lazy(std::shared_ptr<RslFilter> rsl) {
  GenericFilter g;
  g.rsl_ = std::move(rsl);
  return g;
}

bool GenericFilter::contains(HfSet p) const {
  if (rsl_) return rsl_->contains(p);
  return std::binary_search(elems_.begin(), elems_.end(), p,
                            [](HfSet a, HfSet b) { return a < b; });
}

const std::vector<HfSet>& GenericFilter::elems() const {
  if (rsl_) throw std::logic_error("elems() on a lazy filter");
  return elems_;
}

HfSet GenericFilter::as_hfset() const {
  if (rsl_) throw std::logic_error("as_hfset() on a lazy filter");
  return HfSet::make({elems_.begin(), elems_.end()});
}

RslFilter make_rsl_filter(const CountablePoset& P,
                          const std::vector<DenseSet>& denses,
                          std::size_t bound) {
  return RslFilter(P, denses, bound);
}

namespace {

HfSet bit_set(int bit) { return bit ? singleton(HfSet()) : HfSet(); }

// Sequences in length-then-lexicographic order with 0 before 1: index k
// maps to the binary digits of k+1 with the leading 1 removed.
std::vector<int> index_to_bits(std::size_t k) {
  std::size_t v = k + 1;
  std::vector<int> bits;
  while (v > 1) {
    bits.push_back(static_cast<int>(v & 1));
    v >>= 1;
  }
  std::reverse(bits.begin(), bits.end());
  return bits;
}

}  // namespace

HfSet cohen_encode(std::span<const int> bits) {
  std::vector<HfSet> graph;
  for (std::size_t i = 0; i < bits.size(); ++i)
    graph.push_back(opair(nat(i), bit_set(bits[i])));
  return HfSet::make(std::move(graph));
}

std::vector<int> cohen_decode(HfSet f) {
  std::vector<std::optional<int>> slots;
  for (HfSet m : f.children()) {
    auto p = as_opair(m);
    if (!p) throw std::invalid_argument("cohen: member is not a pair");
    auto i = as_nat(p->first);
    if (!i) throw std::invalid_argument("cohen: index is not an ordinal");
    int b;
    if (p->second == HfSet()) b = 0;
    else if (p->second == singleton(HfSet())) b = 1;
    else throw std::invalid_argument("cohen: value is not a bit");
    if (slots.size() <= *i) slots.resize(*i + 1);
    if (slots[*i]) throw std::invalid_argument("cohen: not a function graph");
    slots[*i] = b;
  }
  std::vector<int> bits;
  for (auto& s : slots) {
    if (!s) throw std::invalid_argument("cohen: domain is not an ordinal");
    bits.push_back(*s);
  }
  return bits;
}

HfSet seq_upd(HfSet f, int bit) {
  std::vector<int> bits = cohen_decode(f);
  bits.push_back(bit);
  return cohen_encode(bits);
}

CountablePoset cohen_poset() {
  CountablePoset P;
  P.one = cohen_encode({});
  P.contains = [](HfSet f) {
    try {
      cohen_decode(f);
      return true;
    } catch (const std::invalid_argument&) {
      return false;
    }
  };
  // reverse inclusion: q <= p iff q extends p
  P.leq = [](HfSet q, HfSet p) { return subset(p, q); };
  P.enumerate = [](std::size_t k) { return cohen_encode(index_to_bits(k)); };
  // Extensions of p in enumeration order are p followed by each suffix,
  // suffixes taken in the same length-then-lex order (empty suffix first).
  P.extensions = [](HfSet p, std::size_t k) -> std::optional<HfSet> {
    std::vector<int> bits = cohen_decode(p);
    if (k > 0) {
      std::vector<int> suffix = index_to_bits(k - 1);
      bits.insert(bits.end(), suffix.begin(), suffix.end());
    }
    return cohen_encode(bits);
  };
  return P;
}

bool is_separative(const CountablePoset& P, std::span<const HfSet> probes) {
  for (HfSet f : probes) {
    HfSet a = seq_upd(f, 0), b = seq_upd(f, 1);
    // two incompatible extensions
    if (!P.leq(a, f) || !P.leq(b, f)) return false;
    if (P.leq(a, b) || P.leq(b, a)) return false;
  }
  return true;
}

}  // namespace forcing
