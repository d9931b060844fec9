#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "forcing/hfset.hpp"

namespace forcing {

// Raised when a lazy construction exhausts its search bound without finding
// a witness in a supposedly dense set.
class DensityBoundError : public std::runtime_error {
public:
  explicit DensityBoundError(const std::string& dense_name)
      : std::runtime_error("density bound exceeded while searching " +
                           dense_name),
        dense_name_(dense_name) {}
  const std::string& dense_name() const { return dense_name_; }

private:
  std::string dense_name_;
};

// A forcing notion: finite preorder with a top element.  q <= p reads
// "q is stronger than p".
class FinitePoset {
public:
  // Validates reflexivity, transitivity and the top element; throws
  // std::invalid_argument otherwise.
  FinitePoset(std::vector<HfSet> carrier,
              std::vector<std::pair<HfSet, HfSet>> leq, HfSet one);

  std::span<const HfSet> carrier() const { return carrier_; }
  bool in_carrier(HfSet p) const;
  bool leq(HfSet q, HfSet p) const;  // q is stronger than p
  HfSet one() const { return one_; }
  std::vector<HfSet> below(HfSet p) const;  // {q in carrier : q <= p}

  HfSet carrier_hf() const;  // carrier as an HF set
  HfSet leq_hf() const;      // order graph as an HF set of Kuratowski pairs

private:
  std::vector<HfSet> carrier_;  // canonically sorted
  std::unordered_set<std::size_t> leq_pairs_;  // packed (q,p) ids
  HfSet one_;
};

bool compat(const FinitePoset& P, HfSet p, HfSet q);
bool incompat(const FinitePoset& P, HfSet p, HfSet q);

bool is_filter(const FinitePoset& P, const std::vector<HfSet>& F);
bool is_dense(const FinitePoset& P, const std::vector<HfSet>& D);
bool dense_below(const FinitePoset& P, const std::vector<HfSet>& D, HfSet p);
bool dense_below(const FinitePoset& P,
                 const std::function<bool(HfSet)>& in_D, HfSet p);

// A countable forcing notion given by tests plus a total enumeration that
// is surjective onto the carrier.
struct CountablePoset {
  std::function<bool(HfSet)> contains;
  std::function<bool(HfSet, HfSet)> leq;  // leq(q,p): q stronger than p
  HfSet one;
  std::function<HfSet(std::size_t)> enumerate;
  // k-th element below p in enumeration order; nullopt when exhausted.
  // Optional; derived from `enumerate` when absent.
  std::function<std::optional<HfSet>(HfSet, std::size_t)> extensions;
};

struct DenseSet {
  std::function<bool(HfSet)> contains;
  std::string name;
};

enum class Tri { False, True, Undecided };

// Density probe along the enumeration, three-valued within the bound.
Tri is_dense(const CountablePoset& P, const DenseSet& D, std::size_t bound);

// Rasiowa-Sikorski chain: p0 = one, p_{n+1} = first enumerated q <= p_n
// with q in denses[n].  Membership queries extend the chain with the
// decision-dense set {q : q <= r or q incompatible with r} on demand;
// decisions are memoized, so repeated queries agree.
class RslFilter {
public:
  RslFilter(CountablePoset P, std::vector<DenseSet> denses, std::size_t bound);

  bool contains(HfSet r);  // may grow the chain; thread-safe
  std::vector<HfSet> chain() const;
  const CountablePoset& poset() const { return poset_; }

private:
  HfSet step_into(const DenseSet& D);  // extend chain by one element

  CountablePoset poset_;
  std::size_t bound_;
  mutable std::mutex mu_;
  std::vector<HfSet> chain_;
  std::unordered_map<HfSet, bool, HfSet::Hash> decided_;
};

// Either an explicit finite filter or a lazy RSL-backed one.
class GenericFilter {
public:
  static GenericFilter explicit_filter(std::vector<HfSet> elems);
  static GenericFilter lazy(std::shared_ptr<RslFilter> rsl);

  bool is_explicit() const { return rsl_ == nullptr; }
  bool contains(HfSet p) const;
  const std::vector<HfSet>& elems() const;       // explicit only
  HfSet as_hfset() const;                        // explicit only
  const std::shared_ptr<RslFilter>& rsl() const { return rsl_; }

private:
  std::vector<HfSet> elems_;  // sorted
  std::shared_ptr<RslFilter> rsl_;
};

RslFilter make_rsl_filter(const CountablePoset& P,
                          const std::vector<DenseSet>& denses,
                          std::size_t bound);

// The Cohen succession poset: finite binary sequences (encoded as HF
// function graphs over finite ordinals) ordered by reverse inclusion.
CountablePoset cohen_poset();
HfSet cohen_encode(std::span<const int> bits);
std::vector<int> cohen_decode(HfSet f);  // throws if not a binary sequence
HfSet seq_upd(HfSet f, int bit);         // appends a bit

// Every probed element has two incompatible extensions.
bool is_separative(const CountablePoset& P, std::span<const HfSet> probes);

}  // namespace forcing
