#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace forcing {

// A canonical hereditarily finite set.  Values are interned: two handles
// are equal iff they denote the same set, and children are kept strictly
// sorted under the canonical order with duplicates removed.  Handles are
// cheap to copy and safe to share across threads.
class HfSet {
public:
  HfSet();  // the empty set

  // The canonical set whose members are exactly the distinct inputs.
  static HfSet make(std::vector<HfSet> elems);

  std::span<const HfSet> children() const;
  std::size_t card() const { return children().size(); }
  bool is_empty() const { return card() == 0; }
  std::size_t rank() const;
  std::size_t id() const;  // interning id, stable within a process

  friend bool operator==(HfSet a, HfSet b) { return a.node_ == b.node_; }
  friend bool operator!=(HfSet a, HfSet b) { return a.node_ != b.node_; }

  // Canonical total order: child sequences compared lexicographically
  // under this same order.
  static std::strong_ordering compare(HfSet a, HfSet b);
  friend bool operator<(HfSet a, HfSet b) {
    return compare(a, b) == std::strong_ordering::less;
  }

  struct Hash {
    std::size_t operator()(HfSet s) const;
  };

  struct Node;  // defined in the implementation

private:
  explicit HfSet(const Node* n) : node_(n) {}
  const Node* node_;
};

bool mem(HfSet x, HfSet y);
bool subset(HfSet x, HfSet y);
bool is_transitive(HfSet x);
std::size_t rank(HfSet x);

// Least transitive superset of the members of x (x itself excluded).
HfSet transitive_closure(HfSet x);

HfSet empty_set();
HfSet singleton(HfSet x);
HfSet pair(HfSet x, HfSet y);
HfSet opair(HfSet x, HfSet y);  // Kuratowski {{x},{x,y}}

// Decomposes a Kuratowski pair; nullopt if x is not one.
std::optional<std::pair<HfSet, HfSet>> as_opair(HfSet x);

// First components of the Kuratowski pairs among r's members; non-pair
// members contribute nothing.
HfSet domain(HfSet r);
HfSet cartprod(HfSet a, HfSet b);
HfSet union_of(HfSet x);

bool is_ordinal(HfSet x);
HfSet nat(std::size_t n);  // von Neumann ordinal
std::optional<std::size_t> as_nat(HfSet x);
HfSet vset(std::size_t n);  // n-th cumulative stage

// Minimal k < bound with pred(k), if any.
std::optional<std::size_t> least(const std::function<bool(std::size_t)>& pred,
                                 std::size_t bound);

// Textual notation: `0` for the empty set, `{a,b,...}` for sets, `<a,b>`
// parses into a Kuratowski pair.  Whitespace-insensitive.
HfSet parse_hf(std::string_view text);
std::string print_hf(HfSet x);

}  // namespace forcing
