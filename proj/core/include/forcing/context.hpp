#pragma once

#include <optional>
#include <string>
#include <vector>

#include "forcing/formula.hpp"
#include "forcing/hfset.hpp"
#include "forcing/posets.hpp"

namespace forcing {

// A finite transitive ground model together with a forcing notion whose
// carrier, order graph and top element are elements of the model.
struct ForcingContext {
  std::string name;
  Structure M;
  FinitePoset poset;
  HfSet carrier_hf, leq_hf, one;

  // Closure diagnostics, reported rather than assumed.
  bool gdot_in_M = false;
  bool all_poset_subsets_in_M = false;  // M-genericity = full genericity
  std::vector<HfSet> check_closed_elems;  // x in M with check(x) in M

  bool in_M(HfSet x) const { return M.contains(x); }
};

struct ContextOptions {
  std::vector<HfSet> seed;  // closed under transitive closure by the builder
  std::optional<FinitePoset> poset;
  std::size_t rank_cap = 6;
  bool close_check = true;
  bool close_gdot = true;
  bool close_opair_names = false;
  bool close_pairs = false;
  bool close_domains = false;
  // Subsets of the carrier are always added, so M-genericity coincides
  // with genericity for all dense sets.
  std::string name = "custom";
};

ForcingContext build_context(const ContextOptions& opts);

// The three shipped contexts.
ForcingContext trivial_context();  // one-point poset over name-closed vset(3)
ForcingContext vposet_context();   // {1,a,b} with a,b below 1, a incompatible with b
ForcingContext chain3_context();   // three-element chain

// All filters on P meeting every dense subset of P that is an element of M,
// in a deterministic order.
std::vector<GenericFilter> all_generic_filters(const ForcingContext& ctx);

}  // namespace forcing
