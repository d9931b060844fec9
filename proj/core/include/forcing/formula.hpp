#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "forcing/hfset.hpp"

namespace forcing {

enum class FormulaKind : std::uint8_t {
  Member,
  Equal,
  Nand,
  Forall,
  ForcesEq,   // extended atom: atomic equality forcing, carries a p-slot
  ForcesMem,  // extended atom: atomic membership forcing
};

// Internalized first-order formula with de Bruijn indices (0 = the head of
// the environment, i.e. the most recent binding).  Member/Equal/Nand/Forall
// is the complete primitive basis; the two extended atoms appear only in
// transformed formulas.  Immutable; subtrees are shared.
class Formula {
public:
  static Formula member(std::size_t i, std::size_t j);
  static Formula equal(std::size_t i, std::size_t j);
  static Formula nand(Formula lhs, Formula rhs);
  static Formula forall(Formula body);
  static Formula forces_eq(std::size_t p_slot, std::size_t i, std::size_t j);
  static Formula forces_mem(std::size_t p_slot, std::size_t i, std::size_t j);

  FormulaKind kind() const;
  std::size_t index_i() const;   // atoms
  std::size_t index_j() const;   // atoms
  std::size_t p_slot() const;    // extended atoms
  Formula lhs() const;   // Nand
  Formula rhs() const;   // Nand
  Formula body() const;  // Forall

  bool is_pure() const;  // contains no extended atoms
  std::size_t arity() const;

  // Stable identity of the underlying shared node; distinct handles may
  // share identity.  Intended as a cache key for DAG-aware traversals.
  const void* identity() const { return node_.get(); }

  bool operator==(const Formula& other) const;  // structural
  bool operator!=(const Formula& other) const { return !(*this == other); }

  // A condition-order guard marker used by the forcing transformer.  A
  // marked node is semantically the formula it wraps; the marker lets an
  // evaluator answer it from a precomputed order table.  Transparent to
  // equality, printing and satisfaction.
  Formula marked_as_leq_guard(std::size_t q_idx, std::size_t p_idx) const;
  std::optional<std::pair<std::size_t, std::size_t>> leq_guard() const;

  struct Node;  // defined in the implementation

private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

using Env = std::vector<HfSet>;  // position 0 is the head
using Renaming = std::map<std::size_t, std::size_t>;

// Replaces every free index i by rho(i); rho is lifted under binders.
// Throws if rho is undefined on a free index or not injective.
Formula rename(const Formula& f, const Renaming& rho);

// Free de Bruijn indices, sorted ascending.
std::vector<std::size_t> free_indices(const Formula& f);

// Derived connectives over the Nand/Forall basis.
Formula neg(Formula f);
Formula and_(Formula f, Formula g);
Formula or_(Formula f, Formula g);
Formula implies(Formula f, Formula g);
Formula iff_(Formula f, Formula g);
Formula exists(Formula f);

// Finite structure: a carrier with fast membership, quantified over by sats.
class Structure {
public:
  Structure() = default;
  explicit Structure(std::vector<HfSet> elems);  // dedups and sorts
  std::span<const HfSet> elems() const { return elems_; }
  bool contains(HfSet x) const;
  std::size_t size() const { return elems_.size(); }
  HfSet as_hfset() const;

private:
  std::vector<HfSet> elems_;
};

// Tarskian satisfaction over the pure basis.  Throws std::invalid_argument
// if env is shorter than arity(f), std::domain_error if an env entry is
// outside M, std::logic_error on extended atoms.
bool sats(const Structure& M, const Env& env, const Formula& f);

// Internalized formula library.  Fixed concrete ASTs; intended readings:
//   upair_fm(i,j,k):   env[k] = {env[i], env[j]}
//   opair_fm(i,j,k):   env[k] = <env[i], env[j]>  (Kuratowski)
//   leq_member_fm(l,q,p): <env[q], env[p]> is a member of env[l]
Formula upair_fm(std::size_t i, std::size_t j, std::size_t k);
Formula opair_fm(std::size_t i, std::size_t j, std::size_t k);
Formula leq_member_fm(std::size_t l, std::size_t q, std::size_t p);

enum class ZfAxiom { Pairing, Extensionality, Foundation, Union };
Formula zf_axiom(ZfAxiom which);
std::optional<ZfAxiom> zf_axiom_by_name(std::string_view name);
std::string zf_axiom_name(ZfAxiom which);

// S-expression syntax: (Member i j) | (Equal i j) | (Nand f g) | (Forall f)
// | (ForcesEq k i j) | (ForcesMem k i j), plus sugar (Neg f) (And f g)
// (Or f g) (Implies f g) (Iff f g) (Exists f), which parses into the
// primitive basis.  Throws std::invalid_argument with a position on error.
Formula parse_formula(std::string_view text);
std::string print_formula(const Formula& f);

}  // namespace forcing
