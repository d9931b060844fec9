#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "forcing/context.hpp"
#include "forcing/formula.hpp"
#include "forcing/hfset.hpp"

namespace forcing {

// A node of the atomic-forcing recursion: flag, two names, a condition.
struct FTuple {
  bool is_mem = false;  // false: equality flag, true: membership flag
  HfSet t1, t2, p;

  friend bool operator==(const FTuple& a, const FTuple& b) {
    return a.is_mem == b.is_mem && a.t1 == b.t1 && a.t2 == b.t2 && a.p == b.p;
  }
};

// a is an immediate recursive predecessor of b: a mem-call on (s, t_i) with
// s in dom(t1) u dom(t2) spawned by an eq-call on (t1, t2), or an eq-call
// on (t1, s) with <s,r> in t2 spawned by a mem-call on (t1, t2).  The
// conditions of a and b are unconstrained.
bool frecR(const FTuple& a, const FTuple& b);

struct FrecProbe {
  bool acyclic = true;
  std::size_t max_depth = 0;  // longest predecessor path from the root
  std::size_t nodes = 0;
};

// Explores the call graph spawned from root (conditions drawn from conds).
FrecProbe probe_frecR(const FTuple& root, std::span<const HfSet> conds);

// Deliberate defects of the atomic-forcing recursion, used by the mutation
// sensitivity suite.
enum class AtomicMutant {
  None,
  DropWitnessOrder,   // membership case: forget "q is stronger than r"
  EqAtPointOnly,      // equality case: test only q = p instead of all q <= p
  EqIffToImplies,     // equality case: one-sided implication
  MemNoDensity,       // membership case: demand the witness at p itself
};

// Forcing evaluation bound to one ground context.  Atomic forcing is
// memoized per evaluator; instances are independent and, after
// precompute(), read-only.
class ForcesEvaluator {
public:
  explicit ForcesEvaluator(const ForcingContext& ctx,
                           AtomicMutant mutant = AtomicMutant::None);

  const ForcingContext& ctx() const { return *ctx_; }

  // Eq. and membership cases of the atomic recursion.  p must be a
  // condition; the names may be any HF sets.
  bool forces_eq(HfSet p, HfSet t1, HfSet t2);
  bool forces_mem(HfSet p, HfSet t1, HfSet t2);

  // Satisfaction extended to ForcesEq/ForcesMem atoms: the atom holds iff
  // env[k] is a condition and the corresponding atomic relation holds on
  // (env[i], env[j]); a non-condition in the p-slot makes the atom false.
  bool sats_x(const Env& env, const Formula& f);

  // p forces phi: satisfaction of the transformed formula with the fixed
  // prefix [p, P, leq, one] in front of env.
  bool forces_holds(HfSet p, const Formula& phi, const Env& env);

  // Same, with the transform already done (per-formula hoisting).
  bool forces_holds_transformed(HfSet p, const Formula& transformed,
                                const Env& env);

  // Precomputes the atomic tables over M x M and the order guard table;
  // afterwards concurrent const use is safe.
  void precompute();

  // Order guard evaluated the long way: naive satisfaction of the guard
  // formula in M.  Used to cross-check the table.
  bool guard_by_sats(HfSet q, HfSet p) const;

private:
  bool atomic(bool is_mem, HfSet p, HfSet t1, HfSet t2);
  bool sats_x_rec(std::vector<HfSet>& stack, const Formula& f);
  bool leq_guard_value(HfSet q, HfSet p);

  const ForcingContext* ctx_;
  AtomicMutant mutant_;
  std::unordered_map<std::size_t, bool> atomic_memo_;
  std::unordered_map<std::size_t, bool> guard_memo_;
  bool frozen_ = false;
};

// One-shot conveniences matching the evaluator methods.
bool forces_eq(const ForcingContext& ctx, HfSet p, HfSet t1, HfSet t2);
bool forces_mem(const ForcingContext& ctx, HfSet p, HfSet t1, HfSet t2);
bool forces_holds(const ForcingContext& ctx, HfSet p, const Formula& phi,
                  const Env& env);

// The syntactic transformer.  Pure in, extended out; the fixed prefix
// convention is env' = [p, P, leq, one] @ env.
Formula forces_transform(const Formula& phi);

// The canonical guard "index 0 is a condition at least as strong as the
// condition at index 1", over the prefix layout [q, p, P, leq, one].
Formula forces_nand_guard();

}  // namespace forcing
