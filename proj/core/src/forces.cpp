#include "forcing/forces.hpp"

#include <stdexcept>

#include "forcing/names.hpp"

namespace forcing {

namespace {

constexpr std::size_t kIdBits = 21;  // interned ids must fit three to a word

std::size_t checked_id(HfSet x) {
  std::size_t id = x.id();
  if (id >= (std::size_t{1} << kIdBits))
    throw std::length_error("forces: interned universe grew past key space");
  return id;
}

std::size_t atomic_key(bool is_mem, HfSet p, HfSet t1, HfSet t2) {
  return (((checked_id(t1) << kIdBits | checked_id(t2)) << kIdBits |
           checked_id(p))
          << 1) |
         (is_mem ? 1 : 0);
}

std::size_t guard_key(HfSet q, HfSet p) {
  return checked_id(q) << kIdBits | checked_id(p);
}

}  // namespace

bool frecR(const FTuple& a, const FTuple& b) {
  if (!b.is_mem) {
    // eq-call on (t1,t2) spawns mem-calls on (s, t1) and (s, t2) for
    // s in dom(t1) u dom(t2)
    return a.is_mem && (a.t2 == b.t1 || a.t2 == b.t2) &&
           (ed(a.t1, b.t1) || ed(a.t1, b.t2));
  }
  // mem-call on (t1,t2) spawns eq-calls on (t1, s) for <s,r> in t2
  return !a.is_mem && a.t1 == b.t1 && ed(a.t2, b.t2);
}

namespace {

std::vector<FTuple> frec_predecessors(const FTuple& b,
                                      std::span<const HfSet> conds) {
  std::vector<FTuple> out;
  if (!b.is_mem) {
    HfSet dom_union = HfSet::make({domain(b.t1), domain(b.t2)});
    for (HfSet s : union_of(dom_union).children())
      for (HfSet t : {b.t1, b.t2})
        for (HfSet q : conds) out.push_back(FTuple{true, s, t, q});
  } else {
    for (HfSet s : domain(b.t2).children())
      for (HfSet q : conds) out.push_back(FTuple{false, b.t1, s, q});
  }
  return out;
}

struct FTupleKeyHash {
  std::size_t operator()(const FTuple& t) const {
    std::size_t h = t.is_mem;
    for (std::size_t v : {t.t1.id(), t.t2.id(), t.p.id()})
      h = h * 1099511628211ull ^ v;
    return h;
  }
};

}  // namespace

FrecProbe probe_frecR(const FTuple& root, std::span<const HfSet> conds) {
  FrecProbe probe;
  // color: 1 = on stack, 2 = done (depth memoized)
  std::unordered_map<FTuple, int, FTupleKeyHash> color;
  std::unordered_map<FTuple, std::size_t, FTupleKeyHash> depth;

  auto dfs = [&](auto&& self, const FTuple& t) -> std::size_t {
    if (auto it = color.find(t); it != color.end()) {
      if (it->second == 1) {
        probe.acyclic = false;
        return 0;
      }
      return depth[t];
    }
    color[t] = 1;
    ++probe.nodes;
    std::size_t d = 0;
    for (const FTuple& pred : frec_predecessors(t, conds)) {
      if (!frecR(pred, t))
        throw std::logic_error("frecR disagrees with its own spawn rule");
      d = std::max(d, self(self, pred) + 1);
      if (!probe.acyclic) break;
    }
    color[t] = 2;
    depth[t] = d;
    return d;
  };
  probe.max_depth = dfs(dfs, root);
  return probe;
}

ForcesEvaluator::ForcesEvaluator(const ForcingContext& ctx,
                                 AtomicMutant mutant)
    : ctx_(&ctx), mutant_(mutant) {}

bool ForcesEvaluator::atomic(bool is_mem, HfSet p, HfSet t1, HfSet t2) {
  std::size_t key = atomic_key(is_mem, p, t1, t2);
  if (auto it = atomic_memo_.find(key); it != atomic_memo_.end())
    return it->second;
  if (frozen_)
    throw std::logic_error("forces: cache miss after precompute()");
  const FinitePoset& P = ctx_->poset;
  bool result;
  if (!is_mem) {
    // Equality: for every s in dom(t1) u dom(t2) and every q at least as
    // strong as p, membership of s in t1 and in t2 is forced alike.
    result = true;
    HfSet doms = union_of(HfSet::make({domain(t1), domain(t2)}));
    for (HfSet s : doms.children()) {
      for (HfSet q : P.carrier()) {
        bool relevant = mutant_ == AtomicMutant::EqAtPointOnly ? q == p
                                                               : P.leq(q, p);
        if (!relevant) continue;
        bool in1 = atomic(true, q, s, t1);
        bool in2 = atomic(true, q, s, t2);
        bool ok = mutant_ == AtomicMutant::EqIffToImplies ? (!in1 || in2)
                                                          : (in1 == in2);
        if (!ok) { result = false; break; }
      }
      if (!result) break;
    }
  } else if (mutant_ == AtomicMutant::MemNoDensity) {
    result = false;
    for (HfSet m : t2.children()) {
      auto sr = as_opair(m);
      if (!sr || !P.in_carrier(sr->second)) continue;
      if (P.leq(p, sr->second) && atomic(false, p, t1, sr->first)) {
        result = true;
        break;
      }
    }
  } else {
    // Membership: the witness set {q <= p : exists <s,r> in t2 with
    // q <= r and (q forces t1 = s)} is dense below p.
    result = true;
    for (HfSet v : P.carrier()) {
      if (!P.leq(v, p)) continue;
      bool hit = false;
      for (HfSet q : P.carrier()) {
        if (!P.leq(q, v)) continue;
        for (HfSet m : t2.children()) {
          auto sr = as_opair(m);
          if (!sr || !P.in_carrier(sr->second)) continue;
          if (mutant_ != AtomicMutant::DropWitnessOrder &&
              !P.leq(q, sr->second))
            continue;
          if (atomic(false, q, t1, sr->first)) { hit = true; break; }
        }
        if (hit) break;
      }
      if (!hit) { result = false; break; }
    }
  }
  atomic_memo_[key] = result;
  return result;
}

bool ForcesEvaluator::forces_eq(HfSet p, HfSet t1, HfSet t2) {
  if (!ctx_->poset.in_carrier(p))
    throw std::invalid_argument("forces_eq: condition outside carrier");
  return atomic(false, p, t1, t2);
}

bool ForcesEvaluator::forces_mem(HfSet p, HfSet t1, HfSet t2) {
  if (!ctx_->poset.in_carrier(p))
    throw std::invalid_argument("forces_mem: condition outside carrier");
  return atomic(true, p, t1, t2);
}

bool ForcesEvaluator::leq_guard_value(HfSet q, HfSet p) {
  std::size_t key = guard_key(q, p);
  if (auto it = guard_memo_.find(key); it != guard_memo_.end())
    return it->second;
  if (frozen_) throw std::logic_error("forces: cache miss after precompute()");
  const FinitePoset& P = ctx_->poset;
  bool v = P.in_carrier(q) && P.in_carrier(p) && P.leq(q, p);
  guard_memo_[key] = v;
  return v;
}

bool ForcesEvaluator::guard_by_sats(HfSet q, HfSet p) const {
  Env env{q, p, ctx_->carrier_hf, ctx_->leq_hf, ctx_->one};
  return sats(ctx_->M, env, forces_nand_guard());
}

bool ForcesEvaluator::sats_x_rec(std::vector<HfSet>& stack, const Formula& f) {
  auto at = [&](std::size_t idx) -> HfSet {
    return stack[stack.size() - 1 - idx];
  };
  if (auto g = f.leq_guard()) return leq_guard_value(at(g->first), at(g->second));
  switch (f.kind()) {
    case FormulaKind::Member:
      return mem(at(f.index_i()), at(f.index_j()));
    case FormulaKind::Equal:
      return at(f.index_i()) == at(f.index_j());
    case FormulaKind::Nand:
      return !(sats_x_rec(stack, f.lhs()) && sats_x_rec(stack, f.rhs()));
    case FormulaKind::Forall:
      for (HfSet x : ctx_->M.elems()) {
        stack.push_back(x);
        bool ok = sats_x_rec(stack, f.body());
        stack.pop_back();
        if (!ok) return false;
      }
      return true;
    case FormulaKind::ForcesEq:
    case FormulaKind::ForcesMem: {
      HfSet cond = at(f.p_slot());
      if (!ctx_->poset.in_carrier(cond)) return false;
      return atomic(f.kind() == FormulaKind::ForcesMem, cond, at(f.index_i()),
                    at(f.index_j()));
    }
  }
  return false;
}

bool ForcesEvaluator::sats_x(const Env& env, const Formula& f) {
  if (env.size() < f.arity())
    throw std::invalid_argument("sats_x: environment shorter than arity");
  for (HfSet e : env)
    if (!ctx_->M.contains(e))
      throw std::domain_error("sats_x: environment entry outside M");
  std::vector<HfSet> stack(env.rbegin(), env.rend());
  return sats_x_rec(stack, f);
}

bool ForcesEvaluator::forces_holds(HfSet p, const Formula& phi,
                                   const Env& env) {
  return forces_holds_transformed(p, forces_transform(phi), env);
}

bool ForcesEvaluator::forces_holds_transformed(HfSet p,
                                               const Formula& transformed,
                                               const Env& env) {
  if (!ctx_->poset.in_carrier(p))
    throw std::invalid_argument("forces_holds: condition outside carrier");
  Env full{p, ctx_->carrier_hf, ctx_->leq_hf, ctx_->one};
  full.insert(full.end(), env.begin(), env.end());
  return sats_x(full, transformed);
}

void ForcesEvaluator::precompute() {
  for (HfSet t1 : ctx_->M.elems())
    for (HfSet t2 : ctx_->M.elems())
      for (HfSet p : ctx_->poset.carrier()) {
        atomic(false, p, t1, t2);
        atomic(true, p, t1, t2);
      }
  for (HfSet q : ctx_->M.elems())
    for (HfSet p : ctx_->M.elems()) leq_guard_value(q, p);
  frozen_ = true;
}

bool forces_eq(const ForcingContext& ctx, HfSet p, HfSet t1, HfSet t2) {
  ForcesEvaluator ev(ctx);
  return ev.forces_eq(p, t1, t2);
}

bool forces_mem(const ForcingContext& ctx, HfSet p, HfSet t1, HfSet t2) {
  ForcesEvaluator ev(ctx);
  return ev.forces_mem(p, t1, t2);
}

bool forces_holds(const ForcingContext& ctx, HfSet p, const Formula& phi,
                  const Env& env) {
  ForcesEvaluator ev(ctx);
  return ev.forces_holds(p, phi, env);
}

Formula forces_nand_guard() {
  // Layout under the fresh binder: [q, p, P, leq, one].
  static const Formula guard =
      and_(Formula::member(0, 2), leq_member_fm(3, 0, 1))
          .marked_as_leq_guard(0, 1);
  return guard;
}

Formula forces_transform(const Formula& phi) {
  switch (phi.kind()) {
    case FormulaKind::Member:
      return Formula::forces_mem(0, phi.index_i() + 4, phi.index_j() + 4);
    case FormulaKind::Equal:
      return Formula::forces_eq(0, phi.index_i() + 4, phi.index_j() + 4);
    case FormulaKind::ForcesEq:
    case FormulaKind::ForcesMem:
      throw std::invalid_argument("forces_transform: expects a pure formula");
    case FormulaKind::Nand: {
      Formula a = forces_transform(phi.lhs());
      Formula b = forces_transform(phi.rhs());
      // Under the fresh binder the p-slot points at the new q and every
      // other index shifts by one.
      std::size_t hi = std::max(a.arity(), b.arity());
      Renaming shift;
      shift[0] = 0;
      for (std::size_t i = 1; i <= hi; ++i) shift[i] = i + 1;
      Formula ax = rename(a, shift), bx = rename(b, shift);
      // No q at least as strong as p satisfies both subformulas.
      return neg(exists(and_(forces_nand_guard(), and_(ax, bx))));
    }
    case FormulaKind::Forall: {
      Formula body = forces_transform(phi.body());
      // body reads [p,P,leq,one,x] @ env; the wrapping binder prepends x,
      // so route slot 4 to the bound position and push the prefix along.
      Renaming rho;
      rho[0] = 1; rho[1] = 2; rho[2] = 3; rho[3] = 4; rho[4] = 0;
      for (std::size_t i = 5; i <= std::max<std::size_t>(body.arity(), 5);
           ++i)
        rho[i] = i;
      return Formula::forall(rename(body, rho));
    }
  }
  throw std::logic_error("forces_transform: unreachable");
}

}  // namespace forcing
