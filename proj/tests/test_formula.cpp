#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <memory>
#include <stdexcept>
#include <vector>

#include "forcing/formula.hpp"
#include "forcing/harness.hpp"  // enumerate_formulas
#include "forcing/hfset.hpp"

using namespace forcing;

namespace {

Structure stage(std::size_t n) {
  HfSet v = vset(n);
  return Structure({v.children().begin(), v.children().end()});
}

// Independent evaluator for an enriched connective AST, used as an oracle
// against the Nand/Forall abbreviations.
struct Enriched {
  enum Op { Atom, Neg, And, Or, Implies, Iff, Exists } op;
  Formula atom = Formula::member(0, 0);
  std::shared_ptr<Enriched> a, b;
};

bool eval_enriched(const Structure& M, Env env, const Enriched& e) {
  switch (e.op) {
    case Enriched::Atom:
      return sats(M, env, e.atom);
    case Enriched::Neg:
      return !eval_enriched(M, env, *e.a);
    case Enriched::And:
      return eval_enriched(M, env, *e.a) && eval_enriched(M, env, *e.b);
    case Enriched::Or:
      return eval_enriched(M, env, *e.a) || eval_enriched(M, env, *e.b);
    case Enriched::Implies:
      return !eval_enriched(M, env, *e.a) || eval_enriched(M, env, *e.b);
    case Enriched::Iff:
      return eval_enriched(M, env, *e.a) == eval_enriched(M, env, *e.b);
    case Enriched::Exists:
      for (HfSet x : M.elems()) {
        Env inner = env;
        inner.insert(inner.begin(), x);
        if (eval_enriched(M, inner, *e.a)) return true;
      }
      return false;
  }
  return false;
}

}  // namespace

TEST_CASE("arity") {
  CHECK(Formula::member(0, 1).arity() == 2);
  CHECK(Formula::forall(Formula::member(0, 1)).arity() == 1);
  CHECK(Formula::nand(Formula::member(0, 0), Formula::equal(2, 0)).arity() ==
        3);
  CHECK(Formula::forall(Formula::member(0, 0)).arity() == 0);
  CHECK(Formula::forces_mem(0, 4, 5).arity() == 6);
}

TEST_CASE("satisfaction") {
  Structure M2 = stage(2);
  HfSet e;
  CHECK(sats(M2, {e, singleton(e)}, Formula::member(0, 1)));
  CHECK_FALSE(sats(M2, {}, Formula::forall(Formula::member(0, 0))));
  CHECK(sats(M2, {singleton(e)}, Formula::equal(0, 0)));

  // env too short / entry outside M / extended atom are the three errors.
  CHECK_THROWS_AS(sats(M2, {}, Formula::member(0, 1)), std::invalid_argument);
  CHECK_THROWS_AS(sats(M2, {vset(3)}, Formula::equal(0, 0)),
                  std::domain_error);
  CHECK_THROWS_AS(sats(M2, {e, e, e, e, e, e}, Formula::forces_mem(0, 4, 5)),
                  std::logic_error);

  // sats is invariant under extending env beyond the arity.
  Env env = {e, singleton(e)};
  Env longer = env;
  longer.push_back(e);
  for (const Formula& f :
       {Formula::member(0, 1), Formula::equal(1, 1),
        Formula::forall(Formula::member(0, 2))})
    CHECK(sats(M2, env, f) == sats(M2, longer, f));
}

TEST_CASE("renaming") {
  CHECK(rename(Formula::member(0, 1), {{0, 1}, {1, 0}}) ==
        Formula::member(1, 0));
  CHECK(rename(Formula::forall(Formula::member(0, 1)), {{0, 2}}) ==
        Formula::forall(Formula::member(0, 3)));
  CHECK(rename(Formula::forces_mem(0, 4, 5), {{0, 1}, {4, 5}, {5, 6}}) ==
        Formula::forces_mem(1, 5, 6));

  CHECK_THROWS(rename(Formula::member(0, 1), Renaming{{0, 1}}));  // undefined
  CHECK_THROWS(rename(Formula::member(0, 1), Renaming{{0, 2}, {1, 2}}));

  // arity(rename) = 1 + max image over free indices.
  for (const Formula& f : enumerate_formulas(4, 2)) {
    Renaming rho = {{0, 3}, {1, 1}, {2, 5}};
    Renaming restricted;
    std::size_t hi = 0;
    bool closed = true;
    for (std::size_t i : free_indices(f)) {
      restricted[i] = rho[i];
      hi = std::max(hi, rho[i]);
      closed = false;
    }
    CHECK(rename(f, restricted).arity() == (closed ? 0 : hi + 1));
  }
}

TEST_CASE("renaming soundness for satisfaction") {
  Structure M2 = stage(2);
  HfSet e, se = singleton(e);
  // env'[rho(i)] = env[i] with rho = {0->2, 1->0, 2->1}.
  Renaming rho = {{0, 2}, {1, 0}, {2, 1}};
  for (const Formula& f : enumerate_formulas(4, 3)) {
    for (Env env : {Env{e, se, e}, Env{se, se, e}, Env{e, e, se}}) {
      Env moved(3);
      for (std::size_t i = 0; i < 3; ++i) moved[rho[i]] = env[i];
      CHECK(sats(M2, env, f) == sats(M2, moved, rename(f, rho)));
    }
  }
}

TEST_CASE("derived connectives against an enriched-AST oracle") {
  Structure M2 = stage(2);
  HfSet e, se = singleton(e);
  CHECK(sats(M2, {se}, exists(Formula::member(0, 1))));
  CHECK_FALSE(sats(M2, {e}, exists(Formula::member(0, 1))));

  auto atom = [](Formula f) {
    auto n = std::make_shared<Enriched>();
    n->op = Enriched::Atom;
    n->atom = f;
    return n;
  };
  auto un = [](Enriched::Op op, std::shared_ptr<Enriched> a) {
    auto n = std::make_shared<Enriched>();
    n->op = op;
    n->a = std::move(a);
    return n;
  };
  auto bin = [](Enriched::Op op, std::shared_ptr<Enriched> a,
                std::shared_ptr<Enriched> b) {
    auto n = std::make_shared<Enriched>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  };

  std::vector<Formula> atoms = {Formula::member(0, 1), Formula::equal(0, 1),
                                Formula::member(1, 0)};
  std::vector<Env> envs = {{e, se}, {se, e}, {e, e}, {se, se}};
  for (const Formula& f : atoms)
    for (const Formula& g : atoms)
      for (const Env& env : envs) {
        CHECK(sats(M2, env, neg(f)) ==
              eval_enriched(M2, env, *un(Enriched::Neg, atom(f))));
        CHECK(sats(M2, env, and_(f, g)) ==
              eval_enriched(M2, env, *bin(Enriched::And, atom(f), atom(g))));
        CHECK(sats(M2, env, or_(f, g)) ==
              eval_enriched(M2, env, *bin(Enriched::Or, atom(f), atom(g))));
        CHECK(sats(M2, env, implies(f, g)) ==
              eval_enriched(M2, env,
                            *bin(Enriched::Implies, atom(f), atom(g))));
        CHECK(sats(M2, env, iff_(f, g)) ==
              eval_enriched(M2, env, *bin(Enriched::Iff, atom(f), atom(g))));
        CHECK(sats(M2, env, iff_(f, f)));
        CHECK(sats(M2, env, exists(and_(f, g))) ==
              eval_enriched(
                  M2, env,
                  *un(Enriched::Exists, bin(Enriched::And, atom(f), atom(g)))));
      }
}

TEST_CASE("internal formula library") {
  HfSet e, se = singleton(e);
  Structure M4 = stage(4);

  // upair_fm(i,j,k): env[k] = {env[i], env[j]}.
  CHECK(sats(M4, {e, se, pair(e, se)}, upair_fm(0, 1, 2)));
  CHECK_FALSE(sats(M4, {e, se, e}, upair_fm(0, 1, 2)));
  CHECK(sats(M4, {se, se, singleton(se)}, upair_fm(0, 1, 2)));

  // opair_fm(i,j,k): env[k] = <env[i], env[j]> (Kuratowski).
  CHECK(sats(M4, {e, se, opair(e, se)}, opair_fm(0, 1, 2)));
  CHECK_FALSE(sats(M4, {e, se, opair(se, e)}, opair_fm(0, 1, 2)));

  // leq_member_fm(l,q,p): <env[q], env[p]> is a member of env[l].  The
  // graph {<0,{0}>} has rank 4, so quantify over its own closure.
  HfSet graph = HfSet::make({opair(e, se)});
  HfSet closure = transitive_closure(singleton(graph));
  Structure Mg({closure.children().begin(), closure.children().end()});
  CHECK(sats(Mg, {graph, e, se}, leq_member_fm(0, 1, 2)));
  CHECK_FALSE(sats(Mg, {graph, se, e}, leq_member_fm(0, 1, 2)));
}

TEST_CASE("internalized axioms") {
  CHECK(zf_axiom(ZfAxiom::Pairing) ==
        Formula::forall(Formula::forall(exists(upair_fm(2, 1, 0)))));
  CHECK(sats(stage(3), {}, zf_axiom(ZfAxiom::Extensionality)));
  CHECK_FALSE(sats(stage(2), {}, zf_axiom(ZfAxiom::Pairing)));
  CHECK(sats(stage(3), {}, zf_axiom(ZfAxiom::Foundation)));

  CHECK(zf_axiom_by_name("pairing") == ZfAxiom::Pairing);
  CHECK(zf_axiom_name(ZfAxiom::Union) == "union");
  CHECK_FALSE(zf_axiom_by_name("choice").has_value());
}

TEST_CASE("s-expression parse and print") {
  CHECK(parse_formula("(Member 0 1)") == Formula::member(0, 1));
  CHECK(parse_formula("(Forall (Nand (Member 0 0) (Member 0 0)))") ==
        Formula::forall(neg(Formula::member(0, 0))));
  CHECK(parse_formula("(Neg (Member 0 0))") == neg(Formula::member(0, 0)));
  CHECK(parse_formula("(Exists (Member 0 1))") ==
        exists(Formula::member(0, 1)));
  CHECK(parse_formula("(ForcesEq 0 4 5)") == Formula::forces_eq(0, 4, 5));

  CHECK_THROWS_AS(parse_formula("(Member -1 0)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_formula("(Member 0)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_formula("(Foo 0 0)"), std::invalid_argument);

  // Round trip over every generated formula up to size 6.
  for (const Formula& f : enumerate_formulas(6, 3))
    CHECK(parse_formula(print_formula(f)) == f);
  Formula x = Formula::nand(Formula::forces_mem(1, 0, 5),
                            Formula::forces_eq(0, 4, 5));
  CHECK(parse_formula(print_formula(x)) == x);
}
