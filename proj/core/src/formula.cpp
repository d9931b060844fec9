#include "forcing/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_map>
#include <stdexcept>

namespace forcing {

struct Formula::Node {
  FormulaKind kind;
  std::size_t i = 0, j = 0, p = 0;
  std::shared_ptr<const Node> lhs, rhs;
  std::size_t arity = 0;
  bool pure = true;
  // leq-guard marker (see header)
  bool guard = false;
  std::size_t guard_q = 0, guard_p = 0;
};

namespace {

std::size_t atom_arity(std::size_t a, std::size_t b) {
  return std::max(a, b) + 1;
}

std::shared_ptr<const Formula::Node> make_atom(FormulaKind k, std::size_t p,
                                               std::size_t i, std::size_t j) {
  auto n = std::make_shared<Formula::Node>();
  n->kind = k;
  n->i = i;
  n->j = j;
  n->p = p;
  bool extended = (k == FormulaKind::ForcesEq || k == FormulaKind::ForcesMem);
  n->pure = !extended;
  n->arity = extended ? std::max(atom_arity(i, j), p + 1) : atom_arity(i, j);
  return n;
}

}  // namespace

Formula Formula::member(std::size_t i, std::size_t j) {
  return Formula(make_atom(FormulaKind::Member, 0, i, j));
}
Formula Formula::equal(std::size_t i, std::size_t j) {
  return Formula(make_atom(FormulaKind::Equal, 0, i, j));
}
Formula Formula::forces_eq(std::size_t p, std::size_t i, std::size_t j) {
  return Formula(make_atom(FormulaKind::ForcesEq, p, i, j));
}
Formula Formula::forces_mem(std::size_t p, std::size_t i, std::size_t j) {
  return Formula(make_atom(FormulaKind::ForcesMem, p, i, j));
}

Formula Formula::nand(Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Nand;
  n->arity = std::max(lhs.node_->arity, rhs.node_->arity);
  n->pure = lhs.node_->pure && rhs.node_->pure;
  n->lhs = lhs.node_;
  n->rhs = rhs.node_;
  return Formula(std::move(n));
}

Formula Formula::forall(Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Forall;
  n->arity = body.node_->arity == 0 ? 0 : body.node_->arity - 1;
  n->pure = body.node_->pure;
  n->lhs = body.node_;
  return Formula(std::move(n));
}

FormulaKind Formula::kind() const { return node_->kind; }
std::size_t Formula::index_i() const { return node_->i; }
std::size_t Formula::index_j() const { return node_->j; }
std::size_t Formula::p_slot() const { return node_->p; }

Formula Formula::lhs() const { return Formula(node_->lhs); }
Formula Formula::rhs() const { return Formula(node_->rhs); }
Formula Formula::body() const { return Formula(node_->lhs); }

bool Formula::is_pure() const { return node_->pure; }
std::size_t Formula::arity() const { return node_->arity; }

bool Formula::operator==(const Formula& other) const {
  const Node *a = node_.get(), *b = other.node_.get();
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case FormulaKind::Member:
    case FormulaKind::Equal:
      return a->i == b->i && a->j == b->j;
    case FormulaKind::ForcesEq:
    case FormulaKind::ForcesMem:
      return a->p == b->p && a->i == b->i && a->j == b->j;
    case FormulaKind::Nand:
      return Formula(a->lhs) == Formula(b->lhs) &&
             Formula(a->rhs) == Formula(b->rhs);
    case FormulaKind::Forall:
      return Formula(a->lhs) == Formula(b->lhs);
  }
  return false;
}

Formula Formula::marked_as_leq_guard(std::size_t q_idx,
                                     std::size_t p_idx) const {
  auto n = std::make_shared<Node>(*node_);
  n->guard = true;
  n->guard_q = q_idx;
  n->guard_p = p_idx;
  return Formula(std::move(n));
}

std::optional<std::pair<std::size_t, std::size_t>> Formula::leq_guard() const {
  if (!node_->guard) return std::nullopt;
  return std::pair{node_->guard_q, node_->guard_p};
}

namespace {

void free_indices_rec(const Formula& f, std::size_t depth,
                      std::set<std::size_t>& out) {
  switch (f.kind()) {
    case FormulaKind::Member:
    case FormulaKind::Equal:
      if (f.index_i() >= depth) out.insert(f.index_i() - depth);
      if (f.index_j() >= depth) out.insert(f.index_j() - depth);
      break;
    case FormulaKind::ForcesEq:
    case FormulaKind::ForcesMem:
      if (f.p_slot() >= depth) out.insert(f.p_slot() - depth);
      if (f.index_i() >= depth) out.insert(f.index_i() - depth);
      if (f.index_j() >= depth) out.insert(f.index_j() - depth);
      break;
    case FormulaKind::Nand:
      free_indices_rec(f.lhs(), depth, out);
      free_indices_rec(f.rhs(), depth, out);
      break;
    case FormulaKind::Forall:
      free_indices_rec(f.body(), depth + 1, out);
      break;
  }
}

}  // namespace

std::vector<std::size_t> free_indices(const Formula& f) {
  std::set<std::size_t> acc;
  free_indices_rec(f, 0, acc);
  return {acc.begin(), acc.end()};
}

namespace {

// rho applied to an index occurring under `depth` binders.
std::size_t apply_rho(const Renaming& rho, std::size_t depth, std::size_t idx) {
  if (idx < depth) return idx;  // bound
  auto it = rho.find(idx - depth);
  if (it == rho.end())
    throw std::invalid_argument("rename: renaming undefined on free index " +
                                std::to_string(idx - depth));
  return it->second + depth;
}

// Derived connectives share subtrees, so formulas are DAGs whose tree
// expansion can be exponentially larger.  Renaming memoizes on (node
// identity, binder depth) to stay DAG-sized and to preserve sharing.
using RenameKey = std::pair<const void*, std::size_t>;
struct RenameKeyHash {
  std::size_t operator()(const RenameKey& k) const {
    return std::hash<const void*>()(k.first) ^ (k.second * 0x9e3779b97f4a7c15ull);
  }
};
using RenameMemo = std::unordered_map<RenameKey, Formula, RenameKeyHash>;

Formula rename_rec(const Formula& f, const Renaming& rho, std::size_t depth,
                   RenameMemo& memo) {
  RenameKey key{f.identity(), depth};
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  Formula out = f;
  switch (f.kind()) {
    case FormulaKind::Member:
      out = Formula::member(apply_rho(rho, depth, f.index_i()),
                            apply_rho(rho, depth, f.index_j()));
      break;
    case FormulaKind::Equal:
      out = Formula::equal(apply_rho(rho, depth, f.index_i()),
                           apply_rho(rho, depth, f.index_j()));
      break;
    case FormulaKind::ForcesEq:
      out = Formula::forces_eq(apply_rho(rho, depth, f.p_slot()),
                               apply_rho(rho, depth, f.index_i()),
                               apply_rho(rho, depth, f.index_j()));
      break;
    case FormulaKind::ForcesMem:
      out = Formula::forces_mem(apply_rho(rho, depth, f.p_slot()),
                                apply_rho(rho, depth, f.index_i()),
                                apply_rho(rho, depth, f.index_j()));
      break;
    case FormulaKind::Nand:
      out = Formula::nand(rename_rec(f.lhs(), rho, depth, memo),
                          rename_rec(f.rhs(), rho, depth, memo));
      break;
    case FormulaKind::Forall:
      out = Formula::forall(rename_rec(f.body(), rho, depth + 1, memo));
      break;
  }
  if (auto g = f.leq_guard())
    out = out.marked_as_leq_guard(apply_rho(rho, depth, g->first),
                                  apply_rho(rho, depth, g->second));
  memo.emplace(key, out);
  return out;
}

}  // namespace

Formula rename(const Formula& f, const Renaming& rho) {
  std::set<std::size_t> targets;
  for (auto& [from, to] : rho) {
    (void)from;
    if (!targets.insert(to).second)
      throw std::invalid_argument("rename: renaming is not injective");
  }
  RenameMemo memo;
  return rename_rec(f, rho, 0, memo);
}

Formula neg(Formula f) { return Formula::nand(f, f); }
Formula and_(Formula f, Formula g) { return neg(Formula::nand(f, g)); }
Formula or_(Formula f, Formula g) { return Formula::nand(neg(f), neg(g)); }
Formula implies(Formula f, Formula g) { return Formula::nand(f, neg(g)); }
Formula iff_(Formula f, Formula g) {
  return and_(implies(f, g), implies(g, f));
}
Formula exists(Formula f) { return neg(Formula::forall(neg(f))); }

Structure::Structure(std::vector<HfSet> elems) : elems_(std::move(elems)) {
  std::sort(elems_.begin(), elems_.end(),
            [](HfSet a, HfSet b) { return a < b; });
  elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
}

bool Structure::contains(HfSet x) const {
  return std::binary_search(elems_.begin(), elems_.end(), x,
                            [](HfSet a, HfSet b) { return a < b; });
}

HfSet Structure::as_hfset() const {
  return HfSet::make({elems_.begin(), elems_.end()});
}

namespace {

// stack holds the environment with the head at the back.
bool sats_rec(const Structure& M, std::vector<HfSet>& stack,
              const Formula& f) {
  auto at = [&](std::size_t idx) -> HfSet {
    return stack[stack.size() - 1 - idx];
  };
  switch (f.kind()) {
    case FormulaKind::Member:
      return mem(at(f.index_i()), at(f.index_j()));
    case FormulaKind::Equal:
      return at(f.index_i()) == at(f.index_j());
    case FormulaKind::Nand:
      return !(sats_rec(M, stack, f.lhs()) && sats_rec(M, stack, f.rhs()));
    case FormulaKind::Forall:
      for (HfSet x : M.elems()) {
        stack.push_back(x);
        bool ok = sats_rec(M, stack, f.body());
        stack.pop_back();
        if (!ok) return false;
      }
      return true;
    case FormulaKind::ForcesEq:
    case FormulaKind::ForcesMem:
      throw std::logic_error("sats: extended atom requires a forcing context");
  }
  return false;
}

}  // namespace

bool sats(const Structure& M, const Env& env, const Formula& f) {
  if (env.size() < f.arity())
    throw std::invalid_argument("sats: environment shorter than arity");
  for (HfSet e : env)
    if (!M.contains(e))
      throw std::domain_error("sats: environment entry outside the structure");
  std::vector<HfSet> stack(env.rbegin(), env.rend());
  return sats_rec(M, stack, f);
}

Formula upair_fm(std::size_t i, std::size_t j, std::size_t k) {
  // forall w. w in k <-> (w = i or w = j)
  return Formula::forall(iff_(
      Formula::member(0, k + 1),
      or_(Formula::equal(0, i + 1), Formula::equal(0, j + 1))));
}

Formula opair_fm(std::size_t i, std::size_t j, std::size_t k) {
  // exists u. exists v. u = {i} and v = {i,j} and k = {u,v}
  // (u is bound at index 1, v at index 0 inside the body)
  return exists(exists(and_(
      upair_fm(i + 2, i + 2, 1),
      and_(upair_fm(i + 2, j + 2, 0), upair_fm(1, 0, k + 2)))));
}

Formula leq_member_fm(std::size_t l, std::size_t q, std::size_t p) {
  // exists z. z in l and z = <q,p>
  return exists(
      and_(Formula::member(0, l + 1), opair_fm(q + 1, p + 1, 0)));
}

Formula zf_axiom(ZfAxiom which) {
  switch (which) {
    case ZfAxiom::Pairing:
      return Formula::forall(Formula::forall(exists(upair_fm(2, 1, 0))));
    case ZfAxiom::Extensionality:
      // forall x y. (forall z. z in x <-> z in y) -> x = y
      return Formula::forall(Formula::forall(implies(
          Formula::forall(iff_(Formula::member(0, 2), Formula::member(0, 1))),
          Formula::equal(1, 0))));
    case ZfAxiom::Foundation:
      // forall x. (exists y. y in x) ->
      //           exists y. y in x and not exists z. z in x and z in y
      return Formula::forall(implies(
          exists(Formula::member(0, 1)),
          exists(and_(Formula::member(0, 1),
                      neg(exists(and_(Formula::member(0, 2),
                                      Formula::member(0, 1))))))));
    case ZfAxiom::Union:
      // forall x. exists u. forall z. z in u <-> exists y. y in x and z in y
      return Formula::forall(exists(Formula::forall(iff_(
          Formula::member(0, 1),
          exists(and_(Formula::member(0, 3), Formula::member(1, 0)))))));
  }
  throw std::invalid_argument("zf_axiom: unknown axiom");
}

std::optional<ZfAxiom> zf_axiom_by_name(std::string_view name) {
  if (name == "pairing") return ZfAxiom::Pairing;
  if (name == "extensionality") return ZfAxiom::Extensionality;
  if (name == "foundation") return ZfAxiom::Foundation;
  if (name == "union") return ZfAxiom::Union;
  return std::nullopt;
}

std::string zf_axiom_name(ZfAxiom which) {
  switch (which) {
    case ZfAxiom::Pairing: return "pairing";
    case ZfAxiom::Extensionality: return "extensionality";
    case ZfAxiom::Foundation: return "foundation";
    case ZfAxiom::Union: return "union";
  }
  return "?";
}

namespace {

struct SexprParser {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument("formula parse error at position " +
                                std::to_string(pos) + ": " + msg);
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  void expect(char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c)
      fail(std::string("expected '") + c + "'");
    ++pos;
  }

  std::string symbol() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos])))
      ++pos;
    if (pos == start) fail("expected a constructor name");
    return std::string(text.substr(start, pos - start));
  }

  std::size_t natural() {
    skip_ws();
    if (pos < text.size() && text[pos] == '-') fail("index is not a natural");
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      ++pos;
    if (pos == start) fail("expected a natural number");
    return std::stoul(std::string(text.substr(start, pos - start)));
  }

  Formula parse() {
    expect('(');
    std::string head = symbol();
    Formula out = Formula::member(0, 0);
    if (head == "Member" || head == "Equal") {
      std::size_t i = natural(), j = natural();
      out = head == "Member" ? Formula::member(i, j) : Formula::equal(i, j);
    } else if (head == "ForcesEq" || head == "ForcesMem") {
      std::size_t k = natural(), i = natural(), j = natural();
      out = head == "ForcesEq" ? Formula::forces_eq(k, i, j)
                               : Formula::forces_mem(k, i, j);
    } else if (head == "Nand") {
      Formula f = parse(), g = parse();
      out = Formula::nand(f, g);
    } else if (head == "Forall") {
      out = Formula::forall(parse());
    } else if (head == "Neg") {
      out = neg(parse());
    } else if (head == "Exists") {
      out = exists(parse());
    } else if (head == "And" || head == "Or" || head == "Implies" ||
               head == "Iff") {
      Formula f = parse(), g = parse();
      if (head == "And") out = and_(f, g);
      else if (head == "Or") out = or_(f, g);
      else if (head == "Implies") out = implies(f, g);
      else out = iff_(f, g);
    } else {
      fail("unknown constructor '" + head + "'");
    }
    expect(')');
    return out;
  }
};

void print_rec(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case FormulaKind::Member:
    case FormulaKind::Equal:
      out += f.kind() == FormulaKind::Member ? "(Member " : "(Equal ";
      out += std::to_string(f.index_i()) + " " + std::to_string(f.index_j()) + ")";
      break;
    case FormulaKind::ForcesEq:
    case FormulaKind::ForcesMem:
      out += f.kind() == FormulaKind::ForcesEq ? "(ForcesEq " : "(ForcesMem ";
      out += std::to_string(f.p_slot()) + " " + std::to_string(f.index_i()) +
             " " + std::to_string(f.index_j()) + ")";
      break;
    case FormulaKind::Nand:
      out += "(Nand ";
      print_rec(f.lhs(), out);
      out += " ";
      print_rec(f.rhs(), out);
      out += ")";
      break;
    case FormulaKind::Forall:
      out += "(Forall ";
      print_rec(f.body(), out);
      out += ")";
      break;
  }
}

}  // namespace

Formula parse_formula(std::string_view text) {
  SexprParser p{text};
  Formula f = p.parse();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return f;
}

std::string print_formula(const Formula& f) {
  std::string out;
  print_rec(f, out);
  return out;
}

}  // namespace forcing
