#include "forcing/harness.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <sstream>
#include <stdexcept>

namespace forcing {

namespace {

constexpr std::size_t kFailureCap = 25;

class Timer {
public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double millis() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

void add_failure(Report& r, std::string inputs, std::string expected,
                 std::string got) {
  if (r.failures.size() == kFailureCap) {
    r.notes.push_back("further failures suppressed");
    r.failures.push_back(
        {std::move(inputs), std::move(expected), std::move(got)});
    return;
  }
  if (r.failures.size() > kFailureCap) return;
  r.failures.push_back(
      {std::move(inputs), std::move(expected), std::move(got)});
}

std::string env_text(const Env& env) {
  std::string out = "[";
  for (std::size_t i = 0; i < env.size(); ++i) {
    if (i) out += ",";
    out += print_hf(env[i]);
  }
  return out + "]";
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

}  // namespace

nlohmann::json report_json(const Report& r, bool include_timings) {
  nlohmann::json fails = nlohmann::json::array();
  for (const Failure& f : r.failures)
    fails.push_back(
        {{"inputs", f.inputs}, {"expected", f.expected}, {"got", f.got}});
  nlohmann::json j{{"suite", r.suite},
                   {"checked", r.checked},
                   {"passed", r.passed()},
                   {"failures", fails},
                   {"notes", r.notes}};
  if (include_timings) j["timings"] = {{"millis", r.millis}};
  return j;
}

nlohmann::json reports_json(const std::vector<Report>& rs,
                            bool include_timings) {
  bool all = true;
  nlohmann::json arr = nlohmann::json::array();
  for (const Report& r : rs) {
    all = all && r.passed();
    arr.push_back(report_json(r, include_timings));
  }
  return {{"passed", all}, {"suites", arr}};
}

std::string report_text(const Report& r) {
  std::ostringstream os;
  os << (r.passed() ? "PASS " : "FAIL ") << r.suite << "  checked="
     << r.checked << "  failures=" << r.failures.size() << "  ("
     << static_cast<long long>(r.millis) << " ms)\n";
  for (const Failure& f : r.failures)
    os << "  counterexample: " << f.inputs << "  expected=" << f.expected
       << "  got=" << f.got << "\n";
  for (const std::string& n : r.notes) os << "  note: " << n << "\n";
  return os.str();
}

std::vector<Formula> enumerate_formulas(std::size_t max_size,
                                        std::size_t arity_cap) {
  // gen[s][b]: formulas of size exactly s with atom indices < b at the
  // current binder depth; bound grows by one under each Forall, which
  // keeps overall arity <= arity_cap.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Formula>> memo;
  auto gen = [&](auto&& self, std::size_t s,
                 std::size_t b) -> const std::vector<Formula>& {
    auto key = std::make_pair(s, b);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<Formula> out;
    if (s == 1) {
      for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = 0; j < b; ++j) {
          out.push_back(Formula::member(i, j));
          out.push_back(Formula::equal(i, j));
        }
    } else if (s >= 2) {
      for (const Formula& f : self(self, s - 1, b + 1))
        out.push_back(Formula::forall(f));
      for (std::size_t ls = 1; ls + 1 < s; ++ls) {
        const auto& lhs = self(self, ls, b);
        const auto& rhs = self(self, s - 1 - ls, b);
        for (const Formula& f : lhs)
          for (const Formula& g : rhs) out.push_back(Formula::nand(f, g));
      }
    }
    return memo.emplace(key, std::move(out)).first->second;
  };
  std::vector<Formula> all;
  for (std::size_t s = 1; s <= max_size; ++s) {
    const auto& level = gen(gen, s, arity_cap);
    all.insert(all.end(), level.begin(), level.end());
  }
  return all;
}

Battery make_battery(const ForcingContext& ctx, BatteryOptions opts) {
  Battery b;
  b.opts = opts;
  b.formulas = enumerate_formulas(opts.depth, opts.arity);
  for (HfSet x : ctx.M.elems())
    if (rank(x) <= opts.env_rank) b.env_pool.push_back(x);
  std::sort(b.env_pool.begin(), b.env_pool.end());
  return b;
}

bool mt_forces(const ForcingContext& ctx, HfSet p, const Formula& phi,
               const Env& env) {
  if (!ctx.poset.in_carrier(p))
    throw std::invalid_argument("mt_forces: condition outside carrier");
  if (env.size() < phi.arity())
    throw std::invalid_argument("mt_forces: environment shorter than arity");
  for (const GenericFilter& G : all_generic_filters(ctx)) {
    if (!G.contains(p)) continue;
    Structure MG = generic_extension(ctx, G);
    Env valued;
    for (HfSet e : env) valued.push_back(val(G, e));
    if (!sats(MG, valued, phi)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

// A formula flattened into an index-addressed node pool, for evaluation
// over integer-indexed carriers.
struct CNode {
  FormulaKind kind;
  int i = 0, j = 0;  // atom indices
  int l = -1, r = -1;
};

int compile_formula(const Formula& f, std::vector<CNode>& out) {
  CNode n;
  n.kind = f.kind();
  switch (f.kind()) {
    case FormulaKind::Member:
    case FormulaKind::Equal:
      n.i = static_cast<int>(f.index_i());
      n.j = static_cast<int>(f.index_j());
      break;
    case FormulaKind::Nand:
      n.l = compile_formula(f.lhs(), out);
      n.r = compile_formula(f.rhs(), out);
      break;
    case FormulaKind::Forall:
      n.l = compile_formula(f.body(), out);
      break;
    default:
      throw std::logic_error("compile_formula: pure formulas only");
  }
  out.push_back(n);
  return static_cast<int>(out.size()) - 1;
}

struct Verifier::Impl {
  const ForcingContext& ctx;
  Battery battery;
  std::vector<GenericFilter> filters;
  std::vector<Structure> extensions;
  std::vector<ValCache> caches;
  ForcesEvaluator eval;
  bool all_subsets;  // M-genericity coincides with genericity

  // Dense integer views: M indexed 0..m-1, carrier 0..c-1.
  int m = 0, c = 0;
  std::vector<int> cond_m;            // condition index -> M index
  std::vector<char> leq_cc;           // c*c, [q*c+p]
  std::vector<char> fmem_t, feq_t;    // c*m*m, [p*m*m + t1*m + t2]
  std::vector<char> mem_mm;           // m*m membership in the HF sense
  std::vector<std::vector<char>> in_G;      // per filter, over conditions
  std::vector<std::vector<int>> val_idx;    // per filter, M idx -> MG idx
  std::vector<int> mg_size;                 // per filter
  std::vector<std::vector<char>> mg_mem;    // per filter, mg*mg
  std::vector<int> pool_idx;                // env pool as M indices

  Impl(const ForcingContext& c_, BatteryOptions opts)
      : ctx(c_),
        battery(make_battery(c_, opts)),
        filters(all_generic_filters(c_)),
        eval(c_),
        all_subsets(c_.all_poset_subsets_in_M) {
    for (const GenericFilter& G : filters) {
      extensions.push_back(generic_extension(ctx, G));
      caches.emplace_back(G);
    }
    eval.precompute();
    build_tables();
  }

  std::unordered_map<HfSet, int, HfSet::Hash> m_index;

  void build_tables() {
    auto elems = ctx.M.elems();
    m = static_cast<int>(elems.size());
    for (int i = 0; i < m; ++i) m_index[elems[i]] = i;
    auto carrier = ctx.poset.carrier();
    c = static_cast<int>(carrier.size());
    for (HfSet p : carrier) cond_m.push_back(m_index.at(p));
    leq_cc.assign(c * c, 0);
    for (int q = 0; q < c; ++q)
      for (int p = 0; p < c; ++p)
        leq_cc[q * c + p] = ctx.poset.leq(carrier[q], carrier[p]);
    fmem_t.assign(static_cast<std::size_t>(c) * m * m, 0);
    feq_t.assign(static_cast<std::size_t>(c) * m * m, 0);
    mem_mm.assign(static_cast<std::size_t>(m) * m, 0);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        mem_mm[a * m + b] = mem(elems[a], elems[b]);
        for (int p = 0; p < c; ++p) {
          std::size_t at = (static_cast<std::size_t>(p) * m + a) * m + b;
          fmem_t[at] = eval.forces_mem(carrier[p], elems[a], elems[b]);
          feq_t[at] = eval.forces_eq(carrier[p], elems[a], elems[b]);
        }
      }
    for (std::size_t g = 0; g < filters.size(); ++g) {
      std::vector<char> ing(c);
      for (int p = 0; p < c; ++p) ing[p] = filters[g].contains(carrier[p]);
      in_G.push_back(std::move(ing));
      const Structure& MG = extensions[g];
      std::unordered_map<HfSet, int, HfSet::Hash> mg_index;
      int mg = static_cast<int>(MG.size());
      for (int i = 0; i < mg; ++i) mg_index[MG.elems()[i]] = i;
      std::vector<int> vidx(m);
      for (int i = 0; i < m; ++i) vidx[i] = mg_index.at(caches[g](elems[i]));
      val_idx.push_back(std::move(vidx));
      mg_size.push_back(mg);
      std::vector<char> mm(static_cast<std::size_t>(mg) * mg);
      for (int a = 0; a < mg; ++a)
        for (int b = 0; b < mg; ++b)
          mm[a * mg + b] = mem(MG.elems()[a], MG.elems()[b]);
      mg_mem.push_back(std::move(mm));
    }
    for (HfSet x : battery.env_pool) pool_idx.push_back(m_index.at(x));
  }

  // p forces the compiled formula; stack holds M indices, head at back.
  // Matches satisfaction of the transformed formula: the existential the
  // transformer introduces for Nand is guarded onto the carrier, so it is
  // evaluated there directly.
  bool forces_c(const std::vector<CNode>& ns, int node, int p,
                std::vector<int>& stack, const char* fmem,
                const char* feq) const {
    const CNode& n = ns[node];
    switch (n.kind) {
      case FormulaKind::Member: {
        int a = stack[stack.size() - 1 - n.i], b = stack[stack.size() - 1 - n.j];
        return fmem[(static_cast<std::size_t>(p) * m + a) * m + b];
      }
      case FormulaKind::Equal: {
        int a = stack[stack.size() - 1 - n.i], b = stack[stack.size() - 1 - n.j];
        return feq[(static_cast<std::size_t>(p) * m + a) * m + b];
      }
      case FormulaKind::Nand:
        for (int q = 0; q < c; ++q)
          if (leq_cc[q * c + p] && forces_c(ns, n.l, q, stack, fmem, feq) &&
              forces_c(ns, n.r, q, stack, fmem, feq))
            return false;
        return true;
      case FormulaKind::Forall:
        for (int x = 0; x < m; ++x) {
          stack.push_back(x);
          bool ok = forces_c(ns, n.l, p, stack, fmem, feq);
          stack.pop_back();
          if (!ok) return false;
        }
        return true;
      default:
        return false;
    }
  }

  // Satisfaction in M[G] over MG indices.
  bool sats_c(const std::vector<CNode>& ns, int node, int g,
              std::vector<int>& stack) const {
    const CNode& n = ns[node];
    int mg = mg_size[g];
    switch (n.kind) {
      case FormulaKind::Member:
        return mg_mem[g][stack[stack.size() - 1 - n.i] * mg +
                         stack[stack.size() - 1 - n.j]];
      case FormulaKind::Equal:
        return stack[stack.size() - 1 - n.i] == stack[stack.size() - 1 - n.j];
      case FormulaKind::Nand:
        return !(sats_c(ns, n.l, g, stack) && sats_c(ns, n.r, g, stack));
      case FormulaKind::Forall:
        for (int x = 0; x < mg; ++x) {
          stack.push_back(x);
          bool ok = sats_c(ns, n.l, g, stack);
          stack.pop_back();
          if (!ok) return false;
        }
        return true;
      default:
        return false;
    }
  }

  std::string point_text(HfSet p, const Formula& phi, const Env& env) const {
    return "ctx=" + ctx.name + " p=" + print_hf(p) +
           " phi=" + print_formula(phi) + " env=" + env_text(env);
  }

  // Visits every (phi, env) point of the battery; envs range over the
  // pool on the free indices of phi only (neither side of any suite reads
  // a non-free slot) with empty-set filler elsewhere.
  template <typename Visit>
  void for_each_point(Visit&& visit) {
    HfSet filler = empty_set();
    for (const Formula& phi : battery.formulas) {
      Formula tf = forces_transform(phi);
      std::vector<std::size_t> free = free_indices(phi);
      Env env(phi.arity(), filler);
      std::vector<std::size_t> odo(free.size(), 0);
      bool more = true;
      if (!free.empty() && battery.env_pool.empty()) more = false;
      while (more) {
        for (std::size_t k = 0; k < free.size(); ++k)
          env[free[k]] = battery.env_pool[odo[k]];
        if (!visit(phi, tf, env)) return;
        more = false;
        for (std::size_t k = 0; k < odo.size(); ++k) {
          if (++odo[k] < battery.env_pool.size()) {
            more = true;
            break;
          }
          odo[k] = 0;
        }
      }
    }
  }

  enum : unsigned { kDef = 1, kDen = 2, kStr = 4, kTru = 8 };

  Env env_of(const std::vector<int>& idx) const {
    Env env;
    for (int i : idx) env.push_back(ctx.M.elems()[i]);
    return env;
  }

  std::vector<Report> run_battery(unsigned mask, AtomicMutant mutant,
                                  bool stop_on_first) {
    Timer timer;
    Report def{"definition_of_forcing"}, den{"density"},
        str{"strengthening"}, tru{"truth"};
    if (mutant != AtomicMutant::None) def.suite += "(mutant)";

    const char* fmem = fmem_t.data();
    const char* feq = feq_t.data();
    std::vector<char> mut_fmem, mut_feq;
    if (mutant != AtomicMutant::None) {
      ForcesEvaluator local(ctx, mutant);
      mut_fmem.assign(fmem_t.size(), 0);
      mut_feq.assign(feq_t.size(), 0);
      auto carrier = ctx.poset.carrier();
      auto elems = ctx.M.elems();
      for (int p = 0; p < c; ++p)
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b) {
            std::size_t at = (static_cast<std::size_t>(p) * m + a) * m + b;
            mut_fmem[at] = local.forces_mem(carrier[p], elems[a], elems[b]);
            mut_feq[at] = local.forces_eq(carrier[p], elems[a], elems[b]);
          }
      fmem = mut_fmem.data();
      feq = mut_feq.data();
    }

    int filler = m_index.at(empty_set());
    std::size_t nf = filters.size();
    std::vector<char> F(c), T(nf);
    std::vector<CNode> nodes;
    std::vector<int> stack, mg_stack;
    bool aborted = false;

    for (const Formula& phi : battery.formulas) {
      if (aborted) break;
      nodes.clear();
      int root = compile_formula(phi, nodes);
      std::vector<std::size_t> free = free_indices(phi);
      std::size_t ar = phi.arity();
      std::vector<int> env_idx(ar, filler);
      std::vector<std::size_t> odo(free.size(), 0);
      bool more = !(free.size() && pool_idx.empty());

      while (more && !aborted) {
        for (std::size_t k = 0; k < free.size(); ++k)
          env_idx[free[k]] = pool_idx[odo[k]];

        stack.assign(env_idx.rbegin(), env_idx.rend());
        for (int p = 0; p < c; ++p)
          F[p] = forces_c(nodes, root, p, stack, fmem, feq);
        if (mask & (kDef | kTru)) {
          for (std::size_t g = 0; g < nf; ++g) {
            mg_stack.clear();
            for (auto it = env_idx.rbegin(); it != env_idx.rend(); ++it)
              mg_stack.push_back(val_idx[g][*it]);
            T[g] = sats_c(nodes, root, static_cast<int>(g), mg_stack);
          }
        }

        auto carrier = ctx.poset.carrier();
        if (mask & kDef) {
          for (int p = 0; p < c; ++p) {
            bool mt = true;
            for (std::size_t g = 0; g < nf; ++g)
              if (in_G[g][p] && !T[g]) {
                mt = false;
                break;
              }
            ++def.checked;
            if (static_cast<bool>(F[p]) != mt) {
              add_failure(def, point_text(carrier[p], phi, env_of(env_idx)),
                          bool_text(mt), bool_text(F[p]));
              if (stop_on_first) {
                aborted = true;
                break;
              }
            }
          }
        }
        if (mask & kDen) {
          for (int p = 0; p < c && !aborted; ++p) {
            bool dense = true;
            for (int q = 0; q < c; ++q) {
              if (!leq_cc[q * c + p]) continue;
              bool hit = false;
              for (int r = 0; r < c; ++r)
                if (leq_cc[r * c + q] && F[r]) {
                  hit = true;
                  break;
                }
              if (!hit) {
                dense = false;
                break;
              }
            }
            ++den.checked;
            if (static_cast<bool>(F[p]) != dense)
              add_failure(den, point_text(carrier[p], phi, env_of(env_idx)),
                          "forces iff dense below",
                          "forces=" + bool_text(F[p]) +
                              " dense_below=" + bool_text(dense));
          }
        }
        if (mask & kStr) {
          for (int p = 0; p < c; ++p) {
            if (!F[p]) continue;
            for (int q = 0; q < c; ++q) {
              if (!leq_cc[q * c + p]) continue;
              ++str.checked;
              if (!F[q])
                add_failure(str,
                            point_text(carrier[p], phi, env_of(env_idx)) +
                                " q=" + print_hf(carrier[q]),
                            "true", "false");
            }
          }
        }
        if (mask & kTru) {
          for (std::size_t g = 0; g < nf; ++g) {
            bool some = false;
            for (int p = 0; p < c; ++p)
              if (F[p] && in_G[g][p]) {
                some = true;
                break;
              }
            ++tru.checked;
            if (some != static_cast<bool>(T[g]))
              add_failure(tru,
                          point_text(ctx.poset.one(), phi, env_of(env_idx)) +
                              " G=" + print_hf(filters[g].as_hfset()),
                          "exists p in G forcing iff sats in M[G]",
                          "exists=" + bool_text(some) +
                              " sats=" + bool_text(T[g]));
          }
        }

        more = false;
        for (std::size_t k = 0; k < odo.size(); ++k) {
          if (++odo[k] < pool_idx.size()) {
            more = true;
            break;
          }
          odo[k] = 0;
        }
      }
    }

    if (aborted) def.notes.push_back("stopped at first counterexample");
    if (!all_subsets)
      def.notes.push_back("M-generic filters may be a strict subset of "
                          "generic filters in this context");
    std::vector<Report> out;
    double ms = timer.millis();
    for (Report* r : {&def, &den, &str, &tru}) r->millis = ms;
    if (mask & kDef) out.push_back(std::move(def));
    if (mask & kDen) out.push_back(std::move(den));
    if (mask & kStr) out.push_back(std::move(str));
    if (mask & kTru) out.push_back(std::move(tru));
    return out;
  }
};

Verifier::Verifier(const ForcingContext& ctx, BatteryOptions opts)
    : impl_(std::make_unique<Impl>(ctx, opts)) {}
Verifier::~Verifier() = default;

const ForcingContext& Verifier::ctx() const { return impl_->ctx; }
const Battery& Verifier::battery() const { return impl_->battery; }

Report Verifier::check_definition_of_forcing(AtomicMutant mutant,
                                             bool stop_on_first) {
  return impl_->run_battery(Impl::kDef, mutant, stop_on_first)[0];
}
Report Verifier::check_density() {
  return impl_->run_battery(Impl::kDen, AtomicMutant::None, false)[0];
}
Report Verifier::check_strengthening() {
  return impl_->run_battery(Impl::kStr, AtomicMutant::None, false)[0];
}
Report Verifier::check_truth() {
  return impl_->run_battery(Impl::kTru, AtomicMutant::None, false)[0];
}

Report Verifier::check_IV240a() {
  Timer timer;
  Report r{"IV240a"};
  const auto& ctx = impl_->ctx;
  for (std::size_t g = 0; g < impl_->filters.size(); ++g) {
    const GenericFilter& G = impl_->filters[g];
    ValCache& v = impl_->caches[g];
    for (HfSet p : ctx.poset.carrier()) {
      if (!G.contains(p)) continue;
      for (HfSet tau : ctx.M.elems())
        for (HfSet theta : ctx.M.elems()) {
          ++r.checked;
          std::string where = "ctx=" + ctx.name + " G=" +
                              print_hf(G.as_hfset()) + " p=" + print_hf(p) +
                              " tau=" + print_hf(tau) +
                              " theta=" + print_hf(theta);
          if (impl_->eval.forces_eq(p, tau, theta) && v(tau) != v(theta))
            add_failure(r, where, "val equal under forced equality",
                        print_hf(v(tau)) + " vs " + print_hf(v(theta)));
          if (impl_->eval.forces_mem(p, tau, theta) && !mem(v(tau), v(theta)))
            add_failure(r, where, "val member under forced membership",
                        print_hf(v(tau)) + " notin " + print_hf(v(theta)));
        }
    }
  }
  r.millis = timer.millis();
  return r;
}

Report Verifier::check_atomic_characterizations() {
  Timer timer;
  Report r{"atomic_characterizations"};
  const auto& ctx = impl_->ctx;
  ForcesEvaluator& ev = impl_->eval;
  const auto& pool = impl_->battery.env_pool;

  // Member/Equal atoms reduce to the atomic relations.
  Formula memf = Formula::member(0, 1), eqf = Formula::equal(0, 1);
  Formula tmem = forces_transform(memf), teq = forces_transform(eqf);
  for (HfSet p : ctx.poset.carrier())
    for (HfSet x : pool)
      for (HfSet y : pool) {
        Env env{x, y};
        ++r.checked;
        bool lhs = ev.forces_holds_transformed(p, tmem, env);
        if (lhs != ev.forces_mem(p, x, y))
          add_failure(r, impl_->point_text(p, memf, env), bool_text(!lhs),
                      bool_text(lhs));
        ++r.checked;
        lhs = ev.forces_holds_transformed(p, teq, env);
        if (lhs != ev.forces_eq(p, x, y))
          add_failure(r, impl_->point_text(p, eqf, env), bool_text(!lhs),
                      bool_text(lhs));
      }

  // Forcing a universal is forcing every instance.
  const char* fmem = impl_->fmem_t.data();
  const char* feq = impl_->feq_t.data();
  int filler = impl_->m_index.at(empty_set());
  std::vector<CNode> nodes, body_nodes;
  std::vector<int> stack;
  for (const Formula& phi : impl_->battery.formulas) {
    if (phi.kind() != FormulaKind::Forall) continue;
    nodes.clear();
    body_nodes.clear();
    int root = compile_formula(phi, nodes);
    int body_root = compile_formula(phi.body(), body_nodes);
    std::vector<std::size_t> free = free_indices(phi);
    std::vector<int> env_idx(phi.arity(), filler);
    std::vector<std::size_t> odo(free.size(), 0);
    bool more = !(free.size() && impl_->pool_idx.empty());
    while (more) {
      for (std::size_t k = 0; k < free.size(); ++k)
        env_idx[free[k]] = impl_->pool_idx[odo[k]];
      stack.assign(env_idx.rbegin(), env_idx.rend());
      for (int p = 0; p < impl_->c; ++p) {
        bool lhs = impl_->forces_c(nodes, root, p, stack, fmem, feq);
        bool rhs = true;
        for (int x = 0; x < impl_->m; ++x) {
          stack.push_back(x);
          bool inst = impl_->forces_c(body_nodes, body_root, p, stack, fmem,
                                      feq);
          stack.pop_back();
          if (!inst) {
            rhs = false;
            break;
          }
        }
        ++r.checked;
        if (lhs != rhs)
          add_failure(r,
                      impl_->point_text(ctx.poset.carrier()[p], phi,
                                        impl_->env_of(env_idx)),
                      "forces forall iff forces every instance",
                      "forall=" + bool_text(lhs) +
                          " instances=" + bool_text(rhs));
      }
      more = false;
      for (std::size_t k = 0; k < odo.size(); ++k) {
        if (++odo[k] < impl_->pool_idx.size()) {
          more = true;
          break;
        }
        odo[k] = 0;
      }
    }
  }

  // Forcing a negation is having no stronger condition force the formula.
  for (const Formula& phi : enumerate_formulas(2, impl_->battery.opts.arity)) {
    Formula nf = neg(phi);
    nodes.clear();
    body_nodes.clear();
    int nroot = compile_formula(nf, nodes);
    int root = compile_formula(phi, body_nodes);
    std::vector<std::size_t> free = free_indices(phi);
    std::vector<int> env_idx(phi.arity(), filler);
    std::vector<std::size_t> odo(free.size(), 0);
    bool more = !(free.size() && impl_->pool_idx.empty());
    while (more) {
      for (std::size_t k = 0; k < free.size(); ++k)
        env_idx[free[k]] = impl_->pool_idx[odo[k]];
      stack.assign(env_idx.rbegin(), env_idx.rend());
      for (int p = 0; p < impl_->c; ++p) {
        bool lhs = impl_->forces_c(nodes, nroot, p, stack, fmem, feq);
        bool rhs = true;
        for (int q = 0; q < impl_->c; ++q)
          if (impl_->leq_cc[q * impl_->c + p] &&
              impl_->forces_c(body_nodes, root, q, stack, fmem, feq)) {
            rhs = false;
            break;
          }
        ++r.checked;
        if (lhs != rhs)
          add_failure(r,
                      impl_->point_text(ctx.poset.carrier()[p], nf,
                                        impl_->env_of(env_idx)),
                      "forces negation iff no stronger condition forces",
                      "neg=" + bool_text(lhs) + " none=" + bool_text(rhs));
      }
      more = false;
      for (std::size_t k = 0; k < odo.size(); ++k) {
        if (++odo[k] < impl_->pool_idx.size()) {
          more = true;
          break;
        }
        odo[k] = 0;
      }
    }
  }

  // Atomic equality is reflexive and symmetric, exhaustively over M.
  for (HfSet p : ctx.poset.carrier())
    for (HfSet t1 : ctx.M.elems()) {
      ++r.checked;
      if (!ev.forces_eq(p, t1, t1))
        add_failure(r,
                    "ctx=" + ctx.name + " p=" + print_hf(p) +
                        " t=" + print_hf(t1),
                    "forces_eq reflexive", "false");
      for (HfSet t2 : ctx.M.elems()) {
        ++r.checked;
        if (ev.forces_eq(p, t1, t2) != ev.forces_eq(p, t2, t1))
          add_failure(r,
                      "ctx=" + ctx.name + " p=" + print_hf(p) + " t1=" +
                          print_hf(t1) + " t2=" + print_hf(t2),
                      "forces_eq symmetric", "asymmetric");
      }
    }
  r.millis = timer.millis();
  return r;
}

Report Verifier::check_frecr_wellfounded(std::size_t rank_cap) {
  Timer timer;
  Report r{"frecr_wellfounded"};
  const auto& ctx = impl_->ctx;
  std::vector<HfSet> pool;
  for (HfSet x : ctx.M.elems())
    if (rank(x) <= rank_cap) pool.push_back(x);
  std::size_t max_depth = 0, max_nodes = 0;
  auto conds = ctx.poset.carrier();
  for (bool is_mem : {false, true})
    for (HfSet t1 : pool)
      for (HfSet t2 : pool) {
        FTuple root{is_mem, t1, t2, ctx.poset.one()};
        FrecProbe probe = probe_frecR(root, conds);
        ++r.checked;
        max_depth = std::max(max_depth, probe.max_depth);
        max_nodes = std::max(max_nodes, probe.nodes);
        if (!probe.acyclic)
          add_failure(r,
                      "ctx=" + ctx.name + " flag=" +
                          (is_mem ? std::string("mem") : std::string("eq")) +
                          " t1=" + print_hf(t1) + " t2=" + print_hf(t2),
                      "acyclic call graph", "cycle");
      }
  r.notes.push_back("max depth " + std::to_string(max_depth) + ", max nodes " +
                    std::to_string(max_nodes));
  r.millis = timer.millis();
  return r;
}

Report Verifier::check_names_extension() {
  Timer timer;
  Report r{"names_extension"};
  const auto& ctx = impl_->ctx;
  for (std::size_t g = 0; g < impl_->filters.size(); ++g) {
    const GenericFilter& G = impl_->filters[g];
    ValCache& v = impl_->caches[g];
    const Structure& MG = impl_->extensions[g];
    std::string gtext = " G=" + print_hf(G.as_hfset());

    for (HfSet x : ctx.M.elems()) {
      ++r.checked;
      HfSet vc = v(check(x, ctx.one));
      if (vc != x)
        add_failure(r, "ctx=" + ctx.name + gtext + " x=" + print_hf(x),
                    "val of check is identity", print_hf(vc));
      ++r.checked;
      if (rank(v(x)) > rank(x))
        add_failure(r, "ctx=" + ctx.name + gtext + " x=" + print_hf(x),
                    "rank(val) <= rank", std::to_string(rank(v(x))) + " > " +
                                             std::to_string(rank(x)));
    }

    // Pair names interpret to pairs, over names of small rank.
    for (HfSet s : ctx.M.elems()) {
      if (rank(s) > 3) continue;
      for (HfSet t : ctx.M.elems()) {
        if (rank(t) > 3) continue;
        ++r.checked;
        HfSet got = v(opair_name(s, t, ctx.one));
        HfSet want = opair(v(s), v(t));
        if (got != want)
          add_failure(r,
                      "ctx=" + ctx.name + gtext + " sigma=" + print_hf(s) +
                          " rho=" + print_hf(t),
                      print_hf(want), print_hf(got));
      }
    }

    // Ground model and filter land in the extension exactly when the
    // corresponding names do.
    std::size_t closed = ctx.check_closed_elems.size();
    if (closed == ctx.M.size()) {
      for (HfSet x : ctx.M.elems()) {
        ++r.checked;
        if (!MG.contains(x))
          add_failure(r, "ctx=" + ctx.name + gtext + " x=" + print_hf(x),
                      "ground element in extension", "missing");
      }
    } else {
      for (HfSet x : ctx.check_closed_elems) {
        ++r.checked;
        if (!MG.contains(x))
          add_failure(r, "ctx=" + ctx.name + gtext + " x=" + print_hf(x),
                      "check-closed element in extension", "missing");
      }
      r.notes.push_back("ground inclusion restricted to " +
                        std::to_string(closed) + "/" +
                        std::to_string(ctx.M.size()) +
                        " check-closed elements");
    }
    if (ctx.gdot_in_M) {
      ++r.checked;
      if (!MG.contains(G.as_hfset()))
        add_failure(r, "ctx=" + ctx.name + gtext,
                    "filter in extension via its canonical name", "missing");
    } else {
      r.notes.push_back("canonical filter name outside M; G in M[G] not "
                        "claimed");
    }
  }
  r.millis = timer.millis();
  return r;
}

Report Verifier::check_ordinals_and_rank() {
  Timer timer;
  Report r{"ordinals_and_rank"};
  const auto& ctx = impl_->ctx;
  for (std::size_t g = 0; g < impl_->filters.size(); ++g) {
    ValCache& v = impl_->caches[g];
    const Structure& MG = impl_->extensions[g];
    std::string gtext = " G=" + print_hf(impl_->filters[g].as_hfset());
    for (HfSet x : ctx.M.elems()) {
      ++r.checked;
      if (rank(v(x)) > rank(x))
        add_failure(r, "ctx=" + ctx.name + gtext + " x=" + print_hf(x),
                    "rank(val) <= rank", "exceeded");
    }
    for (HfSet a : ctx.M.elems()) {
      if (!is_ordinal(a)) continue;
      ++r.checked;
      if (!MG.contains(a))
        add_failure(r, "ctx=" + ctx.name + gtext + " alpha=" + print_hf(a),
                    "ordinal of M in M[G]", "missing");
    }
    for (HfSet a : MG.elems()) {
      if (!is_ordinal(a)) continue;
      ++r.checked;
      if (!ctx.in_M(a))
        add_failure(r, "ctx=" + ctx.name + gtext + " alpha=" + print_hf(a),
                    "ordinal of M[G] in M", "missing");
    }
  }
  r.millis = timer.millis();
  return r;
}

bool pairing_holds_bruteforce(const Structure& S) {
  for (HfSet a : S.elems())
    for (HfSet b : S.elems()) {
      bool found = false;
      for (HfSet c : S.elems()) {
        bool ok = true;
        for (HfSet x : S.elems())
          if (mem(x, c) != (x == a || x == b)) {
            ok = false;
            break;
          }
        if (ok) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
  return true;
}

Report Verifier::check_axioms_mg(const std::vector<Formula>& axioms) {
  Timer timer;
  Report r{"axioms_mg"};
  const auto& ctx = impl_->ctx;
  for (const Formula& ax : axioms)
    if (ax.arity() != 0)
      throw std::invalid_argument("check_axioms_mg: axiom is not closed");
  for (std::size_t g = 0; g < impl_->filters.size(); ++g) {
    const Structure& MG = impl_->extensions[g];
    std::string gtext = "ctx=" + ctx.name + " G=" +
                        print_hf(impl_->filters[g].as_hfset());
    for (const Formula& ax : axioms) {
      bool holds = sats(MG, {}, ax);
      ++r.checked;
      std::string which = print_formula(ax);
      for (ZfAxiom z : {ZfAxiom::Pairing, ZfAxiom::Extensionality,
                        ZfAxiom::Foundation, ZfAxiom::Union})
        if (ax == zf_axiom(z)) {
          which = zf_axiom_name(z);
          break;
        }
      if (ax == zf_axiom(ZfAxiom::Extensionality) ||
          ax == zf_axiom(ZfAxiom::Foundation)) {
        if (!holds)
          add_failure(r, gtext + " axiom=" + which,
                      "holds in every transitive extension", "false");
      } else if (ax == zf_axiom(ZfAxiom::Pairing)) {
        bool brute = pairing_holds_bruteforce(MG);
        if (holds != brute)
          add_failure(r, gtext + " axiom=pairing",
                      "internalized verdict matches brute force",
                      "internal=" + bool_text(holds) +
                          " brute=" + bool_text(brute));
        r.notes.push_back(gtext + " pairing=" + bool_text(holds));
      } else {
        r.notes.push_back(gtext + " axiom " + which + "=" + bool_text(holds));
      }
    }
  }
  r.millis = timer.millis();
  return r;
}

Report Verifier::check_axioms_mg() {
  return check_axioms_mg({zf_axiom(ZfAxiom::Extensionality),
                          zf_axiom(ZfAxiom::Foundation),
                          zf_axiom(ZfAxiom::Pairing),
                          zf_axiom(ZfAxiom::Union)});
}

Report Verifier::check_guard_table() {
  Timer timer;
  Report r{"guard_table"};
  const auto& ctx = impl_->ctx;
  Formula guard = forces_nand_guard();
  for (HfSet q : ctx.M.elems())
    for (HfSet p : ctx.M.elems()) {
      bool expected = ctx.poset.in_carrier(q) && ctx.poset.in_carrier(p) &&
                      ctx.poset.leq(q, p);
      Env env{q, p, ctx.carrier_hf, ctx.leq_hf, ctx.one};
      bool naive = impl_->eval.guard_by_sats(q, p);
      bool fast = impl_->eval.sats_x(env, guard);
      ++r.checked;
      if (naive != expected || fast != expected)
        add_failure(r,
                    "ctx=" + ctx.name + " q=" + print_hf(q) +
                        " p=" + print_hf(p),
                    bool_text(expected),
                    "naive=" + bool_text(naive) + " fast=" + bool_text(fast));
    }
  r.millis = timer.millis();
  return r;
}

Report Verifier::check_transformer(std::size_t depth_cap) {
  Timer timer;
  Report r{"transformer"};
  Impl& im = *impl_;
  const auto& ctx = im.ctx;
  auto carrier = ctx.poset.carrier();
  int filler = im.m_index.at(empty_set());
  std::vector<CNode> nodes;
  std::vector<int> stack;
  for (const Formula& phi :
       enumerate_formulas(depth_cap, im.battery.opts.arity)) {
    Formula tf = forces_transform(phi);
    nodes.clear();
    int root = compile_formula(phi, nodes);
    std::vector<std::size_t> free = free_indices(phi);
    std::vector<int> env_idx(phi.arity(), filler);
    std::vector<std::size_t> odo(free.size(), 0);
    bool more = !(free.size() && im.pool_idx.empty());
    while (more) {
      for (std::size_t k = 0; k < free.size(); ++k)
        env_idx[free[k]] = im.pool_idx[odo[k]];
      Env env = im.env_of(env_idx);
      stack.assign(env_idx.rbegin(), env_idx.rend());
      for (int p = 0; p < im.c; ++p) {
        bool fast = im.forces_c(nodes, root, p, stack, im.fmem_t.data(),
                                im.feq_t.data());
        bool literal = im.eval.forces_holds_transformed(carrier[p], tf, env);
        ++r.checked;
        if (fast != literal)
          add_failure(r, im.point_text(carrier[p], phi, env),
                      "table-driven recursion matches transformed formula",
                      "fast=" + bool_text(fast) +
                          " literal=" + bool_text(literal));
      }
      more = false;
      for (std::size_t k = 0; k < odo.size(); ++k) {
        if (++odo[k] < im.pool_idx.size()) {
          more = true;
          break;
        }
        odo[k] = 0;
      }
    }
  }
  r.millis = timer.millis();
  return r;
}

std::vector<Report> Verifier::run_all() {
  std::vector<Report> out = impl_->run_battery(
      Impl::kDef | Impl::kDen | Impl::kStr | Impl::kTru, AtomicMutant::None,
      false);
  out.push_back(check_IV240a());
  out.push_back(check_atomic_characterizations());
  out.push_back(check_frecr_wellfounded());
  out.push_back(check_names_extension());
  out.push_back(check_ordinals_and_rank());
  out.push_back(check_axioms_mg());
  out.push_back(check_guard_table());
  out.push_back(check_transformer());
  return out;
}

// ---------------------------------------------------------------------------

int GroundReal::bit(std::size_t k) const {
  if (k < prefix.size()) return prefix[k];
  return period[(k - prefix.size()) % period.size()];
}

namespace {

std::string bits_text(const std::vector<int>& bits) {
  std::string s;
  for (int b : bits) s += b ? '1' : '0';
  return s.empty() ? "(empty)" : s;
}

}  // namespace

ProperExtensionResult proper_extension_demo(
    std::size_t denses_requested, const std::vector<GroundReal>& ground_reals,
    std::size_t bound) {
  Timer timer;
  ProperExtensionResult res;
  res.report.suite = "proper_extension";
  CountablePoset P = cohen_poset();

  std::vector<DenseSet> denses;
  for (std::size_t n = 0; n < denses_requested; ++n) {
    std::size_t need = n + 1;
    denses.push_back(DenseSet{
        [need](HfSet f) { return cohen_decode(f).size() >= need; },
        "len>=" + std::to_string(need)});
    if (n < ground_reals.size()) {
      const GroundReal& h = ground_reals[n];
      denses.push_back(DenseSet{
          [h](HfSet f) {
            std::vector<int> bits = cohen_decode(f);
            for (std::size_t k = 0; k < bits.size(); ++k)
              if (bits[k] != h.bit(k)) return true;
            return false;
          },
          "differs-from-" + h.name});
    }
  }

  RslFilter rsl = make_rsl_filter(P, denses, bound);
  std::vector<HfSet> chain = rsl.chain();
  res.decided_prefix = chain.empty() ? 0 : cohen_decode(chain.back()).size();
  ++res.report.checked;
  if (res.decided_prefix < denses_requested)
    add_failure(res.report, "decided prefix", ">=" +
                    std::to_string(denses_requested),
                std::to_string(res.decided_prefix));

  for (const GroundReal& h : ground_reals) {
    ++res.report.checked;
    bool found = false;
    for (HfSet f : chain) {
      std::vector<int> bits = cohen_decode(f);
      for (std::size_t k = 0; k < bits.size(); ++k)
        if (bits[k] != h.bit(k)) {
          res.conflicts.push_back("generic differs from " + h.name +
                                  " at position " + std::to_string(k) +
                                  " (chain element " + bits_text(bits) + ")");
          found = true;
          break;
        }
      if (found) break;
    }
    if (!found)
      add_failure(res.report, "ground real " + h.name,
                  "conflicting chain element", "none in chain");
  }

  std::vector<HfSet> probes;
  for (HfSet f : chain)
    if (cohen_decode(f).size() <= 8) probes.push_back(f);
  res.separative = is_separative(P, probes);
  ++res.report.checked;
  if (!res.separative)
    add_failure(res.report, "separativity probe over chain prefix", "true",
                "false");
  res.report.notes.push_back("decided prefix length " +
                             std::to_string(res.decided_prefix));
  for (const std::string& c : res.conflicts) res.report.notes.push_back(c);
  res.report.millis = timer.millis();
  return res;
}

}  // namespace forcing
