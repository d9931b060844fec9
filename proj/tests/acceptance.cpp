// End-to-end acceptance gate.  Each numbered criterion prints exactly one
// PASS/FAIL line; the process exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "forcing/context.hpp"
#include "forcing/forces.hpp"
#include "forcing/formula.hpp"
#include "forcing/harness.hpp"
#include "forcing/hfset.hpp"
#include "forcing/names.hpp"
#include "forcing/posets.hpp"

using namespace forcing;

namespace {

int g_failures = 0;

void verdict(int criterion, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion,
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::vector<HfSet> all_bitseqs(std::size_t max_len) {
  std::vector<HfSet> out;
  for (std::size_t len = 0; len <= max_len; ++len)
    for (std::size_t mask = 0; mask < (std::size_t{1} << len); ++mask) {
      std::vector<int> bits(len);
      for (std::size_t k = 0; k < len; ++k) bits[k] = (mask >> k) & 1;
      out.push_back(cohen_encode(bits));
    }
  return out;
}

}  // namespace

int main() {
  std::vector<ForcingContext> contexts = {trivial_context(), vposet_context(),
                                          chain3_context()};

  // One verifier per context with the default battery (formula size <= 4,
  // arity <= 3, environments from names of rank <= 4); every suite below
  // shares its precomputed state.
  std::vector<std::unique_ptr<Verifier>> verifiers;
  verifiers.reserve(contexts.size());
  for (const ForcingContext& ctx : contexts)
    verifiers.push_back(std::make_unique<Verifier>(ctx));

  std::map<std::string, std::vector<Report>> by_suite;
  auto t_all = std::chrono::steady_clock::now();
  for (auto& v : verifiers)
    for (Report& r : v->run_all()) by_suite[r.suite].push_back(std::move(r));
  double suite_seconds = seconds_since(t_all);

  auto suites_pass = [&](const std::vector<std::string>& names,
                         std::string* detail) {
    bool ok = true;
    std::size_t checked = 0;
    for (const std::string& n : names) {
      auto it = by_suite.find(n);
      if (it == by_suite.end() || it->second.size() != contexts.size()) {
        *detail += n + " missing; ";
        ok = false;
        continue;
      }
      for (const Report& r : it->second) {
        checked += r.checked;
        if (!r.passed()) {
          ok = false;
          *detail += n + " has " + std::to_string(r.failures.size()) +
                     " failures (first: " + r.failures[0].inputs + "); ";
        }
      }
    }
    *detail += std::to_string(checked) + " points";
    return ok;
  };

  {  // 1. Definition-of-forcing master oracle equivalence.
    std::string detail = "definition of forcing, 3 contexts, full battery: ";
    bool ok = suites_pass({"definition_of_forcing"}, &detail);
    double mins = suite_seconds / 60.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, ", all suites in %.1f s", suite_seconds);
    detail += buf;
    verdict(1, ok && mins <= 10.0, detail);
  }

  {  // 2. Density, strengthening, truth, and the forced-identity lemma.
    std::string detail = "fundamental-theorem suites: ";
    bool ok = suites_pass({"density", "strengthening", "truth", "IV240a"},
                          &detail);
    verdict(2, ok, detail);
  }

  {  // 3. Atomic characterizations plus symmetry/reflexivity.
    std::string detail = "atomic characterizations: ";
    bool ok = suites_pass({"atomic_characterizations"}, &detail);
    std::size_t pts = 0;
    for (const ForcingContext& ctx : contexts) {
      ForcesEvaluator ev(ctx);
      ev.precompute();
      for (HfSet p : ctx.poset.carrier())
        for (HfSet t1 : ctx.M.elems()) {
          if (!ev.forces_eq(p, t1, t1)) ok = false;
          for (HfSet t2 : ctx.M.elems()) {
            ++pts;
            if (ev.forces_eq(p, t1, t2) != ev.forces_eq(p, t2, t1)) ok = false;
          }
        }
    }
    detail += " + symmetry/reflexivity on " + std::to_string(pts) +
              " name pairs";
    verdict(3, ok, detail);
  }

  {  // 4. Well-founded atomic recursion.
    std::string detail = "frecR call graphs acyclic (names of rank <= 5): ";
    bool ok = suites_pass({"frecr_wellfounded"}, &detail);
    for (const Report& r : by_suite["frecr_wellfounded"])
      for (const std::string& n : r.notes) detail += "; " + n;
    verdict(4, ok, detail);
  }

  {  // 5. Names and extensions.
    std::string detail = "names/extension and ordinals/rank suites: ";
    bool ok = suites_pass({"names_extension", "ordinals_and_rank"}, &detail);
    verdict(5, ok, detail);
  }

  {  // 6. Literal artifacts.
    bool pairing_literal =
        zf_axiom(ZfAxiom::Pairing) ==
        Formula::forall(Formula::forall(exists(upair_fm(2, 1, 0))));
    CountablePoset C = cohen_poset();
    std::size_t probed = 0;
    bool cohen_ok = true;
    for (HfSet f : all_bitseqs(8)) {
      HfSet f0 = seq_upd(f, 0), f1 = seq_upd(f, 1);
      ++probed;
      if (C.leq(f0, f1) || C.leq(f1, f0)) cohen_ok = false;
    }
    verdict(6, pairing_literal && cohen_ok,
            "pairing axiom AST literal; seq_upd(f,0) incompatible with "
            "seq_upd(f,1) for all " +
                std::to_string(probed) + " sequences of length <= 8");
  }

  {  // 7. Proper-extension demo.
    auto t0 = std::chrono::steady_clock::now();
    std::vector<GroundReal> reals = {
        {{}, {0}, "zeros"},          {{}, {1}, "ones"},
        {{}, {0, 1}, "alternating"}, {{1, 1, 0}, {0}, "110-then-zeros"},
        {{0}, {1, 0, 0}, "0-then-100"}};
    bool ok = false;
    std::string detail;
    try {
      ProperExtensionResult r = proper_extension_demo(50, reals);
      double secs = seconds_since(t0);
      ok = r.report.passed() && r.decided_prefix >= 50 &&
           r.conflicts.size() == reals.size() && r.separative && secs <= 10.0;
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    "decided prefix %zu, %zu/%zu conflicts, separative, "
                    "%.2f s",
                    r.decided_prefix, r.conflicts.size(), reals.size(), secs);
      detail = buf;
    } catch (const DensityBoundError& e) {
      detail = std::string("density bound exceeded: ") + e.what();
    }
    verdict(7, ok, detail);
  }

  {  // 8. Mutation sensitivity.
    struct Named {
      AtomicMutant m;
      const char* name;
    };
    std::vector<Named> mutants = {
        {AtomicMutant::DropWitnessOrder, "DropWitnessOrder"},
        {AtomicMutant::EqAtPointOnly, "EqAtPointOnly"},
        {AtomicMutant::EqIffToImplies, "EqIffToImplies"},
        {AtomicMutant::MemNoDensity, "MemNoDensity"}};
    bool ok = true;
    std::string detail = "mutants detected by the definition suite:";
    for (const Named& mu : mutants) {
      bool caught = false;
      std::string where;
      for (std::size_t i = 0; i < verifiers.size() && !caught; ++i) {
        Report r = verifiers[i]->check_definition_of_forcing(
            mu.m, /*stop_on_first=*/true);
        if (!r.passed()) {
          caught = true;
          where = contexts[i].name;
        }
      }
      ok = ok && caught;
      detail += std::string(" ") + mu.name +
                (caught ? "(" + where + ")" : "(NOT DETECTED)");
    }
    verdict(8, ok, detail);
  }

  {  // 9. Axioms in the extensions.
    std::string detail = "axiom suite: ";
    bool ok = suites_pass({"axioms_mg"}, &detail);
    std::size_t exts = 0;
    for (const ForcingContext& ctx : contexts)
      for (const GenericFilter& G : all_generic_filters(ctx)) {
        Structure MG = generic_extension(ctx, G);
        ++exts;
        if (!sats(MG, {}, zf_axiom(ZfAxiom::Extensionality))) ok = false;
        if (!sats(MG, {}, zf_axiom(ZfAxiom::Foundation))) ok = false;
        if (sats(MG, {}, zf_axiom(ZfAxiom::Pairing)) !=
            pairing_holds_bruteforce(MG))
          ok = false;
      }
    detail += "; extensionality+foundation hold and the pairing verdict "
              "matches the independent checker in all " +
              std::to_string(exts) + " extensions";
    verdict(9, ok, detail);
  }

  std::printf("%s\n", g_failures == 0 ? "ACCEPTANCE: all criteria passed"
                                      : "ACCEPTANCE: FAILURES PRESENT");
  return g_failures == 0 ? 0 : 1;
}
