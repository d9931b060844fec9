#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "forcing/context.hpp"
#include "forcing/forces.hpp"
#include "forcing/formula.hpp"
#include "forcing/names.hpp"
#include "forcing/posets.hpp"

namespace forcing {

struct Failure {
  std::string inputs;    // replayable text (HF literals, s-expressions)
  std::string expected;
  std::string got;
};

struct Report {
  std::string suite;
  std::size_t checked = 0;
  std::vector<Failure> failures;
  std::vector<std::string> notes;  // non-fatal verdicts
  double millis = 0;

  bool passed() const { return failures.empty(); }
};

// JSON shape: {"suite","checked","failures","notes"} plus, when
// include_timings, a separate "timings" object; comparison payload never
// contains timing data.
nlohmann::json report_json(const Report& r, bool include_timings = true);
nlohmann::json reports_json(const std::vector<Report>& rs,
                            bool include_timings = true);
std::string report_text(const Report& r);

struct BatteryOptions {
  std::size_t depth = 4;     // formula size budget (node count)
  std::size_t arity = 3;     // free-index cap
  std::size_t env_rank = 4;  // env entries: elements of M of rank <= this
};

struct Battery {
  BatteryOptions opts;
  std::vector<Formula> formulas;  // pure, arity <= opts.arity
  std::vector<HfSet> env_pool;    // canonically sorted
};

// All pure formulas of size <= max_size whose arity stays <= arity_cap
// (indices under k binders may reach arity_cap + k - 1).
std::vector<Formula> enumerate_formulas(std::size_t max_size,
                                        std::size_t arity_cap);

Battery make_battery(const ForcingContext& ctx, BatteryOptions opts = {});

// Model-theoretic side of the forcing relation: true iff every generic
// filter containing p satisfies phi of the valued environment in M[G].
bool mt_forces(const ForcingContext& ctx, HfSet p, const Formula& phi,
               const Env& env);

// Runs the suites against one context.  Filters, extensions and the
// forcing evaluator are built once and shared; battery points are
// evaluated once and feed every battery-driven suite.
class Verifier {
public:
  explicit Verifier(const ForcingContext& ctx, BatteryOptions opts = {});
  ~Verifier();

  const ForcingContext& ctx() const;
  const Battery& battery() const;

  Report check_definition_of_forcing(AtomicMutant mutant = AtomicMutant::None,
                                     bool stop_on_first = false);
  Report check_density();
  Report check_strengthening();
  Report check_truth();
  Report check_IV240a();
  Report check_atomic_characterizations();
  Report check_frecr_wellfounded(std::size_t rank_cap = 5);
  Report check_names_extension();
  Report check_ordinals_and_rank();
  Report check_axioms_mg(const std::vector<Formula>& axioms);
  Report check_axioms_mg();  // pairing, extensionality, foundation, union
  Report check_guard_table();  // order guard vs naive satisfaction

  // The battery engine evaluates forcing by structural recursion with
  // precomputed atomic tables; this suite replays a size-capped battery
  // through literal satisfaction of the transformed formula and compares.
  Report check_transformer(std::size_t depth_cap = 3);

  // Every suite above, in a fixed order, sharing one battery pass.
  std::vector<Report> run_all();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// An eventually periodic bit stream.
struct GroundReal {
  std::vector<int> prefix;
  std::vector<int> period;  // nonempty
  std::string name;
  int bit(std::size_t k) const;
};

struct ProperExtensionResult {
  Report report;
  std::size_t decided_prefix = 0;       // length of the last chain element
  std::vector<std::string> conflicts;   // per ground real, the witness
  bool separative = false;
};

// Rasiowa-Sikorski over the Cohen poset: length-dense sets D_n (n <
// denses_requested) interleaved with, for each ground real h, the set of
// conditions differing from h somewhere.  Throws DensityBoundError when a
// witness search exhausts `bound`.
ProperExtensionResult proper_extension_demo(
    std::size_t denses_requested, const std::vector<GroundReal>& ground_reals,
    std::size_t bound = 1u << 20);

// Independent pairing check used to cross-examine the internalized axiom.
bool pairing_holds_bruteforce(const Structure& S);

}  // namespace forcing
