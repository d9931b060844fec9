#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "forcing/context.hpp"
#include "forcing/forces.hpp"
#include "forcing/formula.hpp"
#include "forcing/harness.hpp"
#include "forcing/hfset.hpp"
#include "forcing/names.hpp"
#include "forcing/posets.hpp"

using nlohmann::json;

namespace {

// Splits "a,b,c" at top level, respecting {...} and <...> nesting.
std::vector<std::string> split_top(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '{' || c == '<') ++depth;
    if (c == '}' || c == '>') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

forcing::Env parse_env(const std::string& text) {
  std::string t = text;
  if (!t.empty() && t.front() == '[' && t.back() == ']')
    t = t.substr(1, t.size() - 2);
  forcing::Env env;
  for (const std::string& part : split_top(t)) {
    std::string trimmed;
    for (char c : part)
      if (!isspace(static_cast<unsigned char>(c))) trimmed += c;
    if (!trimmed.empty()) env.push_back(forcing::parse_hf(trimmed));
  }
  return env;
}

forcing::FinitePoset poset_from_json(const json& j) {
  std::vector<forcing::HfSet> carrier;
  for (const auto& e : j.at("carrier"))
    carrier.push_back(forcing::parse_hf(e.get<std::string>()));
  std::vector<std::pair<forcing::HfSet, forcing::HfSet>> leq;
  for (const auto& e : j.at("leq"))
    leq.emplace_back(forcing::parse_hf(e.at(0).get<std::string>()),
                     forcing::parse_hf(e.at(1).get<std::string>()));
  return forcing::FinitePoset(carrier, leq,
                              forcing::parse_hf(j.at("one").get<std::string>()));
}

forcing::ForcingContext context_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open context file " + path);
  json j = json::parse(in);
  if (j.value("regime", "finite") != "finite")
    throw std::invalid_argument(
        "countable-regime specs drive `generic rsl cohen`, not finite "
        "contexts");
  forcing::ContextOptions opts;
  opts.name = j.value("name", path);
  for (const auto& e : j.at("seed")) {
    std::string s = e.get<std::string>();
    if (s.rfind("vset:", 0) == 0) {
      forcing::HfSet v = forcing::vset(std::stoul(s.substr(5)));
      for (forcing::HfSet c : v.children()) opts.seed.push_back(c);
    } else {
      opts.seed.push_back(forcing::parse_hf(s));
    }
  }
  if (j.contains("poset")) {
    if (j["poset"].is_string())
      throw std::invalid_argument("finite context needs an inline poset");
    opts.poset = poset_from_json(j["poset"]);
  }
  opts.rank_cap = j.value("rank_cap", opts.rank_cap);
  if (j.contains("close")) {
    const json& c = j["close"];
    opts.close_check = c.value("check", opts.close_check);
    opts.close_gdot = c.value("gdot", opts.close_gdot);
    opts.close_opair_names = c.value("opair_names", opts.close_opair_names);
    opts.close_pairs = c.value("pairs", opts.close_pairs);
    opts.close_domains = c.value("domains", opts.close_domains);
  }
  return forcing::build_context(opts);
}

forcing::ForcingContext load_context(const std::string& arg) {
  if (arg == "trivial") return forcing::trivial_context();
  if (arg == "vposet") return forcing::vposet_context();
  if (arg == "chain3") return forcing::chain3_context();
  return context_from_file(arg);
}

forcing::Renaming parse_renaming(const std::string& text) {
  forcing::Renaming rho;
  for (const std::string& part : split_top(text)) {
    auto eq = part.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("renaming entries look like i=j");
    rho[std::stoul(part.substr(0, eq))] = std::stoul(part.substr(eq + 1));
  }
  return rho;
}

forcing::BatteryOptions parse_battery(const std::vector<std::string>& kvs) {
  forcing::BatteryOptions opts;
  for (const std::string& kv : kvs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("battery options look like depth=4");
    std::string key = kv.substr(0, eq);
    std::size_t v = std::stoul(kv.substr(eq + 1));
    if (key == "depth")
      opts.depth = v;
    else if (key == "arity")
      opts.arity = v;
    else if (key == "env_rank")
      opts.env_rank = v;
    else
      throw std::invalid_argument("unknown battery option " + key);
  }
  return opts;
}

std::vector<int> parse_bits(const std::string& s) {
  std::vector<int> bits;
  for (char c : s) {
    if (c != '0' && c != '1')
      throw std::invalid_argument("bit strings contain only 0 and 1");
    bits.push_back(c - '0');
  }
  return bits;
}

int run(int argc, char** argv) {
  CLI::App app{"forcing machinery over hereditarily finite sets"};
  app.require_subcommand(1);

  // formula ----------------------------------------------------------------
  auto* formula = app.add_subcommand("formula", "formula utilities");
  formula->require_subcommand(1);
  std::string f_text, f_map;
  auto* f_parse = formula->add_subcommand("parse", "parse and echo");
  f_parse->add_option("formula", f_text)->required();
  auto* f_print = formula->add_subcommand("print", "canonical form");
  f_print->add_option("formula", f_text)->required();
  auto* f_arity = formula->add_subcommand("arity", "number of free indices");
  f_arity->add_option("formula", f_text)->required();
  auto* f_rename = formula->add_subcommand("rename", "rename free indices");
  f_rename->add_option("formula", f_text)->required();
  f_rename->add_option("mapping", f_map, "comma-separated i=j")->required();

  // model ------------------------------------------------------------------
  auto* model = app.add_subcommand("model", "ground model construction");
  std::string m_spec;
  auto* m_build = model->add_subcommand("build", "build and validate");
  m_build->add_option("spec", m_spec, "trivial|vposet|chain3 or JSON file")
      ->required();

  // sats -------------------------------------------------------------------
  auto* sats_cmd = app.add_subcommand("sats", "satisfaction in a structure");
  std::string s_model, s_env, s_formula;
  sats_cmd->add_option("model", s_model,
                       "context name/file, or an HF literal whose members "
                       "form the structure")
      ->required();
  sats_cmd->add_option("env", s_env, "[hf,hf,...]")->required();
  sats_cmd->add_option("formula", s_formula)->required();

  // forces -----------------------------------------------------------------
  auto* forces = app.add_subcommand("forces", "forcing relation");
  forces->require_subcommand(1);
  std::string fe_ctx, fe_p, fe_formula, fe_env;
  auto* forces_eval = forces->add_subcommand("eval", "does p force phi?");
  forces_eval->add_option("ctx", fe_ctx)->required();
  forces_eval->add_option("p", fe_p)->required();
  forces_eval->add_option("formula", fe_formula)->required();
  forces_eval->add_option("env", fe_env)->required();
  std::string ft_formula;
  auto* forces_tf = forces->add_subcommand("transform", "syntactic transform");
  forces_tf->add_option("formula", ft_formula)->required();

  // generic ----------------------------------------------------------------
  auto* generic = app.add_subcommand("generic", "generic filters");
  generic->require_subcommand(1);
  std::string g_ctx;
  auto* g_all = generic->add_subcommand("all", "every generic filter");
  g_all->add_option("ctx", g_ctx)->required();
  auto* g_rsl = generic->add_subcommand("rsl", "chain construction");
  std::string g_poset;
  std::size_t g_denses = 10, g_bound = 1u << 20;
  std::vector<std::string> g_reals;
  g_rsl->add_option("poset", g_poset, "only `cohen` is built in")->required();
  g_rsl->add_option("--denses", g_denses, "number of length-dense sets");
  g_rsl->add_option("--bound", g_bound, "witness search bound");
  g_rsl->add_option("--real", g_reals,
                    "ground real prefix[/period], e.g. 01/10; repeatable");

  // extend -----------------------------------------------------------------
  auto* extend = app.add_subcommand("extend", "print M[G]");
  std::string e_ctx, e_filter;
  extend->add_option("ctx", e_ctx)->required();
  extend->add_option("filter", e_filter, "HF literal set of conditions")
      ->required();

  // verify -----------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "verification suites");
  std::string v_suite, v_ctx, v_json;
  std::vector<std::string> v_battery;
  verify->add_option("suite", v_suite,
                     "definition|density|strengthening|truth|iv240a|atomic|"
                     "frecr|names|ordinals|axioms|guard|transformer|all")
      ->required();
  verify->add_option("ctx", v_ctx)->required();
  verify->add_option("--battery", v_battery, "depth=D arity=A [env_rank=R]");
  verify->add_option("--json", v_json, "write JSON report to this file");

  CLI11_PARSE(app, argc, argv);

  if (f_parse->parsed() || f_print->parsed()) {
    std::cout << forcing::print_formula(forcing::parse_formula(f_text))
              << "\n";
    return 0;
  }
  if (f_arity->parsed()) {
    std::cout << forcing::parse_formula(f_text).arity() << "\n";
    return 0;
  }
  if (f_rename->parsed()) {
    std::cout << forcing::print_formula(forcing::rename(
                     forcing::parse_formula(f_text), parse_renaming(f_map)))
              << "\n";
    return 0;
  }

  if (m_build->parsed()) {
    forcing::ForcingContext ctx = load_context(m_spec);
    std::cout << "context " << ctx.name << "\n"
              << "  |M| = " << ctx.M.size() << "\n"
              << "  carrier = " << forcing::print_hf(ctx.carrier_hf) << "\n"
              << "  one = " << forcing::print_hf(ctx.one) << "\n"
              << "  check-closed elements: " << ctx.check_closed_elems.size()
              << "/" << ctx.M.size() << "\n"
              << "  gdot in M: " << (ctx.gdot_in_M ? "yes" : "no") << "\n"
              << "  all carrier subsets in M (M-generic = generic): "
              << (ctx.all_poset_subsets_in_M ? "yes" : "no") << "\n";
    return 0;
  }

  if (sats_cmd->parsed()) {
    forcing::Structure S;
    if (s_model == "trivial" || s_model == "vposet" || s_model == "chain3" ||
        s_model.find('.') != std::string::npos) {
      S = load_context(s_model).M;
    } else {
      forcing::HfSet m = forcing::parse_hf(s_model);
      std::vector<forcing::HfSet> elems(m.children().begin(),
                                        m.children().end());
      S = forcing::Structure(elems);
    }
    bool v = forcing::sats(S, parse_env(s_env),
                           forcing::parse_formula(s_formula));
    std::cout << (v ? "true" : "false") << "\n";
    return 0;
  }

  if (forces_eval->parsed()) {
    forcing::ForcingContext ctx = load_context(fe_ctx);
    bool v = forcing::forces_holds(ctx, forcing::parse_hf(fe_p),
                                   forcing::parse_formula(fe_formula),
                                   parse_env(fe_env));
    std::cout << (v ? "true" : "false") << "\n";
    return 0;
  }
  if (forces_tf->parsed()) {
    std::cout << forcing::print_formula(
                     forcing::forces_transform(forcing::parse_formula(ft_formula)))
              << "\n";
    return 0;
  }

  if (g_all->parsed()) {
    forcing::ForcingContext ctx = load_context(g_ctx);
    for (const forcing::GenericFilter& G : forcing::all_generic_filters(ctx))
      std::cout << forcing::print_hf(G.as_hfset()) << "\n";
    return 0;
  }
  if (g_rsl->parsed()) {
    if (g_poset != "cohen")
      throw std::invalid_argument("only the cohen poset is built in");
    std::vector<forcing::GroundReal> reals;
    for (std::size_t i = 0; i < g_reals.size(); ++i) {
      std::string spec = g_reals[i];
      auto slash = spec.find('/');
      forcing::GroundReal h;
      h.name = "real" + std::to_string(i);
      h.prefix = parse_bits(spec.substr(0, slash));
      h.period = slash == std::string::npos
                     ? std::vector<int>{0}
                     : parse_bits(spec.substr(slash + 1));
      if (h.period.empty()) h.period = {0};
      reals.push_back(std::move(h));
    }
    forcing::ProperExtensionResult res =
        forcing::proper_extension_demo(g_denses, reals, g_bound);
    std::cout << report_text(res.report);
    std::cout << "chain tail: decided prefix length " << res.decided_prefix
              << ", separative probe " << (res.separative ? "true" : "false")
              << "\n";
    return res.report.passed() ? 0 : 1;
  }

  if (extend->parsed()) {
    forcing::ForcingContext ctx = load_context(e_ctx);
    forcing::HfSet g = forcing::parse_hf(e_filter);
    std::vector<forcing::HfSet> elems(g.children().begin(),
                                      g.children().end());
    for (forcing::HfSet p : elems)
      if (!ctx.poset.in_carrier(p))
        throw std::invalid_argument("filter element outside carrier: " +
                                    forcing::print_hf(p));
    forcing::GenericFilter G = forcing::GenericFilter::explicit_filter(elems);
    forcing::Structure MG = forcing::generic_extension(ctx, G);
    for (forcing::HfSet x : MG.elems())
      std::cout << forcing::print_hf(x) << "\n";
    return 0;
  }

  if (verify->parsed()) {
    forcing::ForcingContext ctx = load_context(v_ctx);
    forcing::Verifier verifier(ctx, parse_battery(v_battery));
    std::vector<forcing::Report> reports;
    if (v_suite == "all")
      reports = verifier.run_all();
    else if (v_suite == "definition")
      reports.push_back(verifier.check_definition_of_forcing());
    else if (v_suite == "density")
      reports.push_back(verifier.check_density());
    else if (v_suite == "strengthening")
      reports.push_back(verifier.check_strengthening());
    else if (v_suite == "truth")
      reports.push_back(verifier.check_truth());
    else if (v_suite == "iv240a")
      reports.push_back(verifier.check_IV240a());
    else if (v_suite == "atomic")
      reports.push_back(verifier.check_atomic_characterizations());
    else if (v_suite == "frecr")
      reports.push_back(verifier.check_frecr_wellfounded());
    else if (v_suite == "names")
      reports.push_back(verifier.check_names_extension());
    else if (v_suite == "ordinals")
      reports.push_back(verifier.check_ordinals_and_rank());
    else if (v_suite == "axioms")
      reports.push_back(verifier.check_axioms_mg());
    else if (v_suite == "guard")
      reports.push_back(verifier.check_guard_table());
    else if (v_suite == "transformer")
      reports.push_back(verifier.check_transformer());
    else
      throw std::invalid_argument("unknown suite " + v_suite);

    bool ok = true;
    for (const forcing::Report& r : reports) {
      std::cout << report_text(r);
      ok = ok && r.passed();
    }
    if (!v_json.empty()) {
      std::ofstream out(v_json);
      if (!out) throw std::invalid_argument("cannot write " + v_json);
      out << reports_json(reports).dump(2) << "\n";
    }
    return ok ? 0 : 1;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const forcing::DensityBoundError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
