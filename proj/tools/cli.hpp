#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gpk/gpk.hpp"

namespace gpk::cli {

enum ExitCode : int {
  kOk = 0,           // success, property holds, witness behaves as expected
  kUsage = 1,        // usage, I/O or parse error
  kFails = 2,        // property fails, counterexample found
  kUndefined = 3,    // mathematically undefined or numerically unresolved
};

namespace detail {

struct Globals {
  double tol = 1e-9;
  std::size_t max_iter = 100000;
  std::uint64_t seed = 0;
  bool allow_nonstandard = false;
};

inline std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Document load(const std::string& path, const Globals& g) {
  const std::string text = read_text(path);
  try {
    return parse_document(text, ParseOptions{g.allow_nonstandard});
  } catch (const ParseError& e) {
    throw ParseError(0, path + ": " + e.what());
  }
}

inline Capacity as_capacity(const Document& doc, const std::string& path) {
  if (auto c = std::get_if<Capacity>(&doc)) return *c;
  if (auto m = std::get_if<SignedMassFunction>(&doc)) return Capacity::from_masses(*m);
  if (auto p = std::get_if<ProbabilityMeasure>(&doc)) return Capacity::additive(p->frame(), p->weights());
  if (auto model = std::get_if<DempsterModel>(&doc)) return project_dempster(*model).belief;
  throw std::invalid_argument(path + ": expected a capacity, mass, probability or model document");
}

inline SignedMassFunction as_mass(const Document& doc, const std::string& path) {
  if (auto m = std::get_if<SignedMassFunction>(&doc)) return *m;
  return as_capacity(doc, path).mobius();
}

inline ProbabilityMeasure as_probability(const Document& doc, const std::string& path) {
  if (auto p = std::get_if<ProbabilityMeasure>(&doc)) return *p;
  throw std::invalid_argument(path + ": expected a probability document");
}

inline DempsterModel as_model(const Document& doc, const std::string& path) {
  if (auto m = std::get_if<DempsterModel>(&doc)) return *m;
  throw std::invalid_argument(path + ": expected a model document");
}

inline Subset parse_event(const Frame& frame, const std::string& text) {
  const auto [set, rest] = gpk::detail::parse_subset(frame, gpk::detail::trim(text), 0);
  if (!rest.empty()) throw std::invalid_argument("trailing text after subset '" + text + "'");
  return set;
}

inline std::string approx(double v) {
  std::ostringstream os;
  os << '~' << std::setprecision(12) << v;
  return os.str();
}

inline Property parse_property(const std::string& name) {
  if (name == "monotone") return Property::monotone();
  if (name == "superadditive") return Property::superadditive();
  if (name == "belief") return Property::belief();
  if (name == "coherent") return Property::coherent();
  const std::string suffix = "-monotone";
  if (name.size() > suffix.size() && name.ends_with(suffix)) {
    const std::string k = name.substr(0, name.size() - suffix.size());
    if (std::all_of(k.begin(), k.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
      return Property::k_monotone(std::stoul(k));
  }
  throw std::invalid_argument("unknown property '" + name + "'");
}

/// Rewrites "--property k-monotone K" into "--property K-monotone".
inline std::vector<std::string> normalize_args(std::vector<std::string> args) {
  for (std::size_t i = 0; i + 2 < args.size(); ++i)
    if (args[i] == "--property" && args[i + 1] == "k-monotone" &&
        std::all_of(args[i + 2].begin(), args[i + 2].end(), [](char ch) { return ch >= '0' && ch <= '9'; }) &&
        !args[i + 2].empty()) {
      args[i + 1] = args[i + 2] + "-monotone";
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i + 2));
    }
  return args;
}

// --- subcommands -----------------------------------------------------------

inline int cmd_transform(bool mobius, const std::string& path, const Globals& g, std::ostream& out) {
  const Document doc = load(path, g);
  if (mobius) {
    out << emit(as_capacity(doc, path).mobius());
  } else {
    const auto* m = std::get_if<SignedMassFunction>(&doc);
    if (!m) throw std::invalid_argument(path + ": --zeta expects a mass document");
    out << emit(Capacity::from_masses(*m));
  }
  return kOk;
}

inline int cmd_check(const std::string& property_name, const std::string& path, const Globals& g,
                     std::ostream& out) {
  const Property property = parse_property(property_name);
  const Capacity c = as_capacity(load(path, g), path);
  const Frame& f = c.frame();
  const bool holds = check_property(c, property);
  out << property.name() << ": " << (holds ? "true" : "false") << "\n";
  if (holds) return kOk;

  switch (property.kind) {
    case PropertyKind::monotone: {
      const auto v = *find_monotone_violation(c);
      out << "violation: " << f.format(v.smaller) << " subset of " << f.format(v.larger) << " but "
          << to_string(c[v.smaller]) << " > " << to_string(c[v.larger]) << "\n";
      break;
    }
    case PropertyKind::superadditive: {
      const auto v = *find_superadditive_violation(c);
      out << "violation: c(" << f.format(v.first | v.second) << ") = " << to_string(c[v.first | v.second])
          << " < c(" << f.format(v.first) << ") + c(" << f.format(v.second)
          << ") = " << to_string(c[v.first] + c[v.second]) << "\n";
      break;
    }
    case PropertyKind::k_monotone: {
      const auto v = *find_k_monotone_violation(c, property.k);
      out << "violation:";
      for (Subset s : v.sets) out << " " << f.format(s);
      out << "\nunion-value: " << to_string(v.union_value) << "\n";
      out << "inclusion-exclusion: " << to_string(v.alternating_sum) << "\n";
      break;
    }
    case PropertyKind::belief: {
      const SignedMassFunction masses = c.mobius();
      for (const auto& [s, m] : masses.masses())
        if (m < 0) {
          out << "violation: m(" << f.format(s) << ") = " << to_string(m) << " < 0\n";
          break;
        }
      break;
    }
    case PropertyKind::coherent: {
      if (core_is_empty(c)) {
        out << "violation: no probability measure dominates the capacity\n";
        break;
      }
      for (Subset a = 1; a < f.full(); ++a) {
        const Rational env = envelope_value(c, a);
        if (env != c[a]) {
          out << "violation: lower envelope at " << f.format(a) << " is " << to_string(env)
              << " but c(" << f.format(a) << ") = " << to_string(c[a]) << "\n";
          break;
        }
      }
      break;
    }
  }
  return kFails;
}

inline int cmd_project(const std::string& path, const std::string& which, const Globals& g,
                       std::ostream& out) {
  const DempsterProjection proj = project_dempster(as_model(load(path, g), path));
  if (which == "mass") out << emit(proj.mass);
  else if (which == "belief") out << emit(proj.belief);
  else if (which == "plausibility") out << emit(proj.plausibility);
  else out << emit(proj.mass) << "---\n" << emit(proj.belief) << "---\n" << emit(proj.plausibility);
  return kOk;
}

inline int cmd_revise(const std::string& mass_path, const std::string& jeffrey_path,
                      const std::string& prior_path, const Globals& g, std::ostream& out) {
  const ProbabilityMeasure p = as_probability(load(prior_path, g), prior_path);
  if (!jeffrey_path.empty()) {
    const JeffreySpec spec = JeffreySpec::from_masses(as_mass(load(jeffrey_path, g), jeffrey_path));
    out << emit(jeffrey_revise(p, spec));
    return kOk;
  }
  const SignedMeasure q = kinematic_revise(p, as_mass(load(mass_path, g), mass_path));
  if (q.is_probability()) {
    out << emit(ProbabilityMeasure(q));
    return kOk;
  }
  out << "valid: false\n";
  for (std::size_t x = 0; x < q.frame().size(); ++x)
    out << "weight " << q.frame().format(singleton(x)) << ": " << to_string(q.weight(x)) << "\n";
  return kFails;
}

inline int cmd_condition(const std::string& rule_name, const std::string& event_text,
                         const std::string& path, const Globals& g, std::ostream& out) {
  ConditioningRule rule;
  if (rule_name == "bayes") rule = ConditioningRule::bayes;
  else if (rule_name == "geometric") rule = ConditioningRule::geometric;
  else if (rule_name == "dempster") rule = ConditioningRule::dempster;
  else if (rule_name == "it") rule = ConditioningRule::it;
  else throw std::invalid_argument("unknown rule '" + rule_name + "'");

  const Capacity l = as_capacity(load(path, g), path);
  const Subset e = parse_event(l.frame(), event_text);

  if (rule == ConditioningRule::bayes && !is_k_monotone(l, 2)) {
    // Closed form not available: every cell from the LP envelope.
    SetFunction f(l.frame());
    for (Subset a = 0; a <= l.frame().full(); ++a) f[a] = conditional_envelope(l, a, e);
    out << "# method: lp-envelope (capacity is not 2-monotone)\n" << emit(Capacity(std::move(f)));
    return kOk;
  }
  const ConditionedCapacity result = condition_lower(l, e, rule);
  if (!result.envelope_cells.empty()) {
    out << "# lp-envelope cells:";
    for (Subset a : result.envelope_cells) out << " " << l.frame().format(a);
    out << "\n";
  }
  out << emit(result.capacity);
  return kOk;
}

inline int cmd_combine(const std::string& rule_name, const std::string& level_name, const std::string& p1,
                       const std::string& p2, const Globals& g, std::ostream& out) {
  CombinationRule rule;
  if (rule_name == "bar") rule = CombinationRule::bar;
  else if (rule_name == "dbar") rule = CombinationRule::dbar;
  else if (rule_name == "tbar") rule = CombinationRule::tbar;
  else if (rule_name == "dempster") rule = CombinationRule::dempster;
  else throw std::invalid_argument("unknown combination rule '" + rule_name + "'");
  CombinationLevel level;
  if (level_name == "mass") level = CombinationLevel::mass;
  else if (level_name == "belief") level = CombinationLevel::belief;
  else throw std::invalid_argument("unknown level '" + level_name + "'");

  const Capacity b1 = as_capacity(load(p1, g), p1);
  const Capacity b2 = as_capacity(load(p2, g), p2);
  out << emit(combine_belief(b1, b2, rule, level).belief);
  return kOk;
}

inline int cmd_envelope(const std::string& value, const std::vector<std::string>& conditional,
                        const std::string& revise_path, const std::string& path, const Globals& g,
                        std::ostream& out) {
  const Capacity c = as_capacity(load(path, g), path);
  const Frame& f = c.frame();
  if (!value.empty()) {
    out << "envelope: " << to_string(envelope_value(c, parse_event(f, value))) << "\n";
    return kOk;
  }
  if (!conditional.empty()) {
    const Subset a = parse_event(f, conditional.at(0));
    const Subset e = parse_event(f, conditional.at(1));
    out << "conditional-envelope: " << to_string(conditional_envelope(c, a, e)) << "\n";
    return kOk;
  }
  const Capacity l2 = as_capacity(load(revise_path, g), revise_path);
  const EnvelopeRevision rev = envelope_revise(c, l2);
  out << "epsilon: " << to_string(rev.epsilon) << "\n";
  out << "evaluation-points: " << rev.evaluation_points << "\n";
  out << "lower-bound-method: per-term conditional envelopes, upper envelopes for negative masses\n";
  for (const RevisionCell& cell : rev.cells) {
    out << f.format(cell.event) << ": lower=" << to_string(cell.lower_bound)
        << " best=" << to_string(cell.best_found) << " collapsed=" << (cell.collapsed() ? "true" : "false")
        << " witness=" << lab::detail::format_prior(cell.witness) << "\n";
  }
  return kOk;
}

inline int cmd_info(const std::vector<std::string>& relent, const Globals& g, std::ostream& out) {
  const ProbabilityMeasure q = as_probability(load(relent.at(0), g), relent.at(0));
  const ProbabilityMeasure p = as_probability(load(relent.at(1), g), relent.at(1));
  out << "relative-information: " << approx(relative_information(q, p)) << "\n";
  return kOk;
}

inline int cmd_maxent(const std::string& prior_path, const std::string& bound_path, const Globals& g,
                      std::ostream& out) {
  const ProbabilityMeasure p = as_probability(load(prior_path, g), prior_path);
  const Capacity b = as_capacity(load(bound_path, g), bound_path);
  const MaxentResult r = maxent_project(p, b, MaxentOptions{g.tol, g.max_iter});
  for (std::size_t x = 0; x < p.frame().size(); ++x)
    out << "weight " << p.frame().format(singleton(x)) << ": " << approx(r.weights[x]) << "\n";
  out << "relative-information: " << approx(r.objective) << "\n";
  out << "gap: " << approx(r.gap) << "\n";
  out << "stationarity: " << approx(r.stationarity) << "\n";
  out << "iterations: " << r.iterations << "\n";
  out << "converged: " << (r.converged ? "true" : "false") << "\n";
  return r.converged ? kOk : kUndefined;
}

inline void print_capacity_inline(std::ostream& out, const char* key, const Capacity& c) {
  out << key << ":";
  for (Subset s : gpk::detail::canonical_subsets(c.frame()))
    out << " " << c.frame().format(s) << "=" << to_string(c[s]);
  out << "\n";
}

inline int cmd_lab(const std::string& claim_id, std::size_t max_n, long grid, std::size_t samples,
                   const Globals& g, std::ostream& out) {
  const lab::Claim claim = lab::parse_claim(claim_id);
  const lab::SearchReport r = lab::search_witness(claim, lab::SearchBudget{max_n, grid, samples, g.seed});
  out << "claim: " << lab::to_string(claim) << "\n";
  out << "found: " << (r.found ? "true" : "false") << "\n";
  out << "candidates: " << r.candidates << "\n";
  if (r.witness) {
    const lab::Witness& w = *r.witness;
    out << "phase: " << r.phase << "\n";
    print_capacity_inline(out, "witness-capacity", w.primary);
    if (w.secondary) print_capacity_inline(out, "witness-secondary", *w.secondary);
    if (w.prior) out << "witness-prior: " << lab::detail::format_prior(*w.prior) << "\n";
    if (w.event) out << "witness-event: " << w.primary.frame().format(*w.event) << "\n";
    out << "violation: " << w.violation << "\n";
    out << "validated: " << (r.validated ? "true" : "false") << "\n";
  }
  out << "regression: " << r.regression << "\n";
  out << "regression-reproduced: " << (r.regression_reproduced ? "true" : "false") << "\n";
  const bool expected = claim == lab::Claim::tbar_dominance || (r.found && r.validated);
  return expected && r.regression_reproduced ? kOk : kFails;
}

inline int cmd_joint(const std::string& model_path, const std::string& prior_path,
                     const std::string& verify_path, const Globals& g, std::ostream& out) {
  const DempsterModel model = as_model(load(model_path, g), model_path);
  const ProbabilityMeasure p = as_probability(load(prior_path, g), prior_path);
  if (verify_path.empty()) {
    out << emit(canonical_joint(model, p));
    return kOk;
  }
  const Document doc = load(verify_path, g);
  const auto* q = std::get_if<JointMeasure>(&doc);
  if (!q) throw std::invalid_argument(verify_path + ": expected a joint document");
  const JointReport r = verify_joint(*q, model, p);
  out << "compatible: " << (r.compatible ? "true" : "false") << "\n";
  out << "conserving: " << (r.conserving ? "true" : "false") << "\n";
  out << "skipped-cells: " << r.skipped_cells << "\n";
  return r.compatible && r.conserving ? kOk : kFails;
}

}  // namespace detail

/// Runs the command line; args excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"Exact generalized probability kinematics on finite frames", "gpk"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--tol", g.tol, "Tolerance for floating-point operations")->capture_default_str();
  app.add_option("--max-iter", g.max_iter, "Iteration cap for iterative solvers")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for randomized operations")->capture_default_str();
  app.add_flag("--allow-nonstandard", g.allow_nonstandard, "Accept capacity values outside [0, 1]");

  std::string path, path2;
  std::function<int()> action;

  auto* transform = app.add_subcommand("transform", "Moebius or zeta transform");
  bool mobius = false, zeta = false;
  transform->add_flag("--mobius", mobius, "capacity -> masses");
  transform->add_flag("--zeta", zeta, "masses -> capacity");
  transform->add_option("file", path)->required();
  transform->callback([&] {
    if (mobius == zeta) throw CLI::ValidationError("transform", "exactly one of --mobius, --zeta");
    action = [&] { return cmd_transform(mobius, path, g, out); };
  });

  auto* check = app.add_subcommand("check", "Check a capacity property");
  std::string property;
  check->add_option("--property", property,
                    "monotone | superadditive | k-monotone K | K-monotone | belief | coherent")->required();
  check->add_option("file", path)->required();
  check->callback([&] { action = [&] { return cmd_check(property, path, g, out); }; });

  auto* project = app.add_subcommand("project", "Masses, belief and plausibility of a Dempster model");
  std::string which = "all";
  project->add_option("--emit", which, "mass | belief | plausibility | all")->capture_default_str();
  project->add_option("file", path)->required();
  project->callback([&] { action = [&] { return cmd_project(path, which, g, out); }; });

  auto* revise = app.add_subcommand("revise", "Revise a prior probability");
  std::string mass_path, jeffrey_path;
  auto* mass_opt = revise->add_option("--mass", mass_path, "mass, capacity or model document");
  auto* jeffrey_opt = revise->add_option("--jeffrey", jeffrey_path, "mass document over disjoint cells");
  mass_opt->excludes(jeffrey_opt);
  revise->add_option("prior", path)->required();
  revise->callback([&] {
    if (mass_path.empty() && jeffrey_path.empty())
      throw CLI::ValidationError("revise", "one of --mass, --jeffrey is required");
    action = [&] { return cmd_revise(mass_path, jeffrey_path, path, g, out); };
  });

  auto* condition = app.add_subcommand("condition", "Condition a lower probability on an event");
  std::string rule, event;
  condition->add_option("--rule", rule, "bayes | geometric | dempster | it")->required();
  condition->add_option("--event", event, "subset literal, e.g. {a,b}")->required();
  condition->add_option("file", path)->required();
  condition->callback([&] { action = [&] { return cmd_condition(rule, event, path, g, out); }; });

  auto* combine = app.add_subcommand("combine", "Combine two belief functions");
  std::string level;
  combine->add_option("--rule", rule, "bar | dbar | tbar | dempster")->required();
  combine->add_option("--level", level, "mass | belief")->required();
  combine->add_option("b1", path)->required();
  combine->add_option("b2", path2)->required();
  combine->callback([&] { action = [&] { return cmd_combine(rule, level, path, path2, g, out); }; });

  auto* envelope = app.add_subcommand("envelope", "Lower envelopes over the credal set");
  std::string value_set, revise_with;
  std::vector<std::string> conditional;
  auto* v_opt = envelope->add_option("--value", value_set, "min p(SET)");
  auto* c_opt = envelope->add_option("--conditional", conditional, "inf p(A|E)")->expected(2);
  auto* r_opt = envelope->add_option("--revise", revise_with, "envelope revision by the given lower bound");
  v_opt->excludes(c_opt)->excludes(r_opt);
  c_opt->excludes(r_opt);
  envelope->add_option("file", path)->required();
  envelope->callback([&] {
    if (value_set.empty() && conditional.empty() && revise_with.empty())
      throw CLI::ValidationError("envelope", "one of --value, --conditional, --revise is required");
    action = [&] { return cmd_envelope(value_set, conditional, revise_with, path, g, out); };
  });

  auto* info = app.add_subcommand("info", "Relative information");
  std::vector<std::string> relent;
  info->add_option("--relent", relent, "Q P")->expected(2)->required();
  info->callback([&] { action = [&] { return cmd_info(relent, g, out); }; });

  auto* maxent = app.add_subcommand("maxent", "Minimum relative information posterior above a bound");
  maxent->add_option("--prior", path, "probability document")->required();
  maxent->add_option("--bound", path2, "lower probability document")->required();
  maxent->callback([&] { action = [&] { return cmd_maxent(path, path2, g, out); }; });

  auto* lab_cmd = app.add_subcommand("lab", "Counterexample search");
  std::string claim;
  std::size_t max_n = 3, samples = 2000;
  long grid = 8;
  lab_cmd->add_option("claim", claim,
                      "monotone-characterization | two-monotone-characterization | maxent-gap | "
                      "it-self-conditional | tbar-dominance")->required();
  lab_cmd->add_option("--max-n", max_n, "largest frame size searched")->capture_default_str();
  lab_cmd->add_option("--grid", grid, "grid denominator")->capture_default_str();
  lab_cmd->add_option("--samples", samples, "random samples after the grid")->capture_default_str();
  lab_cmd->callback([&] { action = [&] { return cmd_lab(claim, max_n, grid, samples, g, out); }; });

  auto* joint = app.add_subcommand("joint", "Canonical conserving joint measure of a model and prior");
  std::string verify_path;
  joint->add_option("--verify", verify_path, "check a joint document instead of emitting one");
  joint->add_option("model", path)->required();
  joint->add_option("prior", path2)->required();
  joint->callback([&] { action = [&] { return cmd_joint(path, path2, verify_path, g, out); }; });

  args = normalize_args(std::move(args));
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    return action ? action() : kUsage;
  } catch (const UndefinedOperation& e) {
    err << "gpk: undefined: " << e.what() << "\n";
    return kUndefined;
  } catch (const std::exception& e) {
    err << "gpk: error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace gpk::cli
