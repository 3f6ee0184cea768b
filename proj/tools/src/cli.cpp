#include "dpass/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "dpass/system_file.hpp"
#include "report.hpp"

namespace dpass::cli {

namespace {

struct Common {
  std::string file;
  std::vector<std::string> bindings;
  std::string format = "text";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("file", c.file, "System file")->required();
  cmd->add_option("--bind", c.bindings, "Bind a declared constant, e.g. r=-1/2")->take_all();
  cmd->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"text", "json"}));
}

/// Raised for problems with the input rather than the mathematics.
class InputError : public Error {
 public:
  using Error::Error;
};

SystemFile load(const Common& c) {
  SystemFile file;
  try {
    file = load_system_file(c.file);
  } catch (const Error& e) {
    throw InputError(c.file + ": " + e.what());
  }
  std::map<std::string, Rational> values;
  for (const auto& b : c.bindings) {
    try {
      values.insert(parse_binding(b));
    } catch (const Error& e) {
      throw InputError("--bind " + b + ": " + e.what());
    }
  }
  try {
    return bind_constants(std::move(file), values);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
}

DiffSystem system_of(const SystemFile& file, const std::string& path) {
  try {
    return to_system(file);
  } catch (const InvalidSystemError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

std::string pair_label(const std::string& a, const std::string& b) { return "(" + a + "," + b + ")"; }

// check ---------------------------------------------------------------------

int cmd_check(const Common& c, std::ostream& out) {
  SystemFile file = load(c);
  DiffSystem system = system_of(file, c.file);
  Naming naming = file.naming();
  NormalizationReport norm = is_normalized(system, naming);

  std::vector<PairReport> pairs;
  std::string verdict = "passive";
  if (!norm.normalized) {
    verdict = "not passive: not normalized: " + norm.witness;
  } else {
    pairs = check_reducibility(system);
    for (const auto& p : pairs) {
      if (!p.zero) {
        verdict = "not passive: pair " + pair_label(p.first, p.second);
        break;
      }
    }
  }
  bool passive = verdict == "passive";

  if (c.format == "json") {
    Json j;
    j["command"] = "check";
    j["passive"] = passive;
    j["verdict"] = verdict;
    j["normalized"] = norm.normalized;
    if (!norm.normalized) j["witness"] = norm.witness;
    j["system"] = to_json(system, naming);
    Json pj = Json::array();
    for (const auto& p : pairs) pj.push_back(to_json(p, naming));
    j["pairs"] = std::move(pj);
    emit(out, j);
  } else {
    out << "ranking: " << system.ranking().describe(naming) << '\n';
    for (const auto& eq : system.equations()) out << eq.name << ": " << equation_text(eq, naming) << '\n';
    out << "normalized: " << (norm.normalized ? "yes" : "no") << '\n';
    for (const auto& p : pairs) {
      out << "pair " << pair_label(p.first, p.second) << ": ";
      if (p.zero) {
        out << "reduces to 0" << (p.probabilistic ? " (probabilistic)" : "") << '\n';
      } else {
        out << "normal form " << format(p.normal_form.remainder, naming) << '\n';
      }
    }
    out << verdict << '\n';
  }
  return passive ? kSuccess : kNotPassive;
}

// complete ------------------------------------------------------------------

struct CompleteArgs {
  std::size_t max_eqs = CompletionLimits{}.max_new_equations;
  std::size_t max_steps = CompletionLimits{}.max_steps;
  bool trace = false;
  std::string output;
};

int status_code(CompletionStatus s) {
  switch (s) {
    case CompletionStatus::Passive:
      return kSuccess;
    case CompletionStatus::Incomplete:
      return kIncomplete;
    case CompletionStatus::Failed:
      return kFailed;
  }
  return kFailed;
}

int cmd_complete(const Common& c, const CompleteArgs& a, std::ostream& out) {
  SystemFile file = load(c);
  DiffSystem system = system_of(file, c.file);
  Naming naming = file.naming();
  PassivityReport report = complete(system, CompletionLimits{a.max_eqs, a.max_steps});
  std::string dsl = write_system_file(report.system, file);
  if (!a.output.empty()) {
    std::ofstream f(a.output, std::ios::binary);
    if (!f) throw InputError("cannot write '" + a.output + "'");
    f << dsl;
  }
  std::vector<std::string> promoted;
  for (const auto& e : report.trace.events) {
    if (e.promoted) promoted.push_back(e.promoted->name + " from " + pair_label(e.first, e.second));
  }

  if (c.format == "json") {
    Json j;
    j["command"] = "complete";
    j["status"] = to_string(report.status);
    if (!report.reason.empty()) j["reason"] = report.reason;
    j["generations"] = report.trace.generations;
    j["promotions"] = promoted;
    j["system"] = to_json(report.system, naming);
    Json cones = Json::array();
    for (const auto& cone : report.principal) cones.push_back(format(JetVar{cone.unknown, cone.apex}, naming));
    j["principal_cones"] = std::move(cones);
    if (a.trace) j["trace"] = to_json(report.trace, naming);
    if (a.output.empty()) j["file"] = dsl;
    emit(out, j);
  } else {
    out << "status: " << to_string(report.status) << '\n';
    if (!report.reason.empty()) out << "reason: " << report.reason << '\n';
    out << "generations: " << report.trace.generations << '\n';
    for (const auto& p : promoted) out << "promoted: " << p << '\n';
    if (a.trace) out << completion_trace_text(report.trace, naming);
    if (a.output.empty()) out << dsl;
  }
  return status_code(report.status);
}

// reduce --------------------------------------------------------------------

struct ReduceArgs {
  std::string expression;
  std::string using_list;
};

int cmd_reduce(const Common& c, const ReduceArgs& a, std::ostream& out) {
  SystemFile file = load(c);
  DiffSystem system = system_of(file, c.file);
  Naming naming = file.naming();
  if (!a.using_list.empty()) {
    std::vector<std::string> names;
    std::stringstream ss(a.using_list);
    for (std::string n; std::getline(ss, n, ',');) {
      if (!n.empty()) names.push_back(n);
    }
    try {
      system = system.subset(names);
    } catch (const InvalidSystemError& e) {
      throw InputError(std::string("--using: ") + e.what());
    }
  }
  // Equation names may be used inside the expression, e.g. D2(f6).
  ParseContext ctx = file.context();
  for (const auto& [name, e] : file.equations) ctx.definitions.emplace(name, e);
  Expr f;
  try {
    f = parse(a.expression, ctx);
  } catch (const ParseError& e) {
    throw InputError("expression: " + std::string(e.what()));
  }
  NormalForm nf = normal_form(f, system);
  ZeroVerdict zero = zero_test(nf.remainder);

  if (c.format == "json") {
    Json j;
    j["command"] = "reduce";
    j["expression"] = format(f, naming);
    Json names = Json::array();
    for (const auto& eq : system.equations()) names.push_back(eq.name);
    j["using"] = std::move(names);
    j["normal_form"] = format(nf.remainder, naming);
    j["zero"] = zero.zero;
    j["probabilistic"] = zero.probabilistic;
    j["steps"] = to_json(nf.trace, naming);
    emit(out, j);
  } else {
    out << "expression: " << format(f, naming) << '\n';
    out << "using:";
    for (const auto& eq : system.equations()) out << ' ' << eq.name;
    out << '\n';
    out << trace_text(nf.trace, naming, "  ");
    out << "normal form: " << format(nf.remainder, naming) << '\n';
    out << "zero: " << (zero.zero ? "yes" : "no") << (zero.zero && zero.probabilistic ? " (probabilistic)" : "")
        << '\n';
  }
  return kSuccess;
}

// series --------------------------------------------------------------------

struct SeriesArgs {
  std::string point;
  std::vector<std::string> parametric;
  unsigned order = 8;
  double radius = 0.05;
  std::string csv;
};

double parse_number(const std::string& text, const std::string& what) {
  try {
    if (auto q = parse(text).as_rational()) return q->get_d();
  } catch (const Error&) {
  }
  throw InputError("invalid number '" + text + "' in " + what);
}

int cmd_series(const Common& c, const SeriesArgs& a, std::ostream& out) {
  SystemFile file = load(c);
  DiffSystem input = system_of(file, c.file);
  Naming naming = file.naming();

  std::vector<double> point(input.dimension(), 0.0);
  if (!a.point.empty()) {
    std::vector<std::string> parts;
    std::stringstream ss(a.point);
    for (std::string p; std::getline(ss, p, ',');) parts.push_back(p);
    if (parts.size() != point.size()) {
      throw InputError("--point needs " + std::to_string(point.size()) + " comma-separated values");
    }
    for (std::size_t k = 0; k < parts.size(); ++k) point[k] = parse_number(parts[k], "--point");
  }

  std::map<JetVar, double> parametric;
  for (const auto& p : a.parametric) {
    auto eq = p.rfind('=');
    if (eq == std::string::npos) throw InputError("--parametric expects jet=value, got '" + p + "'");
    Expr lhs;
    try {
      lhs = parse_in(file, p.substr(0, eq));
    } catch (const ParseError& e) {
      throw InputError("--parametric " + p + ": " + e.what());
    }
    auto jets = jet_atoms(lhs);
    if (jets.size() != 1 || lhs != Expr::jet(*jets.begin())) {
      throw InputError("--parametric " + p + ": left side is not a jet coordinate");
    }
    parametric[*jets.begin()] = parse_number(p.substr(eq + 1), "--parametric");
  }

  DiffSystem system = input;
  bool completed = false;
  if (!is_passive(system)) {
    PassivityReport report = complete(system);
    if (report.status != CompletionStatus::Passive) {
      throw Error("completion before series evaluation ended " + to_string(report.status) + ": " + report.reason);
    }
    system = report.system;
    completed = true;
  }
  JetClassification cls = classify(system, a.order);
  std::vector<std::string> ignored;
  for (const auto& [v, value] : parametric) {
    if (cls.is_principal(v)) ignored.push_back(format(v, naming));
  }

  SeriesSolution sol = evaluate_point(system, point, parametric, a.order);
  std::vector<Expr> original;
  for (const auto& [name, e] : file.equations) original.push_back(e);
  double radii[2] = {a.radius, a.radius / 2};
  double res_original[2];
  double res_system[2];
  for (int k = 0; k < 2; ++k) {
    auto offsets = sample_offsets(system.dimension(), radii[k]);
    res_original[k] = residual(original, sol, offsets);
    res_system[k] = residual(system, sol, offsets);
  }
  if (!a.csv.empty()) {
    std::ofstream f(a.csv, std::ios::binary);
    if (!f) throw InputError("cannot write '" + a.csv + "'");
    f << series_csv(sol);
  }

  if (c.format == "json") {
    Json j;
    j["command"] = "series";
    j["completed"] = completed;
    j["system"] = to_json(system, naming);
    Json par = Json::array();
    for (const auto& v : cls.parametric) par.push_back(format(v, naming));
    j["parametric"] = std::move(par);
    if (!ignored.empty()) j["ignored_principal_values"] = ignored;
    j["solution"] = to_json(sol, naming);
    Json res = Json::array();
    for (int k = 0; k < 2; ++k) {
      Json r;
      r["radius"] = radii[k];
      r["original"] = res_original[k];
      r["system"] = res_system[k];
      res.push_back(std::move(r));
    }
    j["residuals"] = std::move(res);
    emit(out, j);
  } else {
    if (completed) out << "input was not passive; using its completion\n";
    for (const auto& eq : system.equations()) out << eq.name << ": " << equation_text(eq, naming) << '\n';
    for (const auto& v : ignored) out << "warning: " << v << " is principal; given value ignored\n";
    out << "order " << sol.order << " at (";
    for (std::size_t k = 0; k < point.size(); ++k) out << (k ? ", " : "") << number(point[k]);
    out << ")\n";
    for (const auto& [v, value] : sol.values) {
      out << "  " << format(v, naming) << (cls.is_principal(v) ? "  " : " *") << " = " << number(value) << '\n';
    }
    out << "(* parametric)\n";
    for (int k = 0; k < 2; ++k) {
      out << "residual at radius " << number(radii[k]) << ": original " << number(res_original[k]) << ", system "
          << number(res_system[k]) << '\n';
    }
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Passivity checking and completion for systems of PDEs", "dpass"};
  app.require_subcommand(1);

  Common common;
  auto* check = app.add_subcommand("check", "Check whether a system is passive");
  add_common(check, common);

  CompleteArgs ca;
  auto* comp = app.add_subcommand("complete", "Complete a system to a passive one");
  add_common(comp, common);
  comp->add_option("--max-eqs", ca.max_eqs, "Limit on new equations");
  comp->add_option("--max-steps", ca.max_steps, "Limit on reduction steps");
  comp->add_flag("--trace", ca.trace, "Include the full completion trace");
  comp->add_option("-o,--output", ca.output, "Write the completed system here");

  ReduceArgs ra;
  auto* red = app.add_subcommand("reduce", "Normal form of an expression modulo a system");
  add_common(red, common);
  red->add_option("expression", ra.expression, "Expression; equation names may be used")->required();
  red->add_option("--using", ra.using_list, "Comma-separated equations to reduce by");

  SeriesArgs sa;
  auto* ser = app.add_subcommand("series", "Truncated Taylor solution at a point");
  add_common(ser, common);
  ser->add_option("--point", sa.point, "Expansion point, comma-separated");
  ser->add_option("--parametric", sa.parametric, "Parametric value, e.g. u[0,1]=1")->take_all();
  ser->add_option("--order", sa.order, "Expansion order")->capture_default_str();
  ser->add_option("--radius", sa.radius, "Residual sampling radius")->capture_default_str()->check(
      CLI::PositiveNumber);
  ser->add_option("--csv", sa.csv, "Write the table as CSV here");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*check) return cmd_check(common, out);
    if (*comp) return cmd_complete(common, ca, out);
    if (*red) return cmd_reduce(common, ra, out);
    return cmd_series(common, sa, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const StepBudgetExceeded& e) {
    err << "incomplete: " << e.what() << '\n';
    return kIncomplete;
  } catch (const MissingAtomError& e) {
    err << "error: " << e.what() << " (bind it with --bind)\n";
    return kUsage;
  } catch (const Error& e) {
    err << "failed: " << e.what() << '\n';
    return kFailed;
  }
}

}  // namespace dpass::cli
