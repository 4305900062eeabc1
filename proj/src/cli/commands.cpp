#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "varcomplex/cli.hpp"

namespace varcomplex::cli {

namespace {

/// Line-oriented text report with "key: value" entries.
class TextReport {
 public:
  void line(const std::string& key, const std::string& value) { out_ << key << ": " << value << "\n"; }
  void raw(const std::string& s) { out_ << s << "\n"; }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

const char* verdict_name(ZeroTest z) {
  switch (z) {
    case ZeroTest::Zero: return "zero";
    case ZeroTest::NonZero: return "nonzero";
    case ZeroTest::Unknown: return "unknown";
  }
  return "?";
}

bool polynomial(const Form& f) {
  for (const auto& [w, c] : f.terms())
    if (!c.is_polynomial()) return false;
  return true;
}

bool polynomial(const SourceForm& e) {
  for (const auto& [i, c] : e.components)
    if (!c.is_polynomial()) return false;
  return true;
}

std::string math(const std::string& s) { return "$" + s + "$"; }

Report begin(Command c, const ProblemFile& pf) {
  Report r;
  r.json["command"] = command_name(c);
  r.json["problem"] = problem_to_json(pf);
  return r;
}

void finish(Report& r, Json result, TextReport& text, std::vector<std::string> latex_lines) {
  r.json["result"] = std::move(result);
  r.json["status"] = r.exit_code == 0 ? "ok" : "negative";
  text.line("status", r.exit_code == 0 ? "ok" : "negative");
  r.text = text.str();
  std::string tex;
  for (const auto& l : latex_lines) tex += l + "\n";
  r.latex = tex;
}

void flag_fragment(bool poly, Json& result, TextReport& text) {
  result["polynomial_fragment"] = poly;
  if (!poly) text.line("note", "input leaves the polynomial fragment; zero tests may be inconclusive");
}

Report cmd_el(const ProblemFile& pf) {
  Report r = begin(Command::El, pf);
  const Form L = lagrangian_form(pf.bundle, *pf.lagrangian);
  const SourceForm e = euler_lagrange(L);
  TextReport t;
  t.line("lagrangian", to_string(L));
  t.raw(to_string(e));
  Json res{{"lagrangian", form_to_json(L)}, {"euler_lagrange", source_to_json(e)},
           {"source_form", form_to_json(e.to_form())}};
  flag_fragment(polynomial(L), res, t);
  finish(r, std::move(res), t, {math(to_latex(e))});
  return r;
}

Report cmd_helmholtz(const ProblemFile& pf) {
  Report r = begin(Command::Helmholtz, pf);
  const auto h = helmholtz_check(*pf.source_form);
  r.exit_code = h.passes ? 0 : 1;
  TextReport t;
  t.line("source_form", to_string(*pf.source_form));
  t.line("helmholtz", h.passes ? "pass" : "fail");
  t.line("verdict", verdict_name(h.verdict));
  t.line("certificate", to_string(h.certificate));
  Json res{{"passes", h.passes}, {"verdict", verdict_name(h.verdict)}, {"certificate", form_to_json(h.certificate)}};
  flag_fragment(polynomial(*pf.source_form), res, t);
  finish(r, std::move(res), t, {math(to_latex(*pf.source_form)), math("\\delta E = " + to_latex(h.certificate))});
  return r;
}

Report cmd_trivial(const ProblemFile& pf) {
  Report r = begin(Command::Trivial, pf);
  const Form L = lagrangian_form(pf.bundle, *pf.lagrangian);
  TextReport t;
  t.line("lagrangian", to_string(L));
  Json res;
  std::vector<std::string> tex{math(to_latex(L))};
  const bool trivial = is_variationally_trivial(L);
  res["trivial"] = trivial;
  t.line("variationally_trivial", trivial ? "yes" : "no");
  if (!trivial) {
    const auto e = euler_lagrange(L);
    r.exit_code = 1;
    res["euler_lagrange"] = source_to_json(e);
    t.raw(to_string(e));
    tex.push_back(math(to_latex(e)));
  } else {
    std::optional<AntiderivativeConfig> cfg;
    if (pf.options.max_order || pf.options.max_degree) {
      cfg = default_antiderivative_config(L);
      if (pf.options.max_order) cfg->max_jet_order = *pf.options.max_order;
      if (pf.options.max_degree) cfg->max_poly_degree = *pf.options.max_degree;
    }
    const auto w = triviality_witness(L, pf.closed_form, cfg);
    if (const auto* ok = std::get_if<TrivialityWitness>(&w)) {
      res["xi"] = form_to_json(ok->xi);
      res["closed_part"] = form_to_json(ok->closed_part);
      t.line("xi", to_string(ok->xi));
      t.line("closed_part", to_string(ok->closed_part));
      tex.push_back(math("\\xi = " + to_latex(ok->xi)));
    } else {
      const auto& miss = std::get<NotExactInTruncation>(w);
      r.exit_code = 1;
      res["not_exact_in_truncation"] = Json{{"max_jet_order", miss.bounds.max_jet_order},
                                            {"max_poly_degree", miss.bounds.max_poly_degree},
                                            {"residual", form_to_json(miss.residual)}};
      t.line("witness", "not found within order " + std::to_string(miss.bounds.max_jet_order) + ", degree " +
                            std::to_string(miss.bounds.max_poly_degree));
      t.line("residual", to_string(miss.residual));
    }
  }
  finish(r, std::move(res), t, tex);
  return r;
}

Report cmd_reconstruct(const ProblemFile& pf) {
  Report r = begin(Command::Reconstruct, pf);
  TextReport t;
  t.line("source_form", to_string(*pf.source_form));
  Json res;
  std::vector<std::string> tex{math(to_latex(*pf.source_form))};
  try {
    const Form L = reconstruct_lagrangian(*pf.source_form);
    const bool verified = euler_lagrange(L) == *pf.source_form;
    res["lagrangian"] = form_to_json(L);
    res["verified"] = verified;
    t.line("lagrangian", to_string(L));
    t.line("verified", verified ? "yes" : "no");
    tex.push_back(math("L = " + to_latex(L)));
    if (!verified) r.exit_code = 1;
  } catch (const HelmholtzError& e) {
    r.exit_code = 1;
    res["helmholtz"] = "fail";
    res["certificate"] = form_to_json(e.certificate);
    t.line("helmholtz", "fail");
    t.line("certificate", to_string(e.certificate));
    tex.push_back(math("\\delta E = " + to_latex(e.certificate)));
  }
  finish(r, std::move(res), t, tex);
  return r;
}

Report cmd_noether(const ProblemFile& pf) {
  Report r = begin(Command::Noether, pf);
  const Form L = lagrangian_form(pf.bundle, *pf.lagrangian);
  const auto c = conservation_check(*pf.vector_field, L);
  r.exit_code = c.is_symmetry && c.identity_holds ? 0 : 1;
  TextReport t;
  t.line("lagrangian", to_string(L));
  t.line("generalized_field", pf.vector_field->generalized() ? "yes" : "no");
  t.line("is_symmetry", c.is_symmetry ? "yes" : "no");
  t.line("identity_holds", c.identity_holds ? "yes" : "no");
  t.line("lie_derivative", to_string(c.lie_derivative));
  t.line("current", to_string(c.current));
  t.line("on_shell_divergence", to_string(c.on_shell_divergence, *pf.bundle));
  Json res{{"is_symmetry", c.is_symmetry},
           {"identity_holds", c.identity_holds},
           {"on_shell_divergence", to_string(c.on_shell_divergence, *pf.bundle)},
           {"current", form_to_json(c.current)},
           {"generalized_field", pf.vector_field->generalized()},
           {"lie_derivative", form_to_json(c.lie_derivative)},
           {"euler_lagrange", source_to_json(c.euler_lagrange)}};
  bool poly = polynomial(L);
  for (const auto& [i, e] : pf.vector_field->components) poly = poly && e.is_polynomial();
  flag_fragment(poly, res, t);
  finish(r, std::move(res), t,
         {math("J = " + to_latex(c.current)), math("\\mathcal{L}_u L = " + to_latex(c.lie_derivative))});
  return r;
}

Report cmd_split(const ProblemFile& pf) {
  Report r = begin(Command::Split, pf);
  const Form L = lagrangian_form(pf.bundle, *pf.lagrangian);
  const auto s = first_variational_split(L);
  TextReport t;
  t.line("lagrangian", to_string(L));
  t.raw(to_string(s.source));
  t.line("boundary", to_string(s.boundary));
  Json res{{"source", source_to_json(s.source)}, {"boundary", form_to_json(s.boundary)}};
  flag_fragment(polynomial(L), res, t);
  finish(r, std::move(res), t, {math(to_latex(s.source)), math("\\phi = " + to_latex(s.boundary))});
  return r;
}

Report cmd_apply(const ProblemFile& pf) {
  Report r = begin(Command::Apply, pf);
  const Form& phi = *pf.form;
  const std::string& op = *pf.op;
  Form out;
  if (op == "d") out = exterior_d(phi);
  else if (op == "dH") out = d_H(phi);
  else if (op == "dV") out = d_V(phi);
  else if (op == "tau") out = tau(phi);
  else if (op == "delta") out = delta(phi);
  else if (op == "h0") out = horizontalize(phi);
  else out = lie_derivative(*pf.vector_field, phi);
  TextReport t;
  t.line("operator", op);
  t.line("input", to_string(phi));
  t.line("output", to_string(out));
  Json res{{"operator", op}, {"input", form_to_json(phi)}, {"output", form_to_json(out)}};
  flag_fragment(polynomial(phi), res, t);
  finish(r, std::move(res), t, {math(to_latex(out))});
  return r;
}

Json betti_json(const BettiReport& b) {
  Json positions = Json::array();
  for (const auto& p : b.positions)
    positions.push_back(Json{{"label", p.label},
                             {"k", p.k},
                             {"s", p.s},
                             {"dim_domain", p.dim_domain},
                             {"rank", p.rank},
                             {"dim_kernel", p.dim_kernel},
                             {"incoming_rank", p.incoming_rank},
                             {"dim_cohomology", p.dim_cohomology}});
  return Json{{"operator", b.op}, {"positions", positions}};
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : std::string(w - s.size(), ' ') + s; }

Report cmd_betti(const ProblemFile& pf, Execution mode) {
  Report r = begin(Command::Betti, pf);
  const auto& spec = *pf.truncation;
  const auto& o = pf.options;
  const std::string row = o.row.value_or("all");
  const auto n = pf.bundle->n();
  std::vector<BettiReport> reports;
  if (row == "horizontal" || row == "all") reports.push_back(betti_horizontal_row(pf.bundle, spec, o.k.value_or(0), mode));
  if (row == "vertical" || row == "all")
    reports.push_back(betti_vertical_column(pf.bundle, spec, o.s.value_or(0), o.max_k.value_or(2), mode));
  if (row == "variational" || row == "all") reports.push_back(betti_variational_row(pf.bundle, spec, mode));
  std::optional<ExactnessReport> ex;
  if (row == "exactness" || row == "all") ex = source_exactness(pf.bundle, spec, mode);

  TextReport t;
  t.line("truncation", "order " + std::to_string(spec.max_jet_order) + ", degree " +
                           std::to_string(spec.max_poly_degree) + ", base degree " +
                           std::to_string(spec.base_poly_degree));
  t.line("base_dimension", std::to_string(n));
  Json res;
  Json reps = Json::array();
  std::string csv = "operator,position,k,s,dim_domain,rank,dim_kernel,incoming_rank,dim_cohomology\n";
  std::vector<std::string> tex;
  for (const auto& b : reports) {
    reps.push_back(betti_json(b));
    t.raw("[" + b.op + "]");
    t.raw(pad("position", 10) + pad("dim", 8) + pad("rank", 8) + pad("ker", 8) + pad("incoming", 10) + pad("H", 6));
    tex.push_back("\\begin{tabular}{lrrrrr}");
    tex.push_back("\\multicolumn{6}{l}{" + b.op + "}\\\\");
    tex.push_back("position & dim & rank & ker & incoming & $H$\\\\");
    for (const auto& p : b.positions) {
      t.raw(pad(p.label, 10) + pad(std::to_string(p.dim_domain), 8) + pad(std::to_string(p.rank), 8) +
            pad(std::to_string(p.dim_kernel), 8) + pad(std::to_string(p.incoming_rank), 10) +
            pad(std::to_string(p.dim_cohomology), 6));
      csv += b.op + ",\"" + p.label + "\"," + std::to_string(p.k) + "," +
             std::to_string(p.s) + "," + std::to_string(p.dim_domain) + "," + std::to_string(p.rank) + "," +
             std::to_string(p.dim_kernel) + "," + std::to_string(p.incoming_rank) + "," +
             std::to_string(p.dim_cohomology) + "\n";
      tex.push_back(p.label + " & " + std::to_string(p.dim_domain) + " & " + std::to_string(p.rank) + " & " +
                    std::to_string(p.dim_kernel) + " & " + std::to_string(p.incoming_rank) + " & " +
                    std::to_string(p.dim_cohomology) + "\\\\");
    }
    tex.push_back("\\end{tabular}");
  }
  res["reports"] = reps;
  if (ex) {
    res["exactness"] = Json{{"helmholtz_kernel", ex->kernel_dim}, {"in_el_image", ex->in_image}, {"exact", ex->exact()}};
    t.line("helmholtz_kernel", std::to_string(ex->kernel_dim));
    t.line("in_el_image", std::to_string(ex->in_image));
    t.line("exact_at_E1", ex->exact() ? "yes" : "no");
    tex.push_back("Helmholtz kernel " + std::to_string(ex->kernel_dim) + ", in EL image " +
                  std::to_string(ex->in_image));
    if (!ex->exact()) r.exit_code = 1;
  }
  r.csv = csv;
  finish(r, std::move(res), t, tex);
  return r;
}

Report cmd_props(const ProblemFile& pf, Execution mode) {
  Report r = begin(Command::Props, pf);
  const auto& o = pf.options;
  RandomBounds bounds;
  if (o.max_order) bounds.max_jet_order = static_cast<unsigned>(*o.max_order);
  if (o.max_degree) bounds.max_degree = static_cast<unsigned>(*o.max_degree);
  const auto rep = property_suite(o.seed.value_or(1), o.cases.value_or(100), mode, bounds);
  r.exit_code = rep.all_passed() ? 0 : 1;
  TextReport t;
  t.line("seed", std::to_string(rep.seed));
  t.line("cases", std::to_string(rep.cases));
  t.line("bounds", "order " + std::to_string(bounds.max_jet_order) + ", degree " + std::to_string(bounds.max_degree));
  Json ids = Json::array();
  std::vector<std::string> tex{"\\begin{tabular}{lrr}", "identity & checked & failures\\\\"};
  for (const auto& id : rep.identities) {
    std::string line = (id.failures == 0 ? "PASS " : "FAIL ") + id.name + " (" + std::to_string(id.checked) +
                       " checked, " + std::to_string(id.failures) + " failed)";
    t.raw(line);
    if (id.failures) t.line("  counterexample", id.counterexample);
    Json j{{"name", id.name}, {"checked", id.checked}, {"failures", id.failures}};
    if (id.failures) j["counterexample"] = id.counterexample;
    ids.push_back(j);
    tex.push_back("\\verb|" + id.name + "| & " + std::to_string(id.checked) + " & " + std::to_string(id.failures) +
                  "\\\\");
  }
  tex.push_back("\\end{tabular}");
  t.line("summary", rep.all_passed() ? "all identities hold" : "failures found");
  finish(r, Json{{"seed", rep.seed}, {"cases", rep.cases}, {"all_passed", rep.all_passed()}, {"identities", ids}}, t,
         tex);
  return r;
}

}  // namespace

Report run_command(Command c, const ProblemFile& pf, Execution mode) {
  validate_for(c, pf);
  try {
    switch (c) {
      case Command::El: return cmd_el(pf);
      case Command::Helmholtz: return cmd_helmholtz(pf);
      case Command::Trivial: return cmd_trivial(pf);
      case Command::Reconstruct: return cmd_reconstruct(pf);
      case Command::Noether: return cmd_noether(pf);
      case Command::Split: return cmd_split(pf);
      case Command::Apply: return cmd_apply(pf);
      case Command::Betti: return cmd_betti(pf, mode);
      case Command::Props: return cmd_props(pf, mode);
    }
  } catch (const DegreeError& e) {
    throw UsageError(e.what());
  } catch (const UnsupportedError& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown command");
}

std::string render(const Report& r, Format f) {
  switch (f) {
    case Format::Text: return r.text;
    case Format::Json: return r.json.dump(2) + "\n";
    case Format::Latex: return r.latex;
    case Format::Csv: return r.csv.empty() ? r.text : r.csv;
  }
  return r.text;
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

Json assignments(const std::vector<std::string>& items, const std::string& flag) {
  Json out = Json::object();
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError(flag + " expects NAME=EXPR, got '" + item + "'");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read problem file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computations in the variational bicomplex on jet bundles"};
  app.set_version_flag("--version", "varcomplex 1.0");
  std::string command, problem, format = "text", base, fiber, lagrangian, closed_form, form, op, truncation, row;
  std::vector<std::string> sources, fields;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> cases, k, s, max_k;
  std::optional<int> max_order, max_degree;
  bool csv = false, serial = false;

  app.add_option("command", command, "el | helmholtz | trivial | reconstruct | noether | split | apply | betti | props")
      ->required();
  app.add_option("--problem", problem, "JSON problem file");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "latex"}));
  app.add_flag("--csv", csv, "betti: one CSV row per position");
  app.add_option("--base", base, "Comma-separated base variables (inline problem)");
  app.add_option("--fiber", fiber, "Comma-separated fiber variables (inline problem)");
  app.add_option("--lagrangian", lagrangian, "Lagrangian density");
  app.add_option("--source", sources, "Source-form component NAME=EXPR (repeatable)");
  app.add_option("--field", fields, "Vector-field component NAME=EXPR (repeatable)");
  app.add_option("--closed-form", closed_form, "Closed form phi0 for trivial");
  app.add_option("--form", form, "Form for apply");
  app.add_option("--operator", op, "apply: d | dH | dV | tau | delta | h0 | lie");
  app.add_option("--truncation", truncation, "betti: ORDER,DEGREE,BASE_DEGREE");
  app.add_option("--row", row, "betti: horizontal | vertical | variational | exactness | all");
  app.add_option("--k", k, "betti: contact degree of the horizontal row");
  app.add_option("--s", s, "betti: horizontal degree of the vertical column");
  app.add_option("--max-k", max_k, "betti: top contact degree of the vertical column");
  app.add_option("--seed", seed, "props: random seed");
  app.add_option("--cases", cases, "props: number of cases");
  app.add_option("--max-order", max_order, "Jet-order bound (trivial, props)");
  app.add_option("--max-degree", max_degree, "Degree bound (trivial, props)");
  app.add_flag("--serial", serial, "Use the serial reference kernels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    const auto cmd = command_from_name(command);
    if (!cmd) throw UsageError("unknown command '" + command + "'");
    if (csv && *cmd != Command::Betti) throw UsageError("--csv is only available for betti");

    Json opts = Json::object();
    if (seed) opts["seed"] = *seed;
    if (cases) opts["cases"] = *cases;
    if (max_order) opts["max_order"] = *max_order;
    if (max_degree) opts["max_degree"] = *max_degree;
    if (!row.empty()) opts["row"] = row;
    if (k) opts["k"] = *k;
    if (s) opts["s"] = *s;
    if (max_k) opts["max_k"] = *max_k;

    const bool inline_fields = !base.empty() || !fiber.empty() || !lagrangian.empty() || !sources.empty() ||
                               !fields.empty() || !closed_form.empty() || !form.empty() || !op.empty() ||
                               !truncation.empty();
    std::string text;
    if (!problem.empty()) {
      if (inline_fields) throw UsageError("--problem cannot be combined with inline problem fields");
      text = read_file(problem);
      if (!opts.empty()) {
        parse_problem(text);  // reports syntax errors against the original file
        Json doc = Json::parse(text);
        for (const auto& [key, val] : opts.items()) doc["options"][key] = val;
        text = doc.dump();
      }
    } else {
      Json doc = Json::object();
      if (!base.empty() || !fiber.empty()) {
        if (base.empty() || fiber.empty()) throw UsageError("--base and --fiber must be given together");
        doc["bundle"] = Json{{"base", split_list(base)}, {"fiber", split_list(fiber)}};
      }
      if (!lagrangian.empty()) doc["lagrangian"] = lagrangian;
      if (!sources.empty()) doc["source_form"] = assignments(sources, "--source");
      if (!fields.empty()) doc["vector_field"] = assignments(fields, "--field");
      if (!closed_form.empty()) doc["closed_form"] = closed_form;
      if (!form.empty()) doc["form"] = form;
      if (!op.empty()) doc["operator"] = op;
      if (!truncation.empty()) {
        const auto parts = split_list(truncation);
        if (parts.size() != 3) throw UsageError("--truncation expects ORDER,DEGREE,BASE_DEGREE");
        Json t = Json::object();
        const char* names[] = {"max_jet_order", "max_poly_degree", "base_poly_degree"};
        for (std::size_t i = 0; i < 3; ++i) {
          try {
            std::size_t used = 0;
            const int v = std::stoi(parts[i], &used);
            if (used != parts[i].size()) throw std::invalid_argument("trailing");
            t[names[i]] = v;
          } catch (const std::logic_error&) {
            throw UsageError("--truncation expects three integers");
          }
        }
        doc["truncation"] = t;
      }
      if (!opts.empty()) doc["options"] = opts;
      if (doc.empty()) throw UsageError("no problem given; use --problem FILE or inline flags");
      text = doc.dump();
    }

    const ProblemFile pf = parse_problem(text);
    const Report rep = run_command(*cmd, pf, serial ? Execution::Serial : Execution::Parallel);
    const Format f = csv ? Format::Csv : format == "json" ? Format::Json : format == "latex" ? Format::Latex : Format::Text;
    out << render(rep, f);
    return rep.exit_code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace varcomplex::cli
