// Acceptance driver: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "helpers.hpp"
#include "oracles.hpp"

using namespace varcomplex;
using namespace testing_helpers;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

int report(int id, const std::string& title, Outcome& o) {
  std::cout << "criterion " << id << " [" << title << "]: " << (o.pass ? "PASS" : "FAIL") << "  "
            << o.detail.str() << std::endl;
  return o.pass ? 0 : 1;
}

Outcome identity_suite() {
  Outcome o;
  const auto t0 = Clock::now();
  const std::size_t cases = 500;
  const RandomBounds bounds{3, 3, 3, true};
  const auto r = property_suite(1, cases, Execution::Parallel, bounds);
  const double t = seconds_since(t0);
  const std::vector<std::string> required = {"d^2 = 0",     "dH^2 = 0",          "dV^2 = 0",
                                             "dH dV + dV dH = 0", "tau^2 = tau", "tau dH = 0",
                                             "delta^2 = 0", "delta tau = tau d", "h0 d = dH h0"};
  for (const auto& name : required) {
    bool found = false;
    for (const auto& id : r.identities)
      if (id.name == name) {
        found = true;
        o.require(id.checked > 0 && id.failures == 0, name + " (" + id.counterexample + ")");
      }
    o.require(found, "identity missing: " + name);
  }
  o.require(r.all_passed(), "some identity failed");
  o.require(t < 60.0, "runtime over 60 s");
  std::size_t checks = 0;
  for (const auto& id : r.identities) checks += id.checked;
  o.detail << "seed 1, " << cases << " cases, " << r.identities.size() << " identities, " << checks
           << " checks, " << t << " s";
  return o;
}

Outcome euler_lagrange_oracle() {
  Outcome o;
  struct Golden {
    std::string name;
    BundlePtr bundle;
    Expr density;
    bool null;
  };
  auto x = line();
  auto tx = plane();
  auto t = make_bundle({"t"}, {"u"});
  std::vector<Golden> corpus = {
      {"1/2 u_x^2", x, E("1/2*u_x^2", x), false},
      {"wave", tx, E("1/2*(u_t^2 - u_x^2)", tx), false},
      {"1/2 u_xx^2", x, E("1/2*u_xx^2", x), false},
      {"u u_x", x, E("u*u_x", x), true},
  };
  // Mechanics family L = h0(dF) for F(t, u), computed from d in the dy basis.
  for (std::uint64_t c = 0; c < 8; ++c) {
    auto rng = RandomForms::for_case(1001, c);
    Expr f = rng.polynomial(*t, RandomBounds{0, 3, 3, true});
    if (c == 0) f = E("t*u^2", t);
    const Form L = horizontalize(exterior_d_dy_basis(Form(t, f)));
    corpus.push_back({"h0(dF) #" + std::to_string(c), t, lagrangian_density(L), true});
  }
  std::mt19937_64 gen(20240601);
  std::uniform_real_distribution<double> pt(-0.7, 0.7);
  double worst = 0;
  std::size_t samples = 0;
  for (const auto& g : corpus) {
    const SourceForm el = euler_lagrange(lagrangian_form(g.bundle, g.density));
    if (g.null) o.require(el.is_zero(), "null Lagrangian " + g.name + " gives nonzero EL");
    std::vector<Expr> comps;
    for (std::size_t i = 0; i < g.bundle->m(); ++i) comps.push_back(el.component(i));
    for (int trial = 0; trial < 8; ++trial) {
      const auto s = oracle::random_section(gen, g.bundle->n(), g.bundle->m(), 3);
      std::vector<double> centre(g.bundle->n());
      for (auto& v : centre) v = pt(gen);
      const auto sample = oracle::gateaux(g.density, comps, s, 0, centre, 0.25);
      const double err = oracle::rel_error(sample.numeric, sample.symbolic);
      worst = std::max(worst, err);
      ++samples;
      o.require(err < 1e-6, g.name + " Gateaux mismatch");
    }
  }
  o.detail << corpus.size() << " Lagrangians, " << samples << " Gateaux samples, worst relative error " << worst;
  return o;
}

Outcome inverse_round_trip() {
  Outcome o;
  const auto t0 = Clock::now();
  std::size_t n = 0, nonzero = 0;
  for (std::uint64_t c = 0; c < 120; ++c) {
    auto rng = RandomForms::for_case(2001, c);
    auto b = rng.bundle(2, 2);
    const Form L = lagrangian_form(b, rng.polynomial(*b, RandomBounds{2, 3, 4, true}));
    const SourceForm e = euler_lagrange(L);
    if (!e.is_zero()) ++nonzero;
    o.require(helmholtz_check(e).passes, "Helmholtz failed on an EL form (case " + std::to_string(c) + ")");
    const Form L2 = reconstruct_lagrangian(e);
    o.require(euler_lagrange(L2) == e, "reconstruction mismatch (case " + std::to_string(c) + ")");
    ++n;
  }
  const double t = seconds_since(t0);
  o.require(t < 120.0, "runtime over 120 s");
  o.detail << n << " random Lagrangians (" << nonzero << " with nonzero EL), " << t << " s";
  return o;
}

Outcome triviality() {
  Outcome o;
  std::size_t n = 0, nonzero = 0;
  for (std::uint64_t c = 0; c < 110; ++c) {
    auto rng = RandomForms::for_case(3001, c);
    auto b = rng.bundle(2, 2);
    const Form xi = rng.form(b, 0, b->n() - 1, RandomBounds{2, 3, 3, true});
    const Form L = d_H(xi);
    if (!L.is_zero()) ++nonzero;
    o.require(is_variationally_trivial(L), "d_H xi not trivial (case " + std::to_string(c) + ")");
    const auto w = triviality_witness(L);
    const auto* ok = std::get_if<TrivialityWitness>(&w);
    o.require(ok && d_H(ok->xi) == L, "no witness (case " + std::to_string(c) + ")");
    ++n;
  }
  const bool wave = is_variationally_trivial(F("1/2*(u_t^2 - u_x^2)*dt^dx", plane()));
  auto t = make_bundle({"t"}, {"u"});
  const bool particle = is_variationally_trivial(F("1/2*u_t^2*dt", t));
  o.require(!wave, "wave reported trivial");
  o.require(!particle, "free particle reported trivial");
  o.require(nonzero >= 100, "fewer than 100 nonzero total divergences");
  o.detail << n << " random total divergences (" << nonzero << " nonzero) recovered; wave trivial=" << wave
           << ", free particle trivial=" << particle;
  return o;
}

Outcome variational_formula() {
  Outcome o;
  std::vector<Form> ls = {F("1/2*u_x^2*dx", line()), F("1/2*(u_t^2 - u_x^2)*dt^dx", plane()),
                          F("1/2*u_xx^2*dx", line()), F("u*u_x*dx", line()),
                          F("(u^2 + 2*t*u*u_t)*dt", make_bundle({"t"}, {"u"}))};
  for (std::uint64_t c = 0; c < 150; ++c) {
    auto rng = RandomForms::for_case(4001, c);
    auto b = rng.bundle(2, 2);
    ls.push_back(lagrangian_form(b, rng.polynomial(*b, {})));
  }
  for (const auto& L : ls) {
    const auto split = first_variational_split(L);
    o.require((exterior_d(L) - split.source.to_form() - d_H(split.boundary)).is_zero(),
              "split fails for " + to_string(L));
  }
  o.detail << "5 corpus + " << ls.size() - 5 << " random Lagrangians";
  return o;
}

Outcome conservation() {
  Outcome o;
  auto t = make_bundle({"t"}, {"u"});
  const EvolutionaryField shift(t, {{0, Expr(1)}});
  const Form particle = F("1/2*u_t^2*dt", t);
  const Form J = noether_current(shift, particle);
  const SourceForm e = euler_lagrange(particle);
  const Expr balance = total_derivative(J.coefficient(Word{}), 0) + shift.component(0) * e.component(0);
  o.require(J == F("u_t", t), "free-particle current is not u_t");
  o.require(balance.is_zero(), "d_t J + u E != 0");
  std::size_t pairs = 0, non_symmetries = 0;
  for (std::uint64_t c = 0; c < 120; ++c) {
    auto rng = RandomForms::for_case(5001, c);
    auto b = rng.bundle(2, 2);
    std::map<std::size_t, Expr> comps;
    for (std::size_t i = 0; i < b->m(); ++i) comps[i] = rng.polynomial(*b, RandomBounds{1, 2, 2, true});
    const EvolutionaryField u(b, comps);
    const Form L = lagrangian_form(b, rng.polynomial(*b, {}));
    const auto r = conservation_check(u, L);
    o.require(r.identity_holds, "Noether identity fails (case " + std::to_string(c) + ")");
    if (!r.is_symmetry) ++non_symmetries;
    ++pairs;
  }
  o.require(non_symmetries > 0, "no non-symmetric pairs exercised");
  o.detail << "free particle J = " << to_string(J) << "; " << pairs << " random pairs (" << non_symmetries
           << " non-symmetries)";
  return o;
}

Outcome cohomology() {
  Outcome o;
  const auto t0 = Clock::now();
  auto b = line();
  const TruncationSpec spec{3, 3, 2};
  const auto h0 = betti_horizontal_row(b, spec, 0);
  const auto h1 = betti_horizontal_row(b, spec, 1);
  const auto v = betti_vertical_column(b, spec, 0, 2);
  const auto var = betti_variational_row(b, spec);
  const auto ex = source_exactness(b, spec);
  const double t = seconds_since(t0);
  const auto& s0 = h0.positions.front();
  o.require(s0.s == 0 && s0.dim_cohomology == 1, "d_H row H at s=0 is not 1");
  o.require(h1.positions.front().dim_cohomology == 0, "d_H row k=1 at s=0 is not 0");
  std::size_t interior = 0;
  for (std::size_t i = 1; i < var.positions.size(); ++i) interior += var.positions[i].dim_cohomology;
  o.require(var.positions.front().dim_cohomology == 1, "variational H^0 is not 1");
  o.require(interior == 0, "variational row has interior cohomology");
  o.require(v.positions.front().dim_kernel == static_cast<std::size_t>(spec.base_poly_degree) + 1,
            "d_V kernel at k=0 is not base degree + 1");
  o.require(ex.exact(), "Helmholtz kernel not inside EL image");
  o.require(t < 300.0, "runtime over 5 min");
  o.detail << "H_dH(s=0)=" << s0.dim_cohomology << ", H_dH(k=1,s=0)=" << h1.positions.front().dim_cohomology
           << ", ker d_V(k=0)=" << v.positions.front().dim_kernel << ", variational interior=" << interior
           << ", exactness " << ex.in_image << "/" << ex.kernel_dim << ", " << t << " s";
  return o;
}

struct Proc {
  int code = -1;
  std::string out;
};

Proc run_binary(const std::string& args) {
  const std::string cmd = std::string(VARCOMPLEX_BIN) + " " + args + " 2>/dev/null";
  Proc p;
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return p;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) p.out.append(buf, n);
  const int status = pclose(f);
  p.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return p;
}

std::string write_temp(const std::filesystem::path& dir, const std::string& name, const std::string& body) {
  const auto path = dir / name;
  std::ofstream(path) << body;
  return path.string();
}

void collect_forms(const cli::Json& j, std::vector<cli::Json>& out) {
  if (j.is_array() && !j.empty() && j[0].is_object() && j[0].contains("word") && j[0].contains("coeff")) {
    out.push_back(j);
    return;
  }
  if (j.is_structured())
    for (const auto& v : j) collect_forms(v, out);
}

Outcome cli_contract() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / ("varcomplex_accept_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  struct Case {
    std::string command, doc;
    int expected;
  };
  const std::string line1 = R"({"bundle": {"base": ["x"], "fiber": ["u"]}, )";
  const std::string time1 = R"({"bundle": {"base": ["t"], "fiber": ["u"]}, )";
  const std::vector<Case> cases = {
      {"el", line1 + R"("lagrangian": "1/2*u_x^2"})", 0},
      {"el", R"J({"bundle": {"base": ["t", "x"], "fiber": ["u"]}, "lagrangian": "1/2*(u_t^2 - u_x^2)"})J", 0},
      {"helmholtz", line1 + R"("source_form": {"u": "-u_xx"}})", 0},
      {"helmholtz", line1 + R"("source_form": {"u": "u_x"}})", 1},
      {"trivial", line1 + R"("lagrangian": "u*u_x"})", 0},
      {"trivial", time1 + R"("lagrangian": "1/2*u_t^2"})", 1},
      {"reconstruct", line1 + R"("source_form": {"u": "-u_xx"}})", 0},
      {"noether", time1 + R"("lagrangian": "1/2*u_t^2", "vector_field": {"u": "1"}})", 0},
      {"noether", time1 + R"("lagrangian": "1/2*u^2", "vector_field": {"u": "1"}})", 1},
      {"split", line1 + R"("lagrangian": "1/2*u_xx^2"})", 0},
      {"apply", line1 + R"("form": "u*th(u;x)^dx", "operator": "tau"})", 0},
      {"betti", line1 + R"("truncation": {"max_jet_order": 2, "max_poly_degree": 2, "base_poly_degree": 1}})", 0},
      {"props", R"({"options": {"seed": 1, "cases": 20}})", 0},
      // usage, parse and schema errors
      {"el", line1 + R"("lagrangian": "1/2*u_x^"})", 2},
      {"el", line1 + R"("lagrangian": "v_x"})", 2},
      {"el", line1 + R"("lagrangian": "u", "colour": "red"})", 2},
      {"helmholtz", line1 + R"("lagrangian": "u"})", 2},
      {"el", "{not json", 2},
      {"el", "", 2},
  };
  std::size_t i = 0, identical = 0, round_trips = 0, forms_checked = 0;
  std::map<int, std::size_t> codes;
  for (const auto& c : cases) {
    const std::string file = write_temp(dir, "p" + std::to_string(i++) + ".json", c.doc);
    const std::string args = c.command + " --problem " + file + " --format json";
    const Proc a = run_binary(args), b = run_binary(args);
    const Proc text1 = run_binary(c.command + " --problem " + file);
    const Proc text2 = run_binary(c.command + " --problem " + file);
    o.require(a.out == b.out && text1.out == text2.out, "non-deterministic output for " + c.command);
    if (a.out == b.out && text1.out == text2.out) ++identical;
    o.require(a.code == c.expected, c.command + " exit " + std::to_string(a.code) + " expected " +
                                        std::to_string(c.expected) + " for " + c.doc);
    ++codes[a.code];
    if (c.expected == 2) continue;
    cli::Json rep;
    try {
      rep = cli::Json::parse(a.out);
    } catch (const std::exception&) {
      o.require(false, "report is not JSON for " + c.command);
      continue;
    }
    const std::string again = write_temp(dir, "r" + std::to_string(i) + ".json", rep["problem"].dump(2));
    const Proc r = run_binary(c.command + " --problem " + again + " --format json");
    o.require(r.out == a.out && r.code == a.code, "re-run from embedded problem differs for " + c.command);
    if (r.out == a.out) ++round_trips;
    const auto pf = cli::parse_problem(rep["problem"].dump());
    std::vector<cli::Json> forms;
    collect_forms(rep["result"], forms);
    for (const auto& fj : forms) {
      const Form phi = cli::form_from_json(fj, pf.bundle);
      o.require(cli::form_to_json(phi) == fj, "form record does not re-serialize identically");
      o.require(cli::parse_form(to_string(phi), pf.bundle) == phi, "rendered form does not parse back");
      ++forms_checked;
    }
  }
  o.require(codes[0] > 0 && codes[1] > 0 && codes[2] > 0, "not all exit codes exercised");
  std::filesystem::remove_all(dir);
  o.detail << cases.size() << " invocations x4 byte-identical (" << identical << "), exit codes 0/1/2 = " << codes[0]
           << "/" << codes[1] << "/" << codes[2] << ", " << round_trips << " problem round trips, " << forms_checked
           << " form records round-tripped";
  return o;
}

template <typename F>
int guarded(int id, const std::string& title, F&& f) {
  Outcome o;
  try {
    o = f();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << "exception: " << e.what();
  }
  return report(id, title, o);
}

}  // namespace

int main() {
  int failed = 0;
  failed += guarded(1, "operator identities", identity_suite);
  failed += guarded(2, "Euler-Lagrange oracle", euler_lagrange_oracle);
  failed += guarded(3, "inverse-problem round trip", inverse_round_trip);
  failed += guarded(4, "triviality detection", triviality);
  failed += guarded(5, "first variational formula", variational_formula);
  failed += guarded(6, "conservation laws", conservation);
  failed += guarded(7, "cohomology shadows", cohomology);
  failed += guarded(8, "CLI contract", cli_contract);
  std::cout << (failed == 0 ? "all criteria PASS" : std::to_string(failed) + " criteria FAIL") << std::endl;
  return failed == 0 ? 0 : 1;
}
