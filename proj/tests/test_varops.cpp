#include <doctest.h>

#include "helpers.hpp"
#include "oracles.hpp"
#include "varcomplex/random.hpp"
#include "varcomplex/varops.hpp"

using namespace varcomplex;
using namespace testing_helpers;

TEST_CASE("exterior derivative examples") {
  auto b = line();
  CHECK(exterior_d(F("u", b)) == F("u_x*dx + th(u)", b));
  CHECK(exterior_d(F("dx", b)).is_zero());
  CHECK(exterior_d(F("th(u)", b)) == -F("th(u;x)^dx", b));
  const Form theta_dy = from_contact_basis(F("th(u)", b));
  CHECK(to_contact_basis(exterior_d_dy_basis(theta_dy)) == exterior_d(F("th(u)", b)));
}

TEST_CASE("horizontal and vertical differentials") {
  auto b = line();
  CHECK(d_H(F("u", b)) == F("u_x*dx", b));
  CHECK(d_H(F("u*dx", b)).is_zero());
  auto tx = make_bundle({"t", "x"}, {"u"});
  CHECK(d_H(F("u*dt", tx)) == F("u_x*dx^dt", tx));
  CHECK(d_V(F("u^2", b)) == F("2*u*th(u)", b));
  CHECK(d_V(F("x", b)).is_zero());
  CHECK(d_V(F("u_x*dx", b)) == F("th(u;x)^dx", b));
  CHECK(d_V(F("u_x*dx", b)) == exterior_d(F("u_x*dx", b)) - d_H(F("u_x*dx", b)));
}

TEST_CASE("projector tau") {
  auto b = line();
  CHECK(tau(F("th(u)^dx", b)) == F("th(u)^dx", b));
  CHECK(tau(F("u*th(u;x)^dx", b)) == F("-u_x*th(u)^dx", b));
  CHECK(tau(F("u*dx", b)).is_zero());
  auto tx = plane();
  CHECK(tau(F("th(u)^dt", tx)).is_zero());
}

TEST_CASE("variational operator delta") {
  auto b = line();
  CHECK(delta(F("u_x*dx", b)).is_zero());
  CHECK(delta(F("1/2*u_x^2*dx", b)) == F("-u_xx*th(u)^dx", b));
  SourceForm e(b);
  e.set(0, E("-u_xx", b));
  CHECK(delta(e).is_zero());
  CHECK_THROWS_AS(delta(F("u", b)), DegreeError);
}

TEST_CASE("Euler-Lagrange examples") {
  auto b = line();
  CHECK(euler_lagrange(F("1/2*u_x^2*dx", b)).component(0) == E("-u_xx", b));
  CHECK(euler_lagrange(F("u_x*dx", b)).is_zero());
  auto tx = plane();
  CHECK(euler_lagrange(F("1/2*(u_t^2 - u_x^2)*dt^dx", tx)).component(0) == E("-u_tt + u_xx", tx));
  CHECK_THROWS_AS(euler_lagrange(F("u", b)), DegreeError);
  CHECK(lagrangian_density(lagrangian_form(tx, E("u*u_t", tx))) == E("u*u_t", tx));
}

TEST_CASE("Euler-Lagrange agrees with delta on random Lagrangians") {
  for (std::uint64_t c = 0; c < 50; ++c) {
    auto rng = RandomForms::for_case(41, c);
    auto b = rng.bundle(2, 2);
    const Form L = lagrangian_form(b, rng.polynomial(*b, {}));
    CHECK(euler_lagrange(L).to_form() == delta(L));
  }
}

namespace {

struct GoldenLagrangian {
  const char* name;
  BundlePtr bundle;
  const char* density;
  bool null;
};

double worst_gateaux_error(const GoldenLagrangian& g, std::uint64_t seed) {
  const auto& b = g.bundle;
  const Expr dens = E(g.density, b);
  const SourceForm el = euler_lagrange(lagrangian_form(b, dens));
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < b->m(); ++i) comps.push_back(el.component(i));
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> pt(-0.8, 0.8);
  double worst = 0;
  for (int trial = 0; trial < 6; ++trial) {
    const auto s = oracle::random_section(gen, b->n(), b->m(), 3);
    std::vector<double> centre(b->n());
    for (auto& v : centre) v = pt(gen);
    for (std::size_t i = 0; i < b->m(); ++i) {
      const auto sample = oracle::gateaux(dens, comps, s, i, centre, 0.2);
      worst = std::max(worst, oracle::rel_error(sample.numeric, sample.symbolic));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("Euler-Lagrange matches the Gateaux derivative of the action") {
  const std::vector<GoldenLagrangian> corpus = {
      {"dirichlet", line(), "1/2*u_x^2", false},
      {"wave", plane(), "1/2*(u_t^2 - u_x^2)", false},
      {"second order", line(), "1/2*u_xx^2", false},
      {"null", line(), "u*u_x", true},
      {"mechanics", make_bundle({"t"}, {"u"}), "u^2 + 2*t*u*u_t", true},
      {"two fields", make_bundle({"x"}, {"u", "v"}), "u_x*v_x + u^2*v", false},
  };
  for (const auto& g : corpus) {
    CAPTURE(g.name);
    CHECK(worst_gateaux_error(g, 7) < 1e-6);
    if (g.null) CHECK(euler_lagrange(lagrangian_form(g.bundle, E(g.density, g.bundle))).is_zero());
  }
}

TEST_CASE("first variational split examples") {
  auto b = line();
  const Form L = F("1/2*u_x^2*dx", b);
  auto split = first_variational_split(L);
  CHECK(split.source.component(0) == E("-u_xx", b));
  CHECK(split.boundary == F("-u_x*th(u)", b));
  CHECK(exterior_d(L) == split.source.to_form() + d_H(split.boundary));

  CHECK(first_variational_split(F("u*dx", b)).boundary.is_zero());

  const Form L2 = F("1/2*u_xx^2*dx", b);
  auto split2 = first_variational_split(L2);
  CHECK(split2.boundary == F("u_xxx*th(u) - u_xx*th(u;x)", b));
  CHECK(exterior_d(L2) == split2.source.to_form() + d_H(split2.boundary));

  auto tx = plane();
  const Form wave = F("1/2*(u_t^2 - u_x^2)*dt^dx", tx);
  auto split3 = first_variational_split(wave);
  CHECK(exterior_d(wave) == split3.source.to_form() + d_H(split3.boundary));
  for (const auto& [k, s] : bidegree(split3.boundary)) {
    CHECK(k == 1);
    CHECK(s == 1);
  }
}

TEST_CASE("first variational split on random Lagrangians") {
  for (std::uint64_t c = 0; c < 50; ++c) {
    auto rng = RandomForms::for_case(43, c);
    auto b = rng.bundle(2, 2);
    const Form L = lagrangian_form(b, rng.polynomial(*b, {}));
    for (auto order : {PeelOrder::SmallestFirst, PeelOrder::LargestFirst}) {
      const auto split = first_variational_split(L, order);
      CHECK((exterior_d(L) - split.source.to_form() - d_H(split.boundary)).is_zero());
      CHECK(split.source == euler_lagrange(L));
    }
  }
}

TEST_CASE("bicomplex identities on random forms") {
  for (std::uint64_t c = 0; c < 40; ++c) {
    auto rng = RandomForms::for_case(47, c);
    auto b = rng.bundle(2, 2);
    const Form phi = rng.form(b, rng.uniform(0, 2), rng.uniform(0, b->n()), {});
    CHECK(exterior_d(exterior_d(phi)).is_zero());
    CHECK(d_H(d_H(phi)).is_zero());
    CHECK(d_V(d_V(phi)).is_zero());
    CHECK((d_H(d_V(phi)) + d_V(d_H(phi))).is_zero());
    CHECK(exterior_d(phi) == d_H(phi) + d_V(phi));
    const Form top = rng.form(b, rng.uniform(1, 2), b->n(), {});
    CHECK(tau(tau(top)) == tau(top));
    CHECK(delta(delta(top)).is_zero());
    CHECK(delta(tau(top)) == tau(exterior_d(top)));
    const Form below = rng.form(b, rng.uniform(1, 2), b->n() - 1, {});
    CHECK(tau(d_H(below)).is_zero());
    const Form dy = rng.dy_form(b, rng.uniform(0, 2), {});
    CHECK(horizontalize(exterior_d_dy_basis(dy)) == d_H(horizontalize(dy)));
  }
}
