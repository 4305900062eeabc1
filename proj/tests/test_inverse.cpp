#include <doctest.h>

#include "helpers.hpp"
#include "varcomplex/inverse.hpp"
#include "varcomplex/random.hpp"

using namespace varcomplex;
using namespace testing_helpers;

namespace {

SourceForm source(const BundlePtr& b, const std::string& e0) {
  SourceForm e(b);
  e.set(0, E(e0, b));
  return e;
}

}  // namespace

TEST_CASE("Helmholtz check") {
  auto b = line();
  CHECK(helmholtz_check(source(b, "-u_xx")).passes);
  const auto bad = helmholtz_check(source(b, "u_x"));
  CHECK_FALSE(bad.passes);
  CHECK_FALSE(bad.certificate.is_zero());
  CHECK(bad.verdict == ZeroTest::NonZero);
  CHECK(helmholtz_check(SourceForm(b)).passes);

  const auto scaled = helmholtz_check(source(b, "3*u_x"));
  CHECK_FALSE(scaled.passes);
  CHECK(scaled.certificate == Expr(3) * bad.certificate);
}

TEST_CASE("variational triviality") {
  auto b = line();
  CHECK(is_variationally_trivial(F("2*u*u_x*dx", b)));
  CHECK_FALSE(is_variationally_trivial(F("1/2*u_x^2*dx", b)));
  auto t = make_bundle({"t"}, {"u"});
  CHECK(is_variationally_trivial(F("(u^2 + 2*t*u*u_t)*dt", t)));
  CHECK_FALSE(is_variationally_trivial(F("1/2*u_t^2*dt", t)));
  CHECK_FALSE(is_variationally_trivial(F("1/2*(u_t^2 - u_x^2)*dt^dx", plane())));
}

TEST_CASE("horizontal antiderivative") {
  auto b = line();
  auto r = horizontal_antiderivative(F("2*u*u_x*dx", b));
  REQUIRE(std::holds_alternative<Form>(r));
  CHECK(d_H(std::get<Form>(r)) == F("2*u*u_x*dx", b));
  CHECK(std::get<Form>(r) == F("u^2", b));

  auto zero = horizontal_antiderivative(Form(b));
  REQUIRE(std::holds_alternative<Form>(zero));
  CHECK(std::get<Form>(zero).is_zero());

  const Form L = F("1/2*u_x^2*dx", b);
  const Form sigma = exterior_d(L) - euler_lagrange(L).to_form();
  auto xi = horizontal_antiderivative(sigma);
  REQUIRE(std::holds_alternative<Form>(xi));
  CHECK(d_H(std::get<Form>(xi)) == sigma);

  CHECK_THROWS_AS(horizontal_antiderivative(F("u*th(u)", b)), NotClosedError);
  auto tx = plane();
  CHECK_THROWS_AS(horizontal_antiderivative(F("u*dt", tx)), NotClosedError);
}

TEST_CASE("antiderivative reports truncation failure") {
  auto b = line();
  const Form sigma = F("u_xxx*dx", b);
  auto r = horizontal_antiderivative(sigma, AntiderivativeConfig{1, 1});
  REQUIRE(std::holds_alternative<NotExactInTruncation>(r));
  const auto& fail = std::get<NotExactInTruncation>(r);
  CHECK_FALSE(fail.residual.is_zero());
  CHECK(fail.bounds.max_jet_order == 1);
  auto ok = horizontal_antiderivative(sigma);
  REQUIRE(std::holds_alternative<Form>(ok));
  CHECK(std::get<Form>(ok) == F("u_xx", b));
}

TEST_CASE("default antiderivative bounds") {
  auto b = line();
  const auto cfg = default_antiderivative_config(F("x*u*u_xx*dx", b));
  CHECK(cfg.max_jet_order == 3);
  CHECK(cfg.max_poly_degree == 4);
}

TEST_CASE("Lagrangian reconstruction") {
  auto b = line();
  const Form L = reconstruct_lagrangian(source(b, "-u_xx"));
  CHECK(L == F("-1/2*u*u_xx*dx", b));
  CHECK(euler_lagrange(L).component(0) == E("-u_xx", b));
  CHECK(reconstruct_lagrangian(SourceForm(b)).is_zero());
  CHECK(reconstruct_lagrangian(source(b, "u")) == F("1/2*u^2*dx", b));
  CHECK(reconstruct_lagrangian(source(b, "x^2")) == F("x^2*u*dx", b));
  CHECK_THROWS_AS(reconstruct_lagrangian(source(b, "u_x")), HelmholtzError);
  CHECK_THROWS_AS(reconstruct_lagrangian(source(b, "sin(u)")), UnsupportedError);
}

TEST_CASE("triviality witness") {
  auto b = line();
  auto w = triviality_witness(F("2*u*u_x*dx", b));
  REQUIRE(std::holds_alternative<TrivialityWitness>(w));
  CHECK(std::get<TrivialityWitness>(w).xi == F("u^2", b));

  auto t = make_bundle({"t"}, {"u"});
  const Form L = F("(u^2 + 2*t*u*u_t)*dt", t);
  auto wt = triviality_witness(L);
  REQUIRE(std::holds_alternative<TrivialityWitness>(wt));
  CHECK(d_H(std::get<TrivialityWitness>(wt).xi) == L);

  const Form closed = cli::parse_form_raw("u^2*dt + 2*t*u*du", t);
  auto wc = triviality_witness(L, closed);
  REQUIRE(std::holds_alternative<TrivialityWitness>(wc));
  const auto& wit = std::get<TrivialityWitness>(wc);
  CHECK(wit.closed_part == L);
  CHECK(wit.xi.is_zero());

  auto wz = triviality_witness(Form(b));
  REQUIRE(std::holds_alternative<TrivialityWitness>(wz));
  CHECK(std::get<TrivialityWitness>(wz).xi.is_zero());

  CHECK_THROWS_AS(triviality_witness(F("1/2*u_x^2*dx", b)), Error);
  CHECK_THROWS_AS(triviality_witness(F("u_x*dx", b), cli::parse_form_raw("u*dx", b)), Error);
}

TEST_CASE("inverse problem round trips on random Lagrangians") {
  for (std::uint64_t c = 0; c < 30; ++c) {
    auto rng = RandomForms::for_case(53, c);
    auto b = rng.bundle(2, 2);
    const Form L = lagrangian_form(b, rng.polynomial(*b, RandomBounds{2, 3, 3, true}));
    const SourceForm e = euler_lagrange(L);
    CHECK(helmholtz_check(e).passes);
    const Form L2 = reconstruct_lagrangian(e);
    CHECK(euler_lagrange(L2) == e);
    CHECK(is_variationally_trivial(L - L2));
  }
}

TEST_CASE("random total divergences are trivial with a witness") {
  for (std::uint64_t c = 0; c < 30; ++c) {
    auto rng = RandomForms::for_case(59, c);
    auto b = rng.bundle(2, 1);
    const Form xi = rng.form(b, 0, b->n() - 1, RandomBounds{2, 2, 2, true});
    const Form L = d_H(xi);
    CHECK(is_variationally_trivial(L));
    auto w = triviality_witness(L);
    REQUIRE(std::holds_alternative<TrivialityWitness>(w));
    CHECK(d_H(std::get<TrivialityWitness>(w).xi) == L);
  }
}
