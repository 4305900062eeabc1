#include <doctest.h>

#include "helpers.hpp"
#include "oracles.hpp"
#include "varcomplex/random.hpp"

using namespace varcomplex;
using namespace testing_helpers;

TEST_CASE("bundle validation") {
  CHECK_NOTHROW(make_bundle({"t", "x"}, {"u", "v"}));
  CHECK_THROWS_AS(make_bundle({}, {"u"}), CoordinateError);
  CHECK_THROWS_AS(make_bundle({"x"}, {}), CoordinateError);
  CHECK_THROWS_AS(make_bundle({"x"}, {"x"}), CoordinateError);
  CHECK_THROWS_AS(make_bundle({"x_1"}, {"u"}), CoordinateError);
  CHECK_THROWS_AS(make_bundle({"x"}, {"th"}), CoordinateError);
  CHECK_THROWS_AS(make_bundle({"a", "b", "c", "d", "e", "f", "g", "h", "i"}, {"u"}), CoordinateError);
  auto b = make_bundle({"t", "x"}, {"u", "v"});
  CHECK(b->base_index("x") == 1);
  CHECK(b->fiber_index("v") == 1);
  CHECK(b->fiber_index("w") == -1);
}

TEST_CASE("multi-index addition") {
  MultiIndex empty(2);
  const MultiIndex x = empty.plus(1);
  CHECK(x.order() == 1);
  const MultiIndex xx = x.plus(1);
  CHECK(xx.order() == 2);
  CHECK(xx.count(1) == 2);
  // (x,t)+t built in either order
  CHECK(empty.plus(1).plus(0).plus(0) == empty.plus(0).plus(0).plus(1));
  CHECK_THROWS_AS(empty.plus(2), CoordinateError);
  CHECK(MultiIndex::unpack(2, xx.packed()) == xx);
  CHECK(x < xx);
  CHECK(MultiIndex(2, {0, 1}) != MultiIndex(2, {0, 0}));
}

TEST_CASE("partial derivatives") {
  auto b = line("y");
  CHECK(partial(E("y_x^2", b), JetVar{0, mi(b, {0})}) == E("2*y_x", b));
  auto bt = make_bundle({"t", "x"}, {"y"});
  CHECK(partial(E("x*y_t", bt), JetVar{0, MultiIndex(2)}).is_zero());
  CHECK(partial(E("sin(y)", b), JetVar{0, MultiIndex(1)}) == E("cos(y)", b));
  CHECK(partial(E("cos(y)", b), JetVar{0, MultiIndex(1)}) == E("-sin(y)", b));
  CHECK(partial(E("exp(2*y)", b), JetVar{0, MultiIndex(1)}) == E("2*exp(2*y)", b));
  CHECK(partial_base(E("x^3*y", b), 0) == E("3*x^2*y", b));
}

TEST_CASE("total derivative examples") {
  auto b = line("y");
  CHECK(total_derivative(E("y", b), 0) == E("y_x", b));
  CHECK(total_derivative(E("y_x^2", b), 0) == E("2*y_x*y_xx", b));
  auto bt = make_bundle({"t", "x"}, {"y"});
  CHECK(total_derivative(E("x*y_t", bt), 1) == E("y_t + x*y_tx", bt));
  CHECK(total_derivative(E("y", bt), MultiIndex(2)) == E("y", bt));
  CHECK(total_derivative(E("y", b), mi(b, {0, 0})) == E("y_xx", b));
  CHECK(total_derivative(E("y_x*y_t", bt), mi(bt, {1})) == E("y_xx*y_t + y_x*y_tx", bt));
  CHECK(total_derivative(E("sin(y)", b), 0) == E("cos(y)*y_x", b));
}

TEST_CASE("normalization") {
  auto bt = make_bundle({"t", "x"}, {"y"});
  CHECK(E("y_x*y_t - y_t*y_x", bt).is_zero());
  CHECK(E("(y+1)^2 - y^2 - 2*y - 1", bt).is_zero());
  CHECK(E("2*(1/2)*y_xx", bt) == E("y_xx", bt));
  CHECK(E("y_tx", bt) == E("y_xt", bt));
  CHECK(normalize(E("y*y", bt)) == E("y^2", bt));
  CHECK(E("sin(0)", bt).is_zero());
  CHECK(E("cos(0) + exp(0)", bt) == Expr(2));
  CHECK(zero_test(E("y - y", bt)) == ZeroTest::Zero);
  CHECK(zero_test(E("y", bt)) == ZeroTest::NonZero);
  CHECK(zero_test(E("sin(y)^2 + cos(y)^2 - 1", bt)) == ZeroTest::Unknown);
}

TEST_CASE("jet order") {
  auto b = line("y");
  CHECK(jet_order(E("y_xx*y", b)) == 2);
  CHECK(jet_order(E("x^3", b)) == -1);
  CHECK(jet_order(E("sin(y_x)", b)) == 1);
  CHECK(jet_order(E("y", b)) == 0);
  CHECK(jet_order(Expr(0)) == -1);
}

TEST_CASE("scaling substitution") {
  auto b = line("y");
  const Expr t = Expr::param();
  CHECK(substitute_scaling(E("y_x^2", b)) == t * t * E("y_x^2", b));
  CHECK(substitute_scaling(E("x", b), Rational(3)) == E("x", b));
  CHECK(substitute_scaling(E("y + y_x", b), Rational(0)).is_zero());
  CHECK(integrate_param_unit(t * t * E("y", b)) == E("1/3*y", b));
  CHECK(jet_degree(E("x^5*y*y_x^2", b)) == 3);
  CHECK(total_degree(E("x^5*y*y_x^2", b)) == 8);
}

TEST_CASE("rendering") {
  auto b = line("u");
  CHECK(str(E("1/2*u_x^2", b), b) == "1/2*u_x^2");
  CHECK(str(Expr(0), b) == "0");
  CHECK(to_latex(E("-u_xx", b), *b) == "-u_{xx}");
  auto bt = make_bundle({"t", "x"}, {"u"});
  CHECK(str(E("u_xt", bt), bt) == "u_tx");
}

TEST_CASE("randomized total-derivative properties") {
  for (std::uint64_t c = 0; c < 60; ++c) {
    auto rng = RandomForms::for_case(11, c);
    auto b = rng.bundle(2, 2);
    const Expr f = rng.polynomial(*b, {});
    const Expr g = rng.polynomial(*b, {});
    const auto l = rng.uniform(0, b->n() - 1), m = rng.uniform(0, b->n() - 1);
    CHECK(total_derivative(total_derivative(f, l), m) == total_derivative(total_derivative(f, m), l));
    CHECK(total_derivative(f * g, l) == total_derivative(f, l) * g + f * total_derivative(g, l));
    CHECK(total_derivative(f + g, l) == total_derivative(f, l) + total_derivative(g, l));
    CHECK(jet_order(total_derivative(f, l)) <= jet_order(f) + 1);
    CHECK(normalize(normalize(f)) == normalize(f));
    CHECK((f - f).is_zero());
  }
  auto b = make_bundle({"t", "x"}, {"u"});
  const Expr base_only = E("t^3*x + 5*x^2", b);
  CHECK(total_derivative(base_only, 1) == partial_base(base_only, 1));
}

TEST_CASE("section oracle for total derivatives") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> pt(-1.0, 1.0);
  double worst = 0;
  for (std::uint64_t c = 0; c < 60; ++c) {
    auto rng = RandomForms::for_case(29, c);
    auto b = rng.bundle(2, 2);
    Expr f = rng.polynomial(*b, {});
    if (c % 3 == 0) f += Expr::apply(FuncKind::Sin, rng.polynomial(*b, RandomBounds{2, 2, 2, true}));
    if (c % 5 == 0) f *= Expr::apply(FuncKind::Exp, rng.polynomial(*b, RandomBounds{1, 1, 1, false}));
    const auto s = oracle::random_section(gen, b->n(), b->m(), 4);
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<double> x(b->n());
      for (auto& v : x) v = pt(gen);
      for (std::size_t l = 0; l < b->n(); ++l) {
        const double numeric = oracle::complex_step_derivative(f, s, x, l);
        const double symbolic =
            oracle::evaluate(total_derivative(f, l), s, std::vector<oracle::C>(x.begin(), x.end())).real();
        worst = std::max(worst, oracle::rel_error(numeric, symbolic));
      }
    }
  }
  CHECK(worst < 1e-9);
}
