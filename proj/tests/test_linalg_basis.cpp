#include <doctest.h>

#include "helpers.hpp"
#include "varcomplex/basis.hpp"
#include "varcomplex/linalg.hpp"

using namespace varcomplex;
using namespace varcomplex::linalg;
using namespace testing_helpers;

namespace {

SparseMatrix dense(std::size_t rows, const std::vector<std::vector<long>>& cols) {
  SparseMatrix m;
  m.rows = rows;
  for (const auto& c : cols) {
    SparseVec v;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] != 0) v.emplace_back(static_cast<Index>(i), Rational(c[i]));
    m.cols.push_back(v);
  }
  return m;
}

// Reference rank by plain Gaussian elimination on a dense rational copy.
std::size_t reference_rank(const SparseMatrix& m) {
  std::vector<std::vector<Rational>> a(m.rows, std::vector<Rational>(m.num_cols()));
  for (std::size_t j = 0; j < m.num_cols(); ++j)
    for (const auto& [i, v] : m.cols[j]) a[i][j] = v;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.num_cols() && r < m.rows; ++c) {
    std::size_t p = r;
    while (p < m.rows && a[p][c] == 0) ++p;
    if (p == m.rows) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < m.num_cols(); ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

SparseVec mat_vec(const SparseMatrix& m, const SparseVec& x) {
  std::map<Index, Rational> acc;
  for (const auto& [j, xj] : x)
    for (const auto& [i, v] : m.cols[j]) acc[i] += v * xj;
  SparseVec out;
  for (const auto& [i, v] : acc)
    if (v != 0) out.emplace_back(i, v);
  return out;
}

}  // namespace

TEST_CASE("rank and kernel of small matrices") {
  const auto m = dense(3, {{1, 2, 3}, {2, 4, 6}, {0, 1, 1}});
  CHECK(rank(m) == 2);
  const auto k = kernel(m);
  REQUIRE(k.size() == 1);
  CHECK(mat_vec(m, k[0]).empty());
  CHECK(rank(dense(2, {})) == 0);
  CHECK(rank(dense(2, {{0, 0}})) == 0);
  CHECK(kernel(dense(2, {{0, 0}})).size() == 1);
}

TEST_CASE("solve and residual") {
  const auto m = dense(3, {{1, 0, 1}, {0, 1, 1}});
  Echelon e;
  for (const auto& c : m.cols) e.insert(c);
  SparseVec b;
  b.emplace_back(0, Rational(2));
  b.emplace_back(1, Rational(3));
  b.emplace_back(2, Rational(5));
  auto x = e.solve(b);
  REQUIRE(x.has_value());
  CHECK((mat_vec(m, *x) == b));
  SparseVec res;
  SparseVec bad;
  bad.emplace_back(0, Rational(1));
  CHECK_FALSE(e.solve(bad, &res).has_value());
  CHECK_FALSE(res.empty());
  CHECK(e.in_span(SparseVec{}));
}

TEST_CASE("random matrices agree with dense elimination") {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> val(-3, 3), dim(1, 9);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t rows = dim(gen), cols = dim(gen);
    std::vector<std::vector<long>> c(cols, std::vector<long>(rows));
    for (auto& col : c)
      for (auto& v : col) v = (gen() % 3 == 0) ? val(gen) : 0;
    // Repeat a column sometimes to force dependencies.
    if (cols > 2) c[cols - 1] = c[0];
    const auto m = dense(rows, c);
    CHECK(rank(m) == reference_rank(m));
    const auto k = kernel(m);
    CHECK(k.size() + rank(m) == cols);
    for (const auto& v : k) CHECK(mat_vec(m, v).empty());
  }
}

TEST_CASE("matrix product") {
  const auto a = dense(2, {{1, 1}, {0, 1}});
  const auto b = dense(2, {{1, -1}, {2, 0}});
  const auto p = multiply(a, b);
  SparseVec expected;
  expected.emplace_back(0, Rational(1));
  CHECK((p.cols[0] == expected));
  CHECK((p.cols[1] == mat_vec(a, b.cols[1])));
  CHECK(is_zero(dense(3, {{0, 0, 0}})));
}

TEST_CASE("monomial and word enumeration") {
  auto b = line();
  CHECK(multi_indices_up_to(1, 2).size() == 3);
  CHECK(multi_indices_up_to(2, 2).size() == 6);
  const auto jets = jet_variable_keys(*b, {0}, 1);
  CHECK(jets.size() == 2);
  CHECK(enumerate_monomials({}, 0, jets, 2).size() == 6);
  CHECK(enumerate_monomials({}, 0, jets, 2, 1).size() == 3);
  std::vector<Generator> thetas{Generator::theta(0, MultiIndex(1)), Generator::theta(0, mi(b, {0}))};
  CHECK(enumerate_words(1, thetas, 1, 0).size() == 2);
  CHECK(enumerate_words(1, thetas, 2, 1).size() == 1);
  CHECK(enumerate_words(1, thetas, 3, 0).empty());
}

TEST_CASE("coordinates round trip") {
  auto b = plane();
  const Form phi = F("3*u*u_t*dt^dx - 1/2*x*th(u;x)^dt", b);
  CHECK(from_coordinates(b, coordinates(phi)) == phi);
  CHECK_THROWS_AS(coordinates(F("sin(u)*dx", b)), UnsupportedError);
  RowIndex idx;
  idx.collect(coordinates(phi));
  idx.freeze();
  CHECK(idx.size() == 2);
  CHECK(idx.vector(coordinates(phi)).size() == 2);
}
