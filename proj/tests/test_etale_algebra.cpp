#include <gtest/gtest.h>

#include <functional>
#include <map>
#include <numeric>
#include <set>

#include <garland/etale_algebra.hpp>

#include "oracles.hpp"

using namespace garland;

namespace {

struct Case
{
  std::uint32_t p;
  unsigned base_degree;
  std::vector<unsigned> degrees;
};

// Every algebra with |S| <= 81.
std::vector<Case> small_algebras()
{
  return {{2, 1, {1}},       {2, 1, {2}},       {2, 1, {1, 1}},    {2, 1, {3}},
          {2, 1, {2, 1}},    {2, 1, {1, 1, 1}}, {2, 1, {4}},       {2, 1, {3, 1}},
          {2, 1, {2, 2}},    {2, 1, {2, 1, 1}}, {2, 1, {1, 1, 1, 1}}, {2, 1, {5}},
          {2, 1, {3, 2}},    {2, 1, {6}},       {2, 1, {4, 2}},    {2, 1, {2, 2, 2}},
          {3, 1, {2}},       {3, 1, {1, 1}},    {3, 1, {3}},       {3, 1, {2, 1}},
          {3, 1, {1, 1, 1}}, {3, 1, {4}},       {3, 1, {2, 2}},    {3, 1, {3, 1}},
          {3, 1, {1, 1, 1, 1}}, {5, 1, {2}},    {5, 1, {1, 1}},    {7, 1, {2}},
          {7, 1, {1, 1}},    {2, 2, {1}},       {2, 2, {2}},       {2, 2, {1, 1}},
          {2, 2, {2, 1}},    {2, 2, {1, 1, 1}}, {3, 2, {2}},       {3, 2, {1, 1}}};
}

AlgebraSpec make(const Case &c) { return AlgebraSpec::make(c.p, c.base_degree, c.degrees); }

std::uint64_t index_of(const AlgebraSpec &S, const AlgebraElement &a)
{
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < S.factor_count(); ++i)
    idx = idx * S.factor(i).order() + a.components[i].value;
  return idx;
}

// All k-algebra automorphisms, found without the structural construction.
// Each factor is generated by a_i = e_i * zeta_i with zeta_i a multiplicative
// generator; an automorphism is fixed by the images b_i, which must satisfy
// b_i^(|K_i|) = b_i with b_i^(|K_i| - 1) orthogonal idempotents summing to 1.
// Candidates are then checked for k-linearity and bijectivity on all of S.
std::set<std::vector<std::uint64_t>> brute_automorphisms(const AlgebraSpec &S)
{
  auto elems = all_elements(S);
  const FieldTable &k = S.base();
  auto power = [&](const AlgebraElement &a, std::uint64_t e) {
    AlgebraElement r = algebra_one(S);
    AlgebraElement b = a;
    for (; e; e >>= 1, b = algebra_mul(S, b, b))
      if (e & 1)
        r = algebra_mul(S, r, b);
    return r;
  };
  auto is_idempotent = [&](const AlgebraElement &e) { return algebra_mul(S, e, e) == e; };

  std::size_t t = S.factor_count();
  std::vector<std::vector<AlgebraElement>> cands(t);
  for (std::size_t i = 0; i < t; ++i) {
    std::uint64_t ord = S.factor(i).order() - 1;
    for (auto &b : elems) {
      if (b == algebra_zero(S))
        continue;
      AlgebraElement e = power(b, ord);
      if (is_idempotent(e) && algebra_mul(S, e, b) == b)
        cands[i].push_back(b);
    }
  }
  std::set<std::vector<std::uint64_t>> out;
  auto scalar = [&](FieldElement c) {
    AlgebraElement r = algebra_zero(S);
    for (std::size_t i = 0; i < t; ++i)
      r.components[i] = S.factor(i).embed(c);
    return r;
  };
  auto check = [&](const std::vector<AlgebraElement> &b) {
    std::vector<std::uint64_t> table(elems.size());
    std::set<std::uint64_t> image;
    for (auto &x : elems) {
      AlgebraElement y = algebra_zero(S);
      for (std::size_t i = 0; i < t; ++i) {
        FieldElement c = x.components[i];
        if (c.value)
          y = algebra_add(S, y, power(b[i], S.factor(i).log(c) + S.factor(i).order() - 1));
      }
      table[index_of(S, x)] = index_of(S, y);
      image.insert(index_of(S, y));
    }
    auto at = [&](const AlgebraElement &x) { return table[index_of(S, x)]; };
    if (image.size() != elems.size())
      return;
    for (auto &x : elems)
      for (auto &w : basis(S))
        if (at(algebra_add(S, x, w)) != index_of(S, algebra_add(S, elems[at(x)], elems[at(w)])))
          return;
    for (std::uint32_t c = 0; c < k.order(); ++c)
      if (at(scalar({c})) != index_of(S, scalar({c})))
        return;
    out.insert(table);
  };
  // Depth-first over images, keeping the idempotents orthogonal.
  std::vector<AlgebraElement> chosen;
  std::function<void(const AlgebraElement &)> search = [&](const AlgebraElement &used) {
    std::size_t i = chosen.size();
    if (i == t) {
      if (used == algebra_one(S))
        check(chosen);
      return;
    }
    for (auto &b : cands[i]) {
      AlgebraElement e = power(b, S.factor(i).order() - 1);
      if (!(algebra_mul(S, e, used) == algebra_zero(S)))
        continue;
      chosen.push_back(b);
      search(algebra_add(S, used, e));
      chosen.pop_back();
    }
  };
  search(algebra_zero(S));
  return out;
}

} // namespace

TEST(EtaleAlgebra, SizesAndUnitCounts)
{
  for (auto &c : small_algebras()) {
    auto S = make(c);
    std::uint64_t q = S.base().order(), size = 1, units = 1;
    for (auto d : c.degrees) {
      std::uint64_t f = 1;
      for (unsigned i = 0; i < d; ++i)
        f *= q;
      size *= f;
      units *= f - 1;
    }
    EXPECT_EQ(S.size(), size);
    EXPECT_EQ(torus_units(S).size(), units);
    EXPECT_EQ(S.rank(), std::accumulate(c.degrees.begin(), c.degrees.end(), 0u));
  }
  EXPECT_EQ(torus_units(AlgebraSpec::make(2, 1, {2})).size(), 3u);
  EXPECT_EQ(torus_units(AlgebraSpec::make(3, 1, {1, 1})).size(), 4u);
  EXPECT_EQ(torus_units(AlgebraSpec::make(3, 1, {2})).size(), 8u);
}

TEST(EtaleAlgebra, RejectsDegenerateSpecs)
{
  EXPECT_THROW(AlgebraSpec::make(3, 1, {}), InvalidArgument);
  EXPECT_THROW(AlgebraSpec::make(3, 1, {2, 0}), InvalidArgument);
  EXPECT_THROW(AlgebraSpec::make(6, 1, {2}), InvalidArgument);
}

TEST(EtaleAlgebra, RegularRepOfGaussianField)
{
  auto S = AlgebraSpec::make(3, 1, {2});
  const FieldTable &k = S.base();
  for (std::uint32_t a = 0; a < 3; ++a)
    for (std::uint32_t b = 0; b < 3; ++b) {
      std::vector<FieldElement> v{{a}, {b}};
      Matrix t = regular_rep(S, from_coordinates(S, v));
      EXPECT_EQ(t(0, 0), FieldElement{a});
      EXPECT_EQ(t(0, 1), k.neg({b}));
      EXPECT_EQ(t(1, 0), FieldElement{b});
      EXPECT_EQ(t(1, 1), FieldElement{a});
    }
}

TEST(EtaleAlgebra, RegularRepOfSplitAlgebraIsDiagonal)
{
  auto S = AlgebraSpec::make(3, 1, {1, 1});
  for (auto &a : all_elements(S)) {
    Matrix t = regular_rep(S, a);
    EXPECT_EQ(t(0, 0), a.components[0]);
    EXPECT_EQ(t(1, 1), a.components[1]);
    EXPECT_EQ(t(0, 1).value, 0u);
    EXPECT_EQ(t(1, 0).value, 0u);
  }
}

TEST(EtaleAlgebra, QuadraticShapeOverFieldsWithSquareRootBasis)
{
  // F_p[y]/(y^2 + 1) has basis {1, sqrt(d)} with d = -1.
  for (std::uint32_t p : {3u, 7u, 11u}) {
    auto S = AlgebraSpec::make(p, 1, {2});
    const FieldTable &k = S.base();
    ASSERT_EQ(S.factor(0).defining_poly()[0].value, 1u);
    ASSERT_EQ(S.factor(0).defining_poly()[1].value, 0u);
    FieldElement d = k.neg(k.one());
    for (std::uint32_t x = 0; x < p; ++x)
      for (std::uint32_t y = 0; y < p; ++y) {
        std::vector<FieldElement> v{{x}, {y}};
        Matrix t = regular_rep(S, from_coordinates(S, v));
        EXPECT_EQ(t(0, 0), FieldElement{x});
        EXPECT_EQ(t(0, 1), k.mul({y}, d));
        EXPECT_EQ(t(1, 0), FieldElement{y});
        EXPECT_EQ(t(1, 1), FieldElement{x});
      }
  }
}

TEST(EtaleAlgebra, RegularRepIsAnInjectiveRingMap)
{
  for (auto &c : small_algebras()) {
    auto S = make(c);
    const FieldTable &k = S.base();
    auto elems = all_elements(S);
    std::set<std::vector<FieldElement>> images;
    EXPECT_EQ(regular_rep(S, algebra_one(S)), Matrix::identity(S.rank()));
    for (std::size_t i = 0; i < elems.size(); ++i) {
      Matrix ta = regular_rep(S, elems[i]);
      images.insert(ta.entries);
      EXPECT_EQ(determinant(k, ta).value != 0, is_unit(elems[i]));
      std::size_t j = (i * 7 + 3) % elems.size();
      Matrix tb = regular_rep(S, elems[j]);
      EXPECT_EQ(regular_rep(S, algebra_mul(S, elems[i], elems[j])), multiply(k, ta, tb));
      Matrix sum = regular_rep(S, algebra_add(S, elems[i], elems[j]));
      for (std::size_t e = 0; e < sum.entries.size(); ++e)
        EXPECT_EQ(sum.entries[e], k.add(ta.entries[e], tb.entries[e]));
    }
    EXPECT_EQ(images.size(), elems.size());
  }
}

TEST(EtaleAlgebra, DeterminantOfRegularRepIsTheNorm)
{
  for (auto &c : small_algebras()) {
    auto S = make(c);
    for (auto &a : all_elements(S))
      ASSERT_EQ(determinant(S.base(), regular_rep(S, a)), algebra_norm(S, a));
  }
  auto S = AlgebraSpec::make(3, 1, {2});
  for (std::uint32_t a = 0; a < 3; ++a)
    for (std::uint32_t b = 0; b < 3; ++b) {
      std::vector<FieldElement> v{{a}, {b}};
      EXPECT_EQ(algebra_norm(S, from_coordinates(S, v)).value, (a * a + b * b) % 3);
    }
  EXPECT_EQ(algebra_norm(S, algebra_one(S)), S.base().one());
}

TEST(EtaleAlgebra, AutomorphismCountsOfNamedAlgebras)
{
  EXPECT_EQ(aut_group(AlgebraSpec::make(3, 1, {2})).size(), 2u);
  EXPECT_EQ(aut_group(AlgebraSpec::make(3, 1, {1, 1})).size(), 2u);
  EXPECT_EQ(aut_group(AlgebraSpec::make(2, 1, {2, 1})).size(), 2u);
  EXPECT_EQ(aut_group(AlgebraSpec::make(2, 1, {1, 1, 1})).size(), 6u);
  EXPECT_EQ(aut_group(AlgebraSpec::make(2, 1, {2, 2})).size(), 8u);
}

TEST(EtaleAlgebra, AutomorphismsMatchBruteForce)
{
  for (auto &c : small_algebras()) {
    auto S = make(c);
    if (S.size() > 81)
      continue;
    auto autos = aut_group(S);
    EXPECT_EQ(autos.size(), aut_group_order(S));
    auto brute = brute_automorphisms(S);
    EXPECT_EQ(brute.size(), autos.size()) << "p=" << c.p << " degrees " << c.degrees.size();
    auto elems = all_elements(S);
    std::set<std::vector<std::uint64_t>> structural;
    for (auto &sigma : autos) {
      std::vector<std::uint64_t> table(elems.size());
      for (auto &x : elems)
        table[index_of(S, x)] = index_of(S, apply(S, sigma, x));
      structural.insert(table);
    }
    EXPECT_EQ(structural, brute);
  }
}

TEST(EtaleAlgebra, AutomorphismsPreserveNormAndMatchTheirMatrices)
{
  for (auto &c : small_algebras()) {
    auto S = make(c);
    const FieldTable &k = S.base();
    for (auto &sigma : aut_group(S)) {
      Matrix P = automorphism_matrix(S, sigma);
      for (auto &a : all_elements(S)) {
        auto b = apply(S, sigma, a);
        ASSERT_EQ(algebra_norm(S, b), algebra_norm(S, a));
        auto x = coordinates(S, a), y = coordinates(S, b);
        for (std::size_t r = 0; r < S.rank(); ++r) {
          FieldElement s = k.zero();
          for (std::size_t j = 0; j < S.rank(); ++j)
            s = k.add(s, k.mul(P(r, j), x[j]));
          ASSERT_EQ(s, y[r]);
        }
      }
    }
  }
}

TEST(EtaleAlgebra, SpanCheckNamedCases)
{
  auto split3 = AlgebraSpec::make(3, 1, {1, 1});
  auto sc = additive_span_check(split3, norm_one_selector());
  EXPECT_FALSE(sc.spans);
  EXPECT_EQ(sc.dimension, 1u);
  EXPECT_EQ(sc.selected, 2u);
  EXPECT_TRUE(additive_span_check(AlgebraSpec::make(3, 1, {2}), norm_one_selector()).spans);
  auto split2 = AlgebraSpec::make(2, 1, {1, 1});
  EXPECT_FALSE(additive_span_check(split2, all_units_selector()).spans);
  EXPECT_TRUE(additive_span_check(AlgebraSpec::make(2, 1, {2, 1}), all_units_selector()).spans);
}

TEST(EtaleAlgebra, SpanCheckMatchesRankOracle)
{
  for (auto &c : small_algebras()) {
    auto S = make(c);
    for (auto sel : {all_units_selector(), norm_one_selector()}) {
      std::vector<std::vector<FieldElement>> rows;
      for (auto &u : torus_units(S))
        if (sel(S, u))
          rows.push_back(coordinates(S, u));
      auto res = additive_span_check(S, sel);
      EXPECT_EQ(res.dimension, rank(S.base(), rows));
      EXPECT_EQ(res.spans, rank(S.base(), rows) == S.rank());
      EXPECT_EQ(res.witness.size(), res.dimension);
      EXPECT_EQ(rank(S.base(), [&] {
                  std::vector<std::vector<FieldElement>> w;
                  for (auto &u : res.witness)
                    w.push_back(coordinates(S, u));
                  return w;
                }()),
                res.dimension);
    }
  }
}

TEST(EtaleAlgebra, PrimitiveNormOneSearch)
{
  auto f2 = construct_field(2, 1);
  auto f4 = FieldTable::extension(f2, 2);
  auto x = primitive_norm_one_search(*f4, *f2);
  ASSERT_TRUE(x);
  EXPECT_FALSE(f4->in_subfield(*x));

  auto f3 = construct_field(3, 1);
  auto f9 = FieldTable::extension(f3, 2);
  auto i = primitive_norm_one_search(*f9, *f3);
  ASSERT_TRUE(i);
  // y^2 + 1 is the defining polynomial, so y = i has index 3.
  EXPECT_EQ(i->value, 3u);

  auto f5 = construct_field(5, 1);
  auto f25 = FieldTable::extension(f5, 2);
  auto z = primitive_norm_one_search(*f25, *f5);
  ASSERT_TRUE(z);
  auto O = oracle::tower(5, 1, 2);
  EXPECT_EQ(oracle::norm(*O, z->value, 5, 2), 1u);
  EXPECT_EQ(oracle::degree_over(*O, z->value, 5, 2), 2u);
}

TEST(EtaleAlgebra, PowerCountNamedCases)
{
  auto f5 = construct_field(5, 1);
  auto f25 = FieldTable::extension(f5, 2);
  // Find i with i^2 = 2 inside F_25.
  std::optional<FieldElement> root;
  for (std::uint32_t v = 5; v < 25 && !root; ++v)
    if (f25->mul({v}, {v}).value == 2)
      root = FieldElement{v};
  ASSERT_TRUE(root);
  EXPECT_EQ(count_power_in_base(*f25, *root, 2, *f5), 1u);
  for (std::uint32_t v = 5; v < 25; ++v)
    EXPECT_EQ(count_power_in_base(*f25, {v}, 1, *f5), 0u);

  auto f7 = construct_field(7, 1);
  auto f49 = FieldTable::extension(f7, 2);
  for (std::uint32_t v = 7; v < 49; ++v)
    for (std::uint64_t N : {2u, 3u})
      EXPECT_LE(count_power_in_base(*f49, {v}, N, *f7), N);
}

TEST(EtaleAlgebra, PowerCountPreconditionsAreDistinct)
{
  using Kind = PowerCountPrecondition::Kind;
  auto f3 = construct_field(3, 1);
  auto f9 = FieldTable::extension(f3, 2);
  auto kind_of = [&](FieldElement x, std::uint64_t N) {
    try {
      count_power_in_base(*f9, x, N, *f3);
    } catch (const PowerCountPrecondition &e) {
      return std::optional<Kind>(e.kind());
    }
    return std::optional<Kind>();
  };
  EXPECT_EQ(kind_of({1}, 2), Kind::element_in_base);
  EXPECT_EQ(kind_of({4}, 0), Kind::exponent_zero);
  EXPECT_EQ(kind_of({4}, 3), Kind::exponent_not_coprime);
  EXPECT_EQ(kind_of({4}, 4), Kind::base_too_small);
  EXPECT_EQ(kind_of({4}, 2), std::nullopt);
}

TEST(EtaleAlgebra, PowerCountAgreesWithOracle)
{
  auto f7 = construct_field(7, 1);
  auto f49 = FieldTable::extension(f7, 2);
  auto O = oracle::tower(7, 1, 2);
  for (std::uint32_t x = 7; x < 49; ++x)
    for (std::uint64_t N : {2u, 3u, 4u, 5u}) {
      std::size_t expect = 0;
      for (std::uint32_t a = 0; a < 7; ++a)
        expect += O->pow(O->add(x, a), N) < 7;
      EXPECT_EQ(count_power_in_base(*f49, {x}, N, *f7), expect);
    }
}
