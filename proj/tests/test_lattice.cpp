#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include <garland/lattice.hpp>
#include <garland/verification.hpp>

#include "oracles.hpp"

using namespace garland;

namespace {

oracle::MatSet to_set(const Subgroup &h)
{
  oracle::MatSet out;
  for (auto e : h.elements()) {
    oracle::Mat m;
    for (auto x : h.ambient().matrix(e).entries)
      m.push_back(x.value);
    out.insert(m);
  }
  return out;
}

struct Case
{
  std::uint32_t p;
  std::vector<unsigned> degrees;
  AmbientKind kind;
};

std::vector<Case> oracle_cases()
{
  using enum AmbientKind;
  return {{2, {2}, gl},    {2, {1, 1}, gl}, {3, {2}, gl},    {3, {1, 1}, gl},
          {3, {2}, sl},    {3, {1, 1}, sl}, {2, {3}, gl},    {2, {2, 1}, gl},
          {2, {1, 1, 1}, gl}, {5, {2}, sl}, {5, {1, 1}, sl}};
}

struct Built
{
  AlgebraSpec S;
  AmbientPtr G;
  Subgroup T;
};

Built build(const Case &c)
{
  auto S = AlgebraSpec::make(c.p, 1, c.degrees);
  auto G = AmbientGroup::make(c.kind, S.rank(), S.base_ptr());
  Subgroup T = torus_subgroup(S, G);
  return {std::move(S), G, T};
}

} // namespace

TEST(Lattice, IntervalMatchesOracleEnumeration)
{
  for (auto &c : oracle_cases()) {
    auto b = build(c);
    unsigned n = b.S.rank();
    auto group = oracle::all_matrices(n, c.p, c.kind == AmbientKind::sl);
    auto ts = to_set(b.T);
    std::set<oracle::MatSet> expect;
    for (auto &h : oracle::all_subgroups(group, n, c.p))
      if (std::includes(h.begin(), h.end(), ts.begin(), ts.end()))
        expect.insert(h);
    auto lat = enumerate_interval(b.T);
    ASSERT_TRUE(lat.exhaustive);
    std::set<oracle::MatSet> got;
    for (auto &h : lat.members)
      got.insert(to_set(h));
    EXPECT_EQ(got, expect) << b.G->name();
    EXPECT_EQ(lat.members.size(), expect.size());
  }
}

TEST(Lattice, MembersAreSortedWithBottomFirstAndTopLast)
{
  for (auto &c : oracle_cases()) {
    auto b = build(c);
    auto lat = enumerate_interval(b.T);
    EXPECT_EQ(lat.members.front(), b.T);
    EXPECT_EQ(lat.members.back(), whole_group(b.G));
    EXPECT_TRUE(std::is_sorted(lat.members.begin(), lat.members.end(), canonical_less));
    for (std::size_t i = 0; i < lat.members.size(); ++i)
      EXPECT_EQ(lat.index_of(lat.members[i]), i);
  }
}

TEST(Lattice, SubIntervalIsTheFilteredLattice)
{
  for (auto &c : oracle_cases()) {
    auto b = build(c);
    Subgroup N = normalizer_brute(b.T);
    auto full = enumerate_interval(b.T);
    auto sub = enumerate_interval(b.T, N);
    std::vector<Subgroup> expect;
    for (auto &h : full.members)
      if (h.is_subset_of(N))
        expect.push_back(h);
    EXPECT_EQ(sub.members, expect);
  }
}

TEST(Lattice, GarlandsPartitionAndMatchOracleComponent)
{
  for (auto &c : oracle_cases()) {
    auto b = build(c);
    unsigned n = b.S.rank();
    auto group = oracle::all_matrices(n, c.p, c.kind == AmbientKind::sl);
    auto lat = enumerate_interval(b.T);
    auto gs = garlands(normality_graph(lat));
    std::vector<int> seen(lat.members.size(), 0);
    std::size_t lower = 0, upper = 0;
    for (auto &g : gs) {
      for (auto i : g.members)
        ++seen[i];
      lower += g.is_lower;
      upper += g.is_upper;
    }
    EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int k) { return k == 1; }));
    EXPECT_EQ(lower, 1u);
    EXPECT_EQ(upper, 1u);

    std::vector<oracle::MatSet> members;
    for (auto &h : lat.members)
      members.push_back(to_set(h));
    auto comp = oracle::normality_component(members, members.front(), group, n, c.p);
    std::set<oracle::MatSet> got;
    for (auto i : lower_garland(gs).members)
      got.insert(members[i]);
    EXPECT_EQ(got, comp) << b.G->name();

    Subgroup N = normalizer_brute(b.T);
    auto ni = lat.index_of(N);
    ASSERT_TRUE(ni);
    auto &lg = lower_garland(gs).members;
    EXPECT_NE(std::find(lg.begin(), lg.end(), *ni), lg.end());
    EXPECT_NE(std::find(lg.begin(), lg.end(), 0u), lg.end());
  }
}

TEST(Lattice, SingleMemberLatticeIsOneGarland)
{
  auto G = AmbientGroup::make(AmbientKind::gl, 2, construct_field(3, 1));
  auto lat = enumerate_interval(whole_group(G));
  ASSERT_EQ(lat.members.size(), 1u);
  auto gs = garlands(normality_graph(lat));
  ASSERT_EQ(gs.size(), 1u);
  EXPECT_TRUE(gs[0].is_lower);
  EXPECT_TRUE(gs[0].is_upper);
}

TEST(Lattice, SingerTorusInGl22IsOneGarland)
{
  auto b = build({2, {2}, AmbientKind::gl});
  auto lat = enumerate_interval(b.T);
  ASSERT_EQ(lat.members.size(), 2u);
  auto gs = garlands(normality_graph(lat));
  ASSERT_EQ(gs.size(), 1u);
  EXPECT_EQ(gs[0].members.size(), 2u);
}

TEST(Lattice, DiagonalTorusOverF3HasLargerLowerGarland)
{
  auto b = build({3, {1, 1}, AmbientKind::gl});
  auto report = verify_lower_garland(b.S, b.G);
  EXPECT_EQ(report.interval.size(), 2u);
  EXPECT_GT(report.lower_garland.size(), report.interval.size());
  EXPECT_FALSE(report.equal);
  bool has16 = std::any_of(report.garland_only.begin(), report.garland_only.end(),
                           [](const SubgroupSummary &s) { return s.order == 16; });
  EXPECT_TRUE(has16);
  EXPECT_EQ(report.verdict, Verdict::predicted_failure);
}

TEST(Lattice, CappedEnumerationIsRefused)
{
  auto b = build({3, {1, 1}, AmbientKind::gl});
  auto lat = enumerate_interval(b.T, 3);
  EXPECT_FALSE(lat.exhaustive);
  EXPECT_THROW(normality_graph(lat), InvalidArgument);
  EXPECT_THROW(verify_lower_garland(b.S, b.G, lat), CapExceeded);
}

TEST(Lattice, WrongBottomIsRejected)
{
  auto b = build({3, {2}, AmbientKind::gl});
  Subgroup other = torus_subgroup(AlgebraSpec::make(3, 1, {1, 1}), b.G);
  EXPECT_THROW(enumerate_interval(b.T, other), InvalidArgument);
  EXPECT_THROW(verify_lower_garland(b.S, b.G, enumerate_interval(other)), InvalidArgument);
}

TEST(Lattice, LatticeDataIsConjugationInvariant)
{
  std::mt19937 rng(3);
  for (auto &c : oracle_cases()) {
    auto b = build(c);
    std::uniform_int_distribution<AmbientGroup::Elem> pick(0, b.G->order() - 1);
    auto g = pick(rng);
    auto lat = enumerate_interval(b.T);
    auto latg = enumerate_interval(conjugate(b.T, g));
    ASSERT_EQ(latg.members.size(), lat.members.size());
    std::vector<Subgroup> mapped;
    for (auto &h : lat.members)
      mapped.push_back(conjugate(h, g));
    std::sort(mapped.begin(), mapped.end(), canonical_less);
    EXPECT_EQ(mapped, latg.members);
    auto gs = garlands(normality_graph(lat)), gsg = garlands(normality_graph(latg));
    std::vector<std::size_t> sizes, sizesg;
    for (auto &x : gs)
      sizes.push_back(x.members.size());
    for (auto &x : gsg)
      sizesg.push_back(x.members.size());
    std::sort(sizes.begin(), sizes.end());
    std::sort(sizesg.begin(), sizesg.end());
    EXPECT_EQ(sizes, sizesg);
    EXPECT_EQ(lower_garland(gs).members.size(), lower_garland(gsg).members.size());
  }
}

TEST(Lattice, ReportFieldsAreInternallyConsistent)
{
  for (auto &c : oracle_cases()) {
    auto b = build(c);
    auto r = verify_lower_garland(b.S, b.G);
    EXPECT_EQ(r.torus.order, b.T.order());
    EXPECT_EQ(r.equal, r.garland_only.empty() && r.interval_only.empty());
    EXPECT_EQ(r.verdict, classify(r));
    EXPECT_LE(r.lower_garland.size(), r.lattice_size);
    EXPECT_EQ(r.normalizer_idempotent, r.double_normalizer_order == r.normalizer.order);
    if (r.conjugate_isolated) {
      EXPECT_TRUE(r.equal) << b.G->name();
    }
  }
}

TEST(Lattice, RestrictionToSlMatchesSlInterval)
{
  for (auto [p, deg] : {std::pair{2u, std::vector<unsigned>{2}}, {3u, {2}}, {3u, {2, 1}},
                        {2u, {2, 1}}, {5u, {2}}, {5u, {1, 1}}}) {
    auto S = AlgebraSpec::make(p, 1, deg);
    auto gl = AmbientGroup::make(AmbientKind::gl, S.rank(), S.base_ptr());
    auto sl = AmbientGroup::make(AmbientKind::sl, S.rank(), S.base_ptr());
    auto r = interval_restriction_check(S, gl, sl);
    ASSERT_TRUE(r.hypotheses.all_hold());
    EXPECT_TRUE(r.equal) << "p=" << p;
    EXPECT_EQ(r.restricted_size, r.sl_interval_size);
  }
  auto S = AlgebraSpec::make(3, 1, {1, 1});
  auto gl = AmbientGroup::make(AmbientKind::gl, 2, S.base_ptr());
  EXPECT_THROW(interval_restriction_check(S, gl, gl), InvalidArgument);
}
