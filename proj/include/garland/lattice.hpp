#ifndef GARLAND_LATTICE_HPP
#define GARLAND_LATTICE_HPP

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "error.hpp"
#include "etale_algebra.hpp"
#include "matrix_group.hpp"

namespace garland {

inline constexpr std::size_t default_member_cap = 200000;

/// Lat(bottom, top): every subgroup H with bottom <= H <= top, sorted by
/// (order, id). members.front() is bottom and members.back() is top.
struct IntervalLattice
{
  Subgroup bottom;
  Subgroup top;
  std::vector<Subgroup> members;
  bool exhaustive = true;

  std::optional<std::size_t> index_of(const Subgroup &h) const
  {
    auto it = std::lower_bound(members.begin(), members.end(), h, canonical_less);
    if (it != members.end() && *it == h)
      return static_cast<std::size_t>(it - members.begin());
    return std::nullopt;
  }

  bool includes(std::size_t smaller, std::size_t larger) const
  {
    return members[smaller].is_subset_of(members[larger]);
  }
};

namespace detail {

// Representatives of the double cosets H g H of h inside top, excluding H.
inline std::vector<Subgroup::Elem> double_coset_reps(const Subgroup &h, const Subgroup &top)
{
  const AmbientGroup &G = h.ambient();
  std::vector<std::uint64_t> marked = h.bits();
  auto mark = [&](Subgroup::Elem e) {
    std::uint64_t bit = std::uint64_t{1} << (e & 63);
    if (marked[e >> 6] & bit)
      return false;
    marked[e >> 6] |= bit;
    return true;
  };
  auto helems = h.elements();
  std::vector<Subgroup::Elem> reps, frontier;
  for (Subgroup::Elem g : top.elements()) {
    if ((marked[g >> 6] >> (g & 63)) & 1u)
      continue;
    reps.push_back(g);
    frontier.clear();
    for (auto x : helems) {
      auto y = G.mul(x, g);
      if (mark(y))
        frontier.push_back(y);
    }
    for (std::size_t i = 0; i < frontier.size(); ++i)
      for (auto s : h.generators()) {
        auto y = G.mul(frontier[i], s);
        if (mark(y))
          frontier.push_back(y);
      }
  }
  return reps;
}

} // namespace detail

/// Breadth-first closure from bottom: every member H is extended by one
/// representative of each double coset HgH in top, and the results are
/// deduplicated by id. Any K > H contains some <H, g> > H, so following a
/// maximal chain reaches every member.
inline IntervalLattice enumerate_interval(const Subgroup &bottom, const Subgroup &top,
                                          std::size_t member_cap = default_member_cap)
{
  if (!bottom.is_subset_of(top))
    throw InvalidArgument("enumerate_interval: bottom is not contained in top");
  IntervalLattice lat{bottom, top, {bottom}, true};
  std::unordered_multimap<std::uint64_t, std::size_t> seen{{bottom.id(), 0}};
  for (std::size_t i = 0; i < lat.members.size(); ++i) {
    Subgroup h = lat.members[i];
    if (h.order() == top.order())
      continue;
    for (auto g : detail::double_coset_reps(h, top)) {
      Subgroup k = extend(h, g, top.order());
      auto [lo, hi] = seen.equal_range(k.id());
      bool known = std::any_of(lo, hi, [&](auto &kv) { return lat.members[kv.second] == k; });
      if (known)
        continue;
      if (lat.members.size() >= member_cap) {
        lat.exhaustive = false;
        break;
      }
      seen.emplace(k.id(), lat.members.size());
      lat.members.push_back(std::move(k));
    }
    if (!lat.exhaustive)
      break;
  }
  std::sort(lat.members.begin(), lat.members.end(), canonical_less);
  return lat;
}

inline IntervalLattice enumerate_interval(const Subgroup &bottom,
                                          std::size_t member_cap = default_member_cap)
{
  return enumerate_interval(bottom, whole_group(bottom.ambient_ptr()), member_cap);
}

/// Vertices are lattice positions; {i, j} is an edge when the smaller member is
/// normal in the larger one.
struct NormalityGraph
{
  std::size_t vertex_count = 0;
  std::size_t bottom = 0;
  std::size_t top = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

inline NormalityGraph normality_graph(const IntervalLattice &lat)
{
  if (!lat.exhaustive)
    throw InvalidArgument("normality graph of a non-exhaustive lattice");
  NormalityGraph g{lat.members.size(), 0, lat.members.size() - 1, {}};
  for (std::size_t i = 0; i < lat.members.size(); ++i)
    for (std::size_t j = i + 1; j < lat.members.size(); ++j) {
      const Subgroup &a = lat.members[i], &b = lat.members[j];
      if (a.order() == b.order())
        continue;
      if (a.is_subset_of(b) && is_normal_in(a, b))
        g.edges.emplace_back(i, j);
    }
  return g;
}

struct Garland
{
  std::vector<std::size_t> members;
  bool is_lower = false;
  bool is_upper = false;
};

/// Connected components of the normality graph, ordered by smallest member.
inline std::vector<Garland> garlands(const NormalityGraph &graph)
{
  std::vector<std::size_t> parent(graph.vertex_count);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : graph.edges) {
    auto ra = find(a), rb = find(b);
    if (ra != rb)
      parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::map<std::size_t, Garland> by_root;
  for (std::size_t v = 0; v < graph.vertex_count; ++v)
    by_root[find(v)].members.push_back(v);
  std::vector<Garland> out;
  for (auto &[root, gar] : by_root) {
    gar.is_lower = find(graph.bottom) == root;
    gar.is_upper = find(graph.top) == root;
    out.push_back(std::move(gar));
  }
  return out;
}

inline const Garland &lower_garland(const std::vector<Garland> &gs)
{
  return *std::find_if(gs.begin(), gs.end(), [](const Garland &g) { return g.is_lower; });
}

inline const Garland &upper_garland(const std::vector<Garland> &gs)
{
  return *std::find_if(gs.begin(), gs.end(), [](const Garland &g) { return g.is_upper; });
}

} // namespace garland

#endif // GARLAND_LATTICE_HPP
