#ifndef GARLAND_VERIFICATION_HPP
#define GARLAND_VERIFICATION_HPP

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "etale_algebra.hpp"
#include "lattice.hpp"
#include "matrix_group.hpp"

namespace garland {

struct SubgroupSummary
{
  std::size_t order = 0;
  std::uint64_t id = 0;
  std::vector<Matrix> generators;

  friend bool operator==(const SubgroupSummary &, const SubgroupSummary &) = default;
};

inline SubgroupSummary summarize(const Subgroup &h)
{
  SubgroupSummary s{h.order(), h.id(), {}};
  for (auto g : h.generators())
    s.generators.push_back(h.ambient().matrix(g));
  return s;
}

/// The side conditions under which the normalizer and lower-garland
/// statements are expected to hold.
struct Hypotheses
{
  /// S is spanned over k by S*.
  bool units_span = false;
  /// S is spanned over k by the units whose image lies in G'.
  bool selected_span = false;
  bool not_f3_squared = false;
  bool at_most_two_f2_factors = false;
  /// Not of the form k = F_3, S = F_3^n with n >= 2, where the lower garland
  /// can exceed the interval.
  bool outside_f3_split_family = false;

  bool all_hold() const
  {
    return units_span && selected_span && not_f3_squared && at_most_two_f2_factors &&
           outside_f3_split_family;
  }

  friend bool operator==(const Hypotheses &, const Hypotheses &) = default;
};

inline Hypotheses check_hypotheses(const AlgebraSpec &S, AmbientKind kind)
{
  Hypotheses h;
  h.units_span = additive_span_check(S, all_units_selector()).spans;
  h.selected_span =
      kind == AmbientKind::gl ? h.units_span : additive_span_check(S, norm_one_selector()).spans;
  h.not_f3_squared = !S.is_f3_squared();
  h.at_most_two_f2_factors = S.count_f2_factors() <= 2;
  bool split = std::all_of(S.degrees().begin(), S.degrees().end(), [](unsigned d) { return d == 1; });
  h.outside_f3_split_family = !(S.base().order() == 3 && split && S.rank() >= 2);
  return h;
}

enum class Verdict { confirmed, predicted_failure, not_applicable, unexpected_mismatch };

inline const char *to_string(Verdict v)
{
  switch (v) {
  case Verdict::confirmed:
    return "confirmed";
  case Verdict::predicted_failure:
    return "predicted_failure";
  case Verdict::not_applicable:
    return "not_applicable";
  case Verdict::unexpected_mismatch:
    return "unexpected_mismatch";
  }
  return "?";
}

/// True iff T' is the only G'-conjugate of T' inside N_{G'}T'. This is the
/// finite stand-in for the density argument: it forces N(H) <= N(T') for
/// every H in [T', N(T')].
inline bool conjugate_isolated(const Subgroup &torus, const Subgroup &normalizer)
{
  const AmbientGroup &G = torus.ambient();
  for (Subgroup::Elem g = 0; g < G.order(); ++g) {
    bool inside = true, same = true;
    for (auto x : torus.generators()) {
      auto c = G.conjugate(g, x);
      inside = inside && normalizer.contains(c);
      same = same && torus.contains(c);
    }
    if (inside && !same)
      return false;
  }
  return true;
}

struct VerificationReport
{
  std::uint32_t p = 0;
  unsigned base_degree = 0;
  std::vector<unsigned> degrees;
  std::string ambient;

  SubgroupSummary torus;
  SubgroupSummary normalizer;
  std::size_t double_normalizer_order = 0;
  bool normalizer_idempotent = false;

  std::size_t formula_order = 0;
  bool formula_closed = false;
  bool formula_equals_brute = false;
  bool formula_within_brute = false;

  std::size_t lattice_size = 0;
  std::size_t garland_count = 0;
  std::vector<SubgroupSummary> lower_garland;
  std::vector<SubgroupSummary> interval;
  std::vector<SubgroupSummary> upper_garland;
  bool equal = false;
  std::vector<SubgroupSummary> garland_only;
  std::vector<SubgroupSummary> interval_only;

  Hypotheses hypotheses;
  bool conjugate_isolated = false;
  Verdict verdict = Verdict::not_applicable;

  std::map<std::string, double> timings;
};

/// Confirmed when everything the hypotheses promise holds. The known
/// exceptions (F_3 + F_3, split algebras over F_3) are predicted failures when
/// they fail. Cases outside the hypotheses are reported without a prediction.
inline Verdict classify(const VerificationReport &r)
{
  const Hypotheses &h = r.hypotheses;
  bool holds = r.formula_equals_brute && r.equal;
  if (h.all_hold())
    return holds ? Verdict::confirmed : Verdict::unexpected_mismatch;
  if (!h.not_f3_squared && r.ambient.rfind("SL", 0) == 0)
    return r.formula_equals_brute ? Verdict::unexpected_mismatch : Verdict::predicted_failure;
  if (!h.not_f3_squared || !h.outside_f3_split_family)
    return holds ? Verdict::confirmed : Verdict::predicted_failure;
  return Verdict::not_applicable;
}

namespace detail {

class Stopwatch
{
public:
  double lap()
  {
    auto now = std::chrono::steady_clock::now();
    double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

} // namespace detail

/// Builds T', both normalizers, Lat(T', G') and its garlands, and compares the
/// lower garland with [T', N_{G'}T']. A precomputed lattice (e.g. from a
/// cache) is used when given; it must be Lat(T', G').
inline VerificationReport verify_lower_garland(const AlgebraSpec &S, const AmbientPtr &G,
                                               std::optional<IntervalLattice> lattice = {})
{
  detail::Stopwatch clock;
  VerificationReport r;
  r.p = S.base().characteristic();
  r.base_degree = S.base().absolute_degree();
  r.degrees = S.degrees();
  r.ambient = G->name();

  Subgroup torus = torus_subgroup(S, G);
  r.torus = summarize(torus);
  r.timings["torus"] = clock.lap();

  Subgroup norm = normalizer_brute(torus);
  r.normalizer = summarize(norm);
  Subgroup norm2 = normalizer_brute(norm);
  r.double_normalizer_order = norm2.order();
  r.normalizer_idempotent = norm2 == norm;
  r.conjugate_isolated = conjugate_isolated(torus, norm);
  r.timings["normalizer_brute"] = clock.lap();

  auto formula = normalizer_formula(S, G);
  r.formula_order = formula.elements.size();
  r.formula_closed = formula.closed;
  r.formula_equals_brute = formula.closed && *formula.group == norm;
  r.formula_within_brute = formula.closed && formula.group->is_subset_of(norm);
  r.timings["normalizer_formula"] = clock.lap();

  if (lattice) {
    if (!(lattice->bottom == torus) || lattice->top.order() != G->order())
      throw InvalidArgument("supplied lattice is not Lat(T', G')");
  } else {
    lattice = enumerate_interval(torus);
  }
  if (!lattice->exhaustive)
    throw CapExceeded("lattice enumeration hit the member cap", lattice->members.size());
  const IntervalLattice &lat = *lattice;
  r.lattice_size = lat.members.size();
  r.timings["lattice"] = clock.lap();

  auto graph = normality_graph(lat);
  auto gs = garlands(graph);
  r.garland_count = gs.size();
  const Garland &lower = lower_garland(gs);
  for (auto i : lower.members)
    r.lower_garland.push_back(summarize(lat.members[i]));
  for (auto i : upper_garland(gs).members)
    r.upper_garland.push_back(summarize(lat.members[i]));

  std::vector<bool> in_lower(lat.members.size(), false);
  for (auto i : lower.members)
    in_lower[i] = true;
  for (std::size_t i = 0; i < lat.members.size(); ++i) {
    bool in_interval = lat.members[i].is_subset_of(norm);
    if (in_interval)
      r.interval.push_back(summarize(lat.members[i]));
    if (in_interval && !in_lower[i])
      r.interval_only.push_back(summarize(lat.members[i]));
    if (!in_interval && in_lower[i])
      r.garland_only.push_back(summarize(lat.members[i]));
  }
  r.equal = r.garland_only.empty() && r.interval_only.empty();
  r.timings["garlands"] = clock.lap();

  r.hypotheses = check_hypotheses(S, G->kind());
  r.verdict = classify(r);
  return r;
}

struct RestrictionCheck
{
  bool equal = false;
  std::size_t gl_interval_size = 0;
  std::size_t restricted_size = 0;
  std::size_t sl_interval_size = 0;
  /// Members of {H cap SL} missing from Lat(T', N_SL T'), and vice versa.
  std::vector<SubgroupSummary> only_restricted;
  std::vector<SubgroupSummary> only_sl;
  Hypotheses hypotheses;
};

/// Compares {H cap SL : H in Lat(T, N_GL T)} with Lat(T', N_SL T').
inline RestrictionCheck interval_restriction_check(const AlgebraSpec &S, const AmbientPtr &gl,
                                                   const AmbientPtr &sl)
{
  if (gl->kind() != AmbientKind::gl || sl->kind() != AmbientKind::sl)
    throw InvalidArgument("interval_restriction_check expects a GL and an SL ambient");
  RestrictionCheck out;
  out.hypotheses = check_hypotheses(S, AmbientKind::sl);

  Subgroup t = torus_subgroup(S, gl);
  auto gl_lat = enumerate_interval(t, normalizer_brute(t));
  Subgroup t1 = torus_subgroup(S, sl);
  auto sl_lat = enumerate_interval(t1, normalizer_brute(t1));
  out.gl_interval_size = gl_lat.members.size();
  out.sl_interval_size = sl_lat.members.size();

  std::vector<Subgroup> restricted;
  for (auto &h : gl_lat.members)
    restricted.push_back(restrict_to(h, sl));
  std::sort(restricted.begin(), restricted.end(), canonical_less);
  restricted.erase(std::unique(restricted.begin(), restricted.end()), restricted.end());
  out.restricted_size = restricted.size();

  for (auto &h : restricted)
    if (!sl_lat.index_of(h))
      out.only_restricted.push_back(summarize(h));
  for (auto &h : sl_lat.members)
    if (!std::binary_search(restricted.begin(), restricted.end(), h, canonical_less))
      out.only_sl.push_back(summarize(h));
  out.equal = out.only_restricted.empty() && out.only_sl.empty();
  return out;
}

} // namespace garland

#endif // GARLAND_VERIFICATION_HPP
