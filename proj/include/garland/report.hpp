#ifndef GARLAND_REPORT_HPP
#define GARLAND_REPORT_HPP

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "finite_field.hpp"
#include "lattice.hpp"
#include "matrix_group.hpp"
#include "pell.hpp"
#include "verification.hpp"

namespace garland {

using Json = nlohmann::ordered_json;

inline constexpr const char *report_schema = "garland.report/1";
inline constexpr const char *cache_schema = "garland.lattice-cache/1";

inline std::string hex_id(std::uint64_t id)
{
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << id;
  return os.str();
}

/// Coefficients of x over F_p, walking down the tower.
inline std::vector<std::uint32_t> prime_coeffs(const FieldTable &F, FieldElement x)
{
  if (F.is_prime_field())
    return {x.value};
  std::vector<std::uint32_t> out;
  for (auto c : F.coeffs(x)) {
    auto sub = prime_coeffs(*F.subfield(), c);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

inline Json field_json(const FieldTable &F)
{
  Json j;
  j["p"] = F.characteristic();
  j["m"] = F.absolute_degree();
  Json poly = Json::array();
  for (auto c : F.defining_poly())
    poly.push_back(F.subfield() ? Json(prime_coeffs(*F.subfield(), c)) : Json(c.value));
  j["defining_poly"] = poly;
  if (F.subfield() && !F.subfield()->is_prime_field())
    j["over"] = field_json(*F.subfield());
  return j;
}

inline Json algebra_json(const AlgebraSpec &S)
{
  Json j;
  j["p"] = S.base().characteristic();
  j["base_degree"] = S.base().absolute_degree();
  j["degrees"] = S.degrees();
  return j;
}

inline Json matrix_json(const FieldTable &F, const Matrix &m)
{
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.n; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.n; ++j)
      row.push_back(prime_coeffs(F, m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline Json summary_json(const FieldTable &F, const SubgroupSummary &s)
{
  Json j;
  j["order"] = s.order;
  j["id"] = hex_id(s.id);
  Json gens = Json::array();
  for (auto &g : s.generators)
    gens.push_back(matrix_json(F, g));
  j["generators"] = gens;
  return j;
}

inline Json summaries_json(const FieldTable &F, const std::vector<SubgroupSummary> &v)
{
  Json a = Json::array();
  for (auto &s : v)
    a.push_back(summary_json(F, s));
  return a;
}

inline Json hypotheses_json(const Hypotheses &h)
{
  Json j;
  j["units_span"] = h.units_span;
  j["selected_span"] = h.selected_span;
  j["not_f3_squared"] = h.not_f3_squared;
  j["at_most_two_f2_factors"] = h.at_most_two_f2_factors;
  j["outside_f3_split_family"] = h.outside_f3_split_family;
  j["all_hold"] = h.all_hold();
  return j;
}

inline Json verification_json(const FieldTable &F, const VerificationReport &r, bool timings)
{
  Json j;
  j["torus"] = summary_json(F, r.torus);
  Json n;
  n["brute"] = summary_json(F, r.normalizer);
  n["formula_order"] = r.formula_order;
  n["formula_closed"] = r.formula_closed;
  n["formula_equals_brute"] = r.formula_equals_brute;
  n["formula_within_brute"] = r.formula_within_brute;
  n["double_normalizer_order"] = r.double_normalizer_order;
  n["idempotent"] = r.normalizer_idempotent;
  j["normalizers"] = n;
  Json l;
  l["size"] = r.lattice_size;
  l["garland_count"] = r.garland_count;
  j["lattice"] = l;
  Json g;
  g["lower"] = summaries_json(F, r.lower_garland);
  g["upper"] = summaries_json(F, r.upper_garland);
  g["interval"] = summaries_json(F, r.interval);
  g["garland_only"] = summaries_json(F, r.garland_only);
  g["interval_only"] = summaries_json(F, r.interval_only);
  j["garlands"] = g;
  Json v;
  v["lower_equals_interval"] = r.equal;
  v["hypotheses"] = hypotheses_json(r.hypotheses);
  v["conjugate_isolated"] = r.conjugate_isolated;
  v["verdict"] = to_string(r.verdict);
  j["verdicts"] = v;
  if (timings) {
    Json t;
    for (auto &[k, s] : r.timings)
      t[k] = s;
    j["timings"] = t;
  }
  return j;
}

inline Json restriction_json(const FieldTable &F, const RestrictionCheck &r)
{
  Json j;
  j["equal"] = r.equal;
  j["gl_interval_size"] = r.gl_interval_size;
  j["restricted_size"] = r.restricted_size;
  j["sl_interval_size"] = r.sl_interval_size;
  j["only_restricted"] = summaries_json(F, r.only_restricted);
  j["only_sl"] = summaries_json(F, r.only_sl);
  return j;
}

inline Json pell_json(const pell::Sl2qReport &r)
{
  Json j;
  j["d"] = r.d;
  j["period_length"] = r.period_length;
  j["variant"] = pell::to_string(r.shape.variant);
  if (r.shape.witness) {
    j["x0"] = r.shape.witness->x.str();
    j["y0"] = r.shape.witness->y.str();
    Json w = Json::array();
    for (auto &e : r.shape.coset_matrix)
      w.push_back(e.str());
    j["coset_matrix"] = w;
  }
  j["criterion_predicts_two_cosets"] = r.criterion_predicts_two_cosets;
  j["criterion_agrees"] = r.criterion_agrees;
  return j;
}

/// Lattices stored as one JSON file per case, written once and never
/// rewritten. Files with another schema or key are ignored.
class LatticeCache
{
public:
  explicit LatticeCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  static Json key(const AlgebraSpec &S, const AmbientGroup &G)
  {
    Json k = algebra_json(S);
    k["ambient"] = to_string(G.kind());
    k["n"] = G.n();
    return k;
  }

  std::filesystem::path path_for(const Json &key) const
  {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : std::string(cache_schema) + key.dump()) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return dir_ / ("lattice-" + hex_id(h) + ".json");
  }

  std::optional<IntervalLattice> load(const AlgebraSpec &S, const AmbientPtr &G,
                                      const Subgroup &bottom) const
  {
    Json k = key(S, *G);
    std::ifstream in(path_for(k));
    if (!in)
      return std::nullopt;
    Json doc = Json::parse(in, nullptr, false);
    if (doc.is_discarded() || doc.value("schema", "") != cache_schema || doc["key"] != k ||
        !doc.value("exhaustive", false))
      return std::nullopt;
    IntervalLattice lat{bottom, whole_group(G), {}, true};
    for (auto &m : doc["members"]) {
      std::vector<Subgroup::Elem> gens;
      for (auto &c : m["generators"]) {
        auto e = G->find_code(c.get<std::uint64_t>());
        if (!e)
          return std::nullopt;
        gens.push_back(*e);
      }
      Subgroup h = generate(G, gens);
      if (h.order() != m["order"].get<std::size_t>() || hex_id(h.id()) != m["id"])
        return std::nullopt;
      lat.members.push_back(std::move(h));
    }
    std::sort(lat.members.begin(), lat.members.end(), canonical_less);
    if (lat.members.empty() || !(lat.members.front() == bottom) ||
        lat.members.back().order() != G->order())
      return std::nullopt;
    return lat;
  }

  void store(const AlgebraSpec &S, const AmbientPtr &G, const IntervalLattice &lat) const
  {
    if (!lat.exhaustive)
      return;
    Json k = key(S, *G);
    auto path = path_for(k);
    std::filesystem::create_directories(dir_);
    if (std::filesystem::exists(path))
      return;
    Json doc;
    doc["schema"] = cache_schema;
    doc["key"] = k;
    doc["exhaustive"] = true;
    Json members = Json::array();
    for (auto &h : lat.members) {
      Json m;
      m["order"] = h.order();
      m["id"] = hex_id(h.id());
      Json gens = Json::array();
      for (auto g : h.generators())
        gens.push_back(G->code(g));
      m["generators"] = gens;
      members.push_back(m);
    }
    doc["members"] = members;
    // Write to a temporary name first so readers never see a partial file.
    auto tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp);
      out << doc.dump() << '\n';
    }
    std::filesystem::rename(tmp, path);
  }

private:
  std::filesystem::path dir_;
};

} // namespace garland

#endif // GARLAND_REPORT_HPP
