#ifndef GARLAND_ETALE_ALGEBRA_HPP
#define GARLAND_ETALE_ALGEBRA_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "finite_field.hpp"
#include "matrix.hpp"

namespace garland {

inline constexpr std::uint64_t default_unit_cap = std::uint64_t{1} << 20;

/// S = K_1 + ... + K_t over a finite base field k, with K_i = F_{q^{n_i}}
/// built directly over k. The fixed k-basis of S is the concatenation of the
/// power bases 1, y_i, ..., y_i^{n_i - 1} in factor order.
class AlgebraSpec
{
public:
  AlgebraSpec(FieldPtr base, std::vector<unsigned> degrees,
              std::uint64_t field_cap = default_field_cap)
      : base_(std::move(base)), degrees_(std::move(degrees))
  {
    if (!base_)
      throw InvalidArgument("algebra needs a base field");
    if (degrees_.empty())
      throw InvalidArgument("algebra needs at least one factor");
    std::map<unsigned, FieldPtr> built;
    for (unsigned d : degrees_) {
      if (d == 0)
        throw InvalidArgument("factor degree must be at least 1");
      auto &f = built[d];
      if (!f)
        f = FieldTable::extension(base_, d, field_cap);
      offsets_.push_back(rank_);
      rank_ += d;
      factors_.push_back(f);
    }
  }

  /// k = F_{p^base_degree}.
  static AlgebraSpec make(std::uint32_t p, unsigned base_degree, std::vector<unsigned> degrees,
                          std::uint64_t field_cap = default_field_cap)
  {
    return AlgebraSpec(construct_field(p, base_degree, field_cap), std::move(degrees),
                       field_cap);
  }

  const FieldTable &base() const noexcept { return *base_; }
  const FieldPtr &base_ptr() const noexcept { return base_; }
  const std::vector<unsigned> &degrees() const noexcept { return degrees_; }
  std::size_t factor_count() const noexcept { return factors_.size(); }
  const FieldTable &factor(std::size_t i) const { return *factors_.at(i); }
  /// Total rank n over k.
  unsigned rank() const noexcept { return rank_; }
  /// Position of factor i's first basis vector.
  unsigned offset(std::size_t i) const { return offsets_.at(i); }

  /// |S|, saturating at UINT64_MAX.
  std::uint64_t size() const noexcept
  {
    std::uint64_t s = 1;
    for (auto &f : factors_) {
      if (s > UINT64_MAX / f->order())
        return UINT64_MAX;
      s *= f->order();
    }
    return s;
  }

  std::uint64_t unit_count() const noexcept
  {
    std::uint64_t s = 1;
    for (auto &f : factors_) {
      if (s > UINT64_MAX / (f->order() - 1))
        return UINT64_MAX;
      s *= f->order() - 1;
    }
    return s;
  }

  /// Number of factors equal to the base field F_2.
  std::size_t count_f2_factors() const noexcept
  {
    if (base_->order() != 2)
      return 0;
    return static_cast<std::size_t>(std::count(degrees_.begin(), degrees_.end(), 1u));
  }

  /// S = F_3 + F_3.
  bool is_f3_squared() const noexcept
  {
    return base_->order() == 3 && degrees_ == std::vector<unsigned>{1, 1};
  }

private:
  FieldPtr base_;
  std::vector<unsigned> degrees_;
  std::vector<FieldPtr> factors_;
  std::vector<unsigned> offsets_;
  unsigned rank_ = 0;
};

struct AlgebraElement
{
  std::vector<FieldElement> components;

  friend auto operator<=>(const AlgebraElement &, const AlgebraElement &) = default;
};

inline AlgebraElement algebra_one(const AlgebraSpec &S)
{
  return {std::vector<FieldElement>(S.factor_count(), FieldElement{1})};
}

inline AlgebraElement algebra_zero(const AlgebraSpec &S)
{
  return {std::vector<FieldElement>(S.factor_count(), FieldElement{0})};
}

inline AlgebraElement algebra_add(const AlgebraSpec &S, const AlgebraElement &a,
                                  const AlgebraElement &b)
{
  AlgebraElement c = a;
  for (std::size_t i = 0; i < S.factor_count(); ++i)
    c.components[i] = S.factor(i).add(a.components[i], b.components[i]);
  return c;
}

inline AlgebraElement algebra_mul(const AlgebraSpec &S, const AlgebraElement &a,
                                  const AlgebraElement &b)
{
  AlgebraElement c = a;
  for (std::size_t i = 0; i < S.factor_count(); ++i)
    c.components[i] = S.factor(i).mul(a.components[i], b.components[i]);
  return c;
}

inline bool is_unit(const AlgebraElement &a)
{
  return std::all_of(a.components.begin(), a.components.end(),
                     [](FieldElement x) { return x.value != 0; });
}

/// Coordinates of a in the fixed basis.
inline std::vector<FieldElement> coordinates(const AlgebraSpec &S, const AlgebraElement &a)
{
  std::vector<FieldElement> out;
  out.reserve(S.rank());
  for (std::size_t i = 0; i < S.factor_count(); ++i) {
    auto c = S.factor(i).coeffs(a.components[i]);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

inline AlgebraElement from_coordinates(const AlgebraSpec &S, std::span<const FieldElement> v)
{
  if (v.size() != S.rank())
    throw InvalidArgument("coordinate vector has wrong length");
  AlgebraElement a = algebra_zero(S);
  for (std::size_t i = 0; i < S.factor_count(); ++i)
    a.components[i] = S.factor(i).from_coeffs(v.subspan(S.offset(i), S.degrees()[i]));
  return a;
}

inline std::vector<AlgebraElement> basis(const AlgebraSpec &S)
{
  std::vector<AlgebraElement> out;
  std::vector<FieldElement> v(S.rank(), FieldElement{0});
  for (unsigned j = 0; j < S.rank(); ++j) {
    v[j] = {1};
    out.push_back(from_coordinates(S, v));
    v[j] = {0};
  }
  return out;
}

/// Matrix of right multiplication by a: column j holds the coordinates of
/// omega_j * a.
inline Matrix regular_rep(const AlgebraSpec &S, const AlgebraElement &a)
{
  Matrix m(S.rank());
  auto b = basis(S);
  for (unsigned j = 0; j < S.rank(); ++j) {
    auto col = coordinates(S, algebra_mul(S, b[j], a));
    for (unsigned i = 0; i < S.rank(); ++i)
      m(i, j) = col[i];
  }
  return m;
}

namespace detail {

// Calls f on every element whose component i ranges over `ranges[i]`, first
// component most significant.
template <typename F>
void for_each_combination(const std::vector<std::vector<FieldElement>> &ranges, F &&f)
{
  AlgebraElement cur{std::vector<FieldElement>(ranges.size())};
  std::vector<std::size_t> idx(ranges.size(), 0);
  for (auto &r : ranges)
    if (r.empty())
      return;
  for (;;) {
    for (std::size_t i = 0; i < ranges.size(); ++i)
      cur.components[i] = ranges[i][idx[i]];
    f(cur);
    std::size_t pos = ranges.size();
    while (pos-- > 0) {
      if (++idx[pos] < ranges[pos].size())
        break;
      idx[pos] = 0;
      if (pos == 0)
        return;
    }
  }
}

} // namespace detail

/// Every element of S in lexicographic component order.
inline std::vector<AlgebraElement> all_elements(const AlgebraSpec &S,
                                                std::uint64_t cap = default_unit_cap)
{
  if (S.size() > cap)
    throw CapExceeded("|S| = " + std::to_string(S.size()) + " exceeds cap");
  std::vector<std::vector<FieldElement>> ranges(S.factor_count());
  for (std::size_t i = 0; i < S.factor_count(); ++i)
    for (std::uint32_t v = 0; v < S.factor(i).order(); ++v)
      ranges[i].push_back({v});
  std::vector<AlgebraElement> out;
  detail::for_each_combination(ranges, [&](const AlgebraElement &a) { out.push_back(a); });
  return out;
}

/// S*, in lexicographic component order.
inline std::vector<AlgebraElement> torus_units(const AlgebraSpec &S,
                                               std::uint64_t cap = default_unit_cap)
{
  if (S.unit_count() > cap)
    throw CapExceeded("|S*| = " + std::to_string(S.unit_count()) + " exceeds cap");
  std::vector<std::vector<FieldElement>> ranges(S.factor_count());
  for (std::size_t i = 0; i < S.factor_count(); ++i)
    for (std::uint32_t v = 1; v < S.factor(i).order(); ++v)
      ranges[i].push_back({v});
  std::vector<AlgebraElement> out;
  detail::for_each_combination(ranges, [&](const AlgebraElement &a) { out.push_back(a); });
  return out;
}

/// Product of the factor norms; equals det(regular_rep(a)).
inline FieldElement algebra_norm(const AlgebraSpec &S, const AlgebraElement &a)
{
  FieldElement r = S.base().one();
  for (std::size_t i = 0; i < S.factor_count(); ++i)
    r = S.base().mul(r, norm_to_base(S.factor(i), a.components[i], S.base()));
  return r;
}

/// A k-algebra automorphism of S: component i is moved to slot
/// factor_permutation[i] after applying the relative Frobenius
/// frobenius_powers[i] times.
struct RingAutomorphism
{
  std::vector<unsigned> factor_permutation;
  std::vector<unsigned> frobenius_powers;

  friend auto operator<=>(const RingAutomorphism &, const RingAutomorphism &) = default;
};

inline AlgebraElement apply(const AlgebraSpec &S, const RingAutomorphism &sigma,
                            const AlgebraElement &a)
{
  AlgebraElement b = a;
  for (std::size_t i = 0; i < S.factor_count(); ++i)
    b.components[sigma.factor_permutation[i]] =
        S.factor(i).relative_frobenius(a.components[i], sigma.frobenius_powers[i]);
  return b;
}

/// prod_d c_d! * d^{c_d}, c_d the number of factors of degree d.
inline std::uint64_t aut_group_order(const AlgebraSpec &S)
{
  std::map<unsigned, unsigned> counts;
  for (unsigned d : S.degrees())
    ++counts[d];
  std::uint64_t r = 1;
  for (auto [d, c] : counts)
    for (unsigned i = 1; i <= c; ++i)
      r *= std::uint64_t{i} * d;
  return r;
}

/// Aut(S/k) as degree-preserving factor permutations times per-factor
/// Frobenius powers, in a fixed order.
inline std::vector<RingAutomorphism> aut_group(const AlgebraSpec &S)
{
  std::size_t t = S.factor_count();
  std::map<unsigned, std::vector<unsigned>> by_degree;
  for (unsigned i = 0; i < t; ++i)
    by_degree[S.degrees()[i]].push_back(i);

  // All permutations of {0..t-1} that only move factors within a degree class.
  std::vector<std::vector<unsigned>> perms{std::vector<unsigned>(t)};
  std::iota(perms[0].begin(), perms[0].end(), 0u);
  for (auto &[d, idx] : by_degree) {
    std::vector<std::vector<unsigned>> next;
    for (auto &base : perms) {
      std::vector<unsigned> images = idx;
      do {
        auto p = base;
        for (std::size_t k = 0; k < idx.size(); ++k)
          p[idx[k]] = images[k];
        next.push_back(std::move(p));
      } while (std::next_permutation(images.begin(), images.end()));
    }
    perms = std::move(next);
  }

  std::vector<RingAutomorphism> out;
  for (auto &perm : perms) {
    std::vector<unsigned> powers(t, 0);
    for (;;) {
      out.push_back({perm, powers});
      std::size_t pos = t;
      while (pos-- > 0) {
        if (++powers[pos] < S.degrees()[pos])
          break;
        powers[pos] = 0;
        if (pos == 0)
          break;
      }
      if (std::all_of(powers.begin(), powers.end(), [](unsigned e) { return e == 0; }))
        break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Matrix of sigma in the fixed basis: column j is sigma(omega_j).
inline Matrix automorphism_matrix(const AlgebraSpec &S, const RingAutomorphism &sigma)
{
  Matrix m(S.rank());
  auto b = basis(S);
  for (unsigned j = 0; j < S.rank(); ++j) {
    auto col = coordinates(S, apply(S, sigma, b[j]));
    for (unsigned i = 0; i < S.rank(); ++i)
      m(i, j) = col[i];
  }
  return m;
}

using UnitSelector = std::function<bool(const AlgebraSpec &, const AlgebraElement &)>;

inline UnitSelector all_units_selector()
{
  return [](const AlgebraSpec &, const AlgebraElement &) { return true; };
}

/// Units whose regular representation has determinant 1.
inline UnitSelector norm_one_selector()
{
  return [](const AlgebraSpec &S, const AlgebraElement &a) {
    return algebra_norm(S, a).value == 1;
  };
}

struct SpanCheck
{
  bool spans = false;
  std::size_t dimension = 0;
  std::size_t selected = 0;
  /// Selected units whose coordinates are linearly independent and span S'.
  std::vector<AlgebraElement> witness;
};

/// k-linear span S' of the selected units; spans is true iff S' = S.
inline SpanCheck additive_span_check(const AlgebraSpec &S, const UnitSelector &selector,
                                     std::uint64_t cap = default_unit_cap)
{
  const FieldTable &k = S.base();
  SpanCheck out;
  // Echelon rows with their pivot columns.
  std::vector<std::pair<std::size_t, std::vector<FieldElement>>> echelon;
  for (auto &u : torus_units(S, cap)) {
    if (!selector(S, u))
      continue;
    ++out.selected;
    if (echelon.size() == S.rank())
      continue;
    auto v = coordinates(S, u);
    for (auto &[piv, row] : echelon) {
      FieldElement f = v[piv];
      if (f.value == 0)
        continue;
      for (std::size_t j = 0; j < v.size(); ++j)
        v[j] = k.sub(v[j], k.mul(f, row[j]));
    }
    auto it = std::find_if(v.begin(), v.end(), [](FieldElement x) { return x.value != 0; });
    if (it == v.end())
      continue;
    std::size_t piv = static_cast<std::size_t>(it - v.begin());
    FieldElement inv = k.inv(*it);
    for (auto &x : v)
      x = k.mul(x, inv);
    for (auto &[p2, row] : echelon) {
      FieldElement f = row[piv];
      if (f.value == 0)
        continue;
      for (std::size_t j = 0; j < row.size(); ++j)
        row[j] = k.sub(row[j], k.mul(f, v[j]));
    }
    echelon.emplace_back(piv, std::move(v));
    out.witness.push_back(u);
  }
  out.dimension = echelon.size();
  out.spans = out.dimension == S.rank();
  return out;
}

/// First element of K (in index order) that has norm 1 over the base and
/// generates K over it.
inline std::optional<FieldElement> primitive_norm_one_search(const FieldTable &K,
                                                             const FieldTable &base)
{
  require_subfield(K, base);
  for (std::uint32_t v = 1; v < K.order(); ++v) {
    FieldElement x{v};
    if (norm_to_base(K, x, base).value == 1 && is_primitive_element(K, x, base))
      return x;
  }
  return std::nullopt;
}

/// #{alpha in base : (x + alpha)^N in base}, with no hypothesis checks.
inline std::size_t count_power_in_base_unchecked(const FieldTable &K, FieldElement x,
                                                 std::uint64_t N, const FieldTable &base)
{
  require_subfield(K, base);
  std::size_t count = 0;
  for (std::uint32_t a = 0; a < base.order(); ++a)
    if (K.in_subfield(K.pow(K.add(x, K.embed({a})), N)))
      ++count;
  return count;
}

class PowerCountPrecondition : public InvalidArgument
{
public:
  enum class Kind { element_in_base, exponent_zero, exponent_not_coprime, base_too_small };

  PowerCountPrecondition(Kind kind, const std::string &what)
      : InvalidArgument(what), kind_(kind)
  {
  }

  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

/// Same count, restricted to the regime where at most N such alpha can exist:
/// x outside base, gcd(N, p) = 1 and |base| > N.
inline std::size_t count_power_in_base(const FieldTable &K, FieldElement x, std::uint64_t N,
                                       const FieldTable &base)
{
  using Kind = PowerCountPrecondition::Kind;
  require_subfield(K, base);
  if (K.in_subfield(x))
    throw PowerCountPrecondition(Kind::element_in_base, "x lies in the base field");
  if (N == 0)
    throw PowerCountPrecondition(Kind::exponent_zero, "exponent must be positive");
  if (std::gcd(N, std::uint64_t{K.characteristic()}) != 1)
    throw PowerCountPrecondition(Kind::exponent_not_coprime,
                                 "exponent shares a factor with the characteristic");
  if (base.order() <= N)
    throw PowerCountPrecondition(Kind::base_too_small, "base field has at most N elements");
  return count_power_in_base_unchecked(K, x, N, base);
}

} // namespace garland

#endif // GARLAND_ETALE_ALGEBRA_HPP
