#ifndef GARLAND_MATRIX_GROUP_HPP
#define GARLAND_MATRIX_GROUP_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "etale_algebra.hpp"
#include "finite_field.hpp"
#include "matrix.hpp"

namespace garland {

inline constexpr std::uint64_t default_group_cap = 20000;

enum class AmbientKind { gl, sl };

inline const char *to_string(AmbientKind k) { return k == AmbientKind::gl ? "GL" : "SL"; }

inline std::uint64_t gl_order(unsigned n, std::uint64_t q)
{
  std::uint64_t qn = 1, r = 1;
  for (unsigned i = 0; i < n; ++i)
    qn *= q;
  std::uint64_t qi = 1;
  for (unsigned i = 0; i < n; ++i) {
    r *= qn - qi;
    qi *= q;
  }
  return r;
}

inline std::uint64_t ambient_order(AmbientKind kind, unsigned n, std::uint64_t q)
{
  std::uint64_t g = gl_order(n, q);
  return kind == AmbientKind::gl ? g : g / (q - 1);
}

class AmbientGroup;
using AmbientPtr = std::shared_ptr<const AmbientGroup>;

/// GL(n, q) or SL(n, q) with every element enumerated. Elements are indices
/// 0..order-1 sorted by canonical encoding: entries row-major, each entry a
/// base-q digit, first entry most significant.
class AmbientGroup
{
public:
  using Elem = std::uint32_t;

  static AmbientPtr make(AmbientKind kind, unsigned n, FieldPtr field,
                         std::uint64_t cap = default_group_cap)
  {
    if (!field)
      throw InvalidArgument("ambient group needs a field");
    if (n == 0)
      throw InvalidArgument("matrix size must be at least 1");
    std::uint64_t q = field->order();
    std::uint64_t ord = ambient_order(kind, n, q);
    if (ord > cap)
      throw CapExceeded(std::string(to_string(kind)) + "(" + std::to_string(n) + "," +
                        std::to_string(q) + ") has order " + std::to_string(ord) +
                        ", above the enumeration cap " + std::to_string(cap));
    std::uint64_t codes = 1;
    for (unsigned i = 0; i < n * n; ++i) {
      codes *= q;
      if (codes > (std::uint64_t{1} << 25))
        throw CapExceeded("matrix code space too large to index densely");
    }
    auto g = std::shared_ptr<AmbientGroup>(new AmbientGroup());
    g->kind_ = kind;
    g->n_ = n;
    g->field_ = std::move(field);
    g->build(codes);
    if (g->order() != ord)
      throw Error("ambient enumeration disagrees with the order formula");
    return g;
  }

  AmbientKind kind() const noexcept { return kind_; }
  unsigned n() const noexcept { return n_; }
  const FieldTable &field() const noexcept { return *field_; }
  const FieldPtr &field_ptr() const noexcept { return field_; }
  std::size_t order() const noexcept { return codes_.size(); }
  std::string name() const
  {
    return std::string(to_string(kind_)) + "(" + std::to_string(n_) + "," +
           std::to_string(field_->order()) + ")";
  }

  Elem identity() const noexcept { return identity_; }

  Elem mul(Elem a, Elem b) const
  {
    const std::uint16_t *x = &entries_[std::size_t{a} * nn_];
    const std::uint16_t *y = &entries_[std::size_t{b} * nn_];
    std::uint64_t code = 0;
    for (unsigned i = 0; i < n_; ++i)
      for (unsigned j = 0; j < n_; ++j) {
        std::uint32_t s = 0;
        for (unsigned k = 0; k < n_; ++k)
          s = add_tab_[s * q_ + mul_tab_[x[i * n_ + k] * q_ + y[k * n_ + j]]];
        code = code * q_ + s;
      }
    return static_cast<Elem>(index_[code]);
  }

  Elem inv(Elem a) const { return inverse_[a]; }

  Elem conjugate(Elem g, Elem x) const { return mul(mul(g, x), inverse_[g]); }

  std::uint64_t code(Elem a) const { return codes_[a]; }

  Matrix matrix(Elem a) const
  {
    Matrix m(n_);
    for (unsigned i = 0; i < nn_; ++i)
      m.entries[i] = {entries_[std::size_t{a} * nn_ + i]};
    return m;
  }

  std::optional<Elem> find(const Matrix &m) const
  {
    if (m.n != n_)
      return std::nullopt;
    std::uint64_t code = 0;
    for (auto e : m.entries) {
      if (e.value >= q_)
        return std::nullopt;
      code = code * q_ + e.value;
    }
    std::int32_t i = index_[code];
    if (i < 0)
      return std::nullopt;
    return static_cast<Elem>(i);
  }

  std::optional<Elem> find_code(std::uint64_t code) const
  {
    if (code >= index_.size() || index_[code] < 0)
      return std::nullopt;
    return static_cast<Elem>(index_[code]);
  }

  FieldElement det(Elem a) const { return determinant(*field_, matrix(a)); }

private:
  AmbientGroup() = default;

  void build(std::uint64_t code_count)
  {
    const FieldTable &F = *field_;
    q_ = F.order();
    nn_ = n_ * n_;
    add_tab_.resize(std::size_t{q_} * q_);
    mul_tab_.resize(std::size_t{q_} * q_);
    for (std::uint32_t a = 0; a < q_; ++a)
      for (std::uint32_t b = 0; b < q_; ++b) {
        add_tab_[a * q_ + b] = static_cast<std::uint16_t>(F.add({a}, {b}).value);
        mul_tab_[a * q_ + b] = static_cast<std::uint16_t>(F.mul({a}, {b}).value);
      }
    index_.assign(code_count, -1);
    Matrix m(n_);
    for (std::uint64_t code = 0; code < code_count; ++code) {
      std::uint64_t c = code;
      for (unsigned i = nn_; i-- > 0;) {
        m.entries[i] = {static_cast<std::uint32_t>(c % q_)};
        c /= q_;
      }
      FieldElement d = determinant(F, m);
      bool member = kind_ == AmbientKind::gl ? d.value != 0 : d.value == 1;
      if (!member)
        continue;
      index_[code] = static_cast<std::int32_t>(codes_.size());
      codes_.push_back(code);
      for (auto e : m.entries)
        entries_.push_back(static_cast<std::uint16_t>(e.value));
    }
    identity_ = *find(Matrix::identity(n_));
    inverse_.resize(codes_.size());
    for (Elem a = 0; a < codes_.size(); ++a)
      inverse_[a] = *find(*inverse(F, matrix(a)));
  }

  AmbientKind kind_ = AmbientKind::gl;
  unsigned n_ = 0, nn_ = 0;
  std::uint32_t q_ = 0;
  FieldPtr field_;
  std::vector<std::uint16_t> add_tab_, mul_tab_, entries_;
  std::vector<std::int32_t> index_;
  std::vector<std::uint64_t> codes_;
  std::vector<Elem> inverse_;
  Elem identity_ = 0;
};

/// A subgroup of an enumerated ambient group, stored as a membership bitset.
/// The id is an FNV-1a hash of the sorted canonical element encodings, so it
/// does not depend on how the subgroup was built.
class Subgroup
{
public:
  using Elem = AmbientGroup::Elem;

  const AmbientGroup &ambient() const noexcept { return *ambient_; }
  const AmbientPtr &ambient_ptr() const noexcept { return ambient_; }
  std::size_t order() const noexcept { return order_; }
  std::uint64_t id() const noexcept { return id_; }
  const std::vector<Elem> &generators() const noexcept { return gens_; }
  const std::vector<std::uint64_t> &bits() const noexcept { return bits_; }

  bool contains(Elem e) const noexcept { return (bits_[e >> 6] >> (e & 63)) & 1u; }

  std::vector<Elem> elements() const
  {
    std::vector<Elem> out;
    out.reserve(order_);
    for (std::size_t w = 0; w < bits_.size(); ++w) {
      std::uint64_t word = bits_[w];
      while (word) {
        out.push_back(static_cast<Elem>(w * 64 + std::countr_zero(word)));
        word &= word - 1;
      }
    }
    return out;
  }

  bool is_subset_of(const Subgroup &other) const
  {
    if (ambient_ != other.ambient_ || order_ > other.order_)
      return false;
    for (std::size_t w = 0; w < bits_.size(); ++w)
      if (bits_[w] & ~other.bits_[w])
        return false;
    return true;
  }

  bool is_abelian() const
  {
    for (std::size_t i = 0; i < gens_.size(); ++i)
      for (std::size_t j = i + 1; j < gens_.size(); ++j)
        if (ambient_->mul(gens_[i], gens_[j]) != ambient_->mul(gens_[j], gens_[i]))
          return false;
    return true;
  }

  friend bool operator==(const Subgroup &a, const Subgroup &b)
  {
    return a.ambient_ == b.ambient_ && a.order_ == b.order_ && a.id_ == b.id_ &&
           a.bits_ == b.bits_;
  }

  /// Ordering by (order, id, bits) used for reproducible listings.
  friend inline bool canonical_less(const Subgroup &a, const Subgroup &b)
  {
    if (a.order_ != b.order_)
      return a.order_ < b.order_;
    if (a.id_ != b.id_)
      return a.id_ < b.id_;
    return a.bits_ < b.bits_;
  }

  static Subgroup trivial(AmbientPtr ambient)
  {
    Subgroup s(std::move(ambient));
    s.set(s.ambient_->identity());
    s.order_ = 1;
    s.finish();
    return s;
  }

  /// <h, g> by Dimino's coset extension. Throws CapExceeded if the closure
  /// grows beyond `cap` elements.
  friend Subgroup extend(const Subgroup &h, Elem g, std::size_t cap);

  /// Builds a subgroup from a membership set that is already known to be
  /// closed; generators are chosen greedily in canonical order.
  static Subgroup from_closed_bits(AmbientPtr ambient, std::vector<std::uint64_t> bits);

private:
  explicit Subgroup(AmbientPtr ambient)
      : ambient_(std::move(ambient)), bits_((ambient_->order() + 63) / 64, 0)
  {
  }

  void set(Elem e) noexcept { bits_[e >> 6] |= std::uint64_t{1} << (e & 63); }

  void finish()
  {
    std::uint64_t h = 1469598103934665603ull;
    for (Elem e : elements()) {
      std::uint64_t c = ambient_->code(e);
      for (int b = 0; b < 8; ++b) {
        h ^= (c >> (8 * b)) & 0xff;
        h *= 1099511628211ull;
      }
    }
    id_ = h;
  }

  AmbientPtr ambient_;
  std::vector<std::uint64_t> bits_;
  std::size_t order_ = 0;
  std::vector<Elem> gens_;
  std::uint64_t id_ = 0;
};

bool canonical_less(const Subgroup &a, const Subgroup &b);

inline Subgroup extend(const Subgroup &h, Subgroup::Elem g,
                       std::size_t cap = static_cast<std::size_t>(-1))
{
  if (h.contains(g))
    return h;
  const AmbientGroup &G = *h.ambient_;
  Subgroup k = h;
  k.gens_.push_back(g);
  auto base = h.elements();
  std::vector<Subgroup::Elem> reps{G.identity()};
  for (std::size_t r = 0; r < reps.size(); ++r) {
    for (Subgroup::Elem s : k.gens_) {
      Subgroup::Elem x = G.mul(reps[r], s);
      if (k.contains(x))
        continue;
      for (Subgroup::Elem b : base)
        k.set(G.mul(b, x));
      k.order_ += base.size();
      if (k.order_ > cap)
        throw CapExceeded("subgroup closure exceeded cap " + std::to_string(cap), k.order_);
      reps.push_back(x);
    }
  }
  k.finish();
  return k;
}

inline Subgroup Subgroup::from_closed_bits(AmbientPtr ambient, std::vector<std::uint64_t> bits)
{
  Subgroup target(ambient);
  target.bits_ = std::move(bits);
  std::size_t order = 0;
  for (auto w : target.bits_)
    order += static_cast<std::size_t>(std::popcount(w));
  Subgroup cur = trivial(ambient);
  for (Elem e : target.elements()) {
    if (cur.order_ == order)
      break;
    if (!cur.contains(e))
      cur = extend(cur, e);
  }
  if (cur.bits_ != target.bits_)
    throw Error("element set is not closed under multiplication");
  return cur;
}

/// Smallest subgroup containing gens.
inline Subgroup generate(const AmbientPtr &ambient, const std::vector<Subgroup::Elem> &gens,
                         std::size_t cap = static_cast<std::size_t>(-1))
{
  Subgroup s = Subgroup::trivial(ambient);
  for (auto g : gens) {
    if (g >= ambient->order())
      throw InvalidArgument("generator is not an element of " + ambient->name());
    s = extend(s, g, cap);
  }
  return s;
}

inline Subgroup generate(const AmbientPtr &ambient, const std::vector<Matrix> &gens,
                         std::size_t cap = static_cast<std::size_t>(-1))
{
  std::vector<Subgroup::Elem> idx;
  for (auto &m : gens) {
    auto e = ambient->find(m);
    if (!e)
      throw InvalidArgument("generator matrix is not in " + ambient->name());
    idx.push_back(*e);
  }
  return generate(ambient, idx, cap);
}

inline Subgroup whole_group(const AmbientPtr &ambient)
{
  std::vector<std::uint64_t> bits((ambient->order() + 63) / 64, ~std::uint64_t{0});
  if (ambient->order() % 64)
    bits.back() = (std::uint64_t{1} << (ambient->order() % 64)) - 1;
  return Subgroup::from_closed_bits(ambient, std::move(bits));
}

/// Checks an arbitrary element list for closure; returns the subgroup if the
/// list is a group.
inline std::optional<Subgroup> subgroup_from_elements(const AmbientPtr &ambient,
                                                      const std::vector<Subgroup::Elem> &elems)
{
  std::vector<std::uint64_t> bits((ambient->order() + 63) / 64, 0);
  for (auto e : elems)
    bits[e >> 6] |= std::uint64_t{1} << (e & 63);
  try {
    return Subgroup::from_closed_bits(ambient, std::move(bits));
  } catch (const Error &) {
    return std::nullopt;
  }
}

inline Subgroup intersect(const Subgroup &a, const Subgroup &b)
{
  if (a.ambient_ptr() != b.ambient_ptr())
    throw InvalidArgument("intersection of subgroups of different ambient groups");
  auto bits = a.bits();
  for (std::size_t w = 0; w < bits.size(); ++w)
    bits[w] &= b.bits()[w];
  return Subgroup::from_closed_bits(a.ambient_ptr(), std::move(bits));
}

/// The members of h that also lie in `target` (e.g. H cap SL for H in GL),
/// as a subgroup of `target`.
inline Subgroup restrict_to(const Subgroup &h, const AmbientPtr &target)
{
  if (!same_field(h.ambient().field(), target->field()) || h.ambient().n() != target->n())
    throw FieldMismatch("restriction between incompatible ambient groups");
  std::vector<std::uint64_t> bits((target->order() + 63) / 64, 0);
  for (auto e : h.elements())
    if (auto t = target->find_code(h.ambient().code(e)))
      bits[*t >> 6] |= std::uint64_t{1} << (*t & 63);
  return Subgroup::from_closed_bits(target, std::move(bits));
}

/// g h g^-1.
inline Subgroup conjugate(const Subgroup &h, Subgroup::Elem g)
{
  const AmbientGroup &G = h.ambient();
  std::vector<std::uint64_t> bits(h.bits().size(), 0);
  for (auto e : h.elements()) {
    auto c = G.conjugate(g, e);
    bits[c >> 6] |= std::uint64_t{1} << (c & 63);
  }
  return Subgroup::from_closed_bits(h.ambient_ptr(), std::move(bits));
}

/// g normalizes h iff it conjugates every generator of h into h.
inline bool normalizes(const Subgroup &h, Subgroup::Elem g)
{
  const AmbientGroup &G = h.ambient();
  return std::all_of(h.generators().begin(), h.generators().end(),
                     [&](auto x) { return h.contains(G.conjugate(g, x)); });
}

/// h is normal in k. Requires h to be a subgroup of k.
inline bool is_normal_in(const Subgroup &h, const Subgroup &k)
{
  if (!h.is_subset_of(k))
    throw InvalidArgument("is_normal_in: h is not contained in k");
  return std::all_of(k.generators().begin(), k.generators().end(),
                     [&](auto g) { return normalizes(h, g); });
}

/// N_G(h) by scanning every element of the ambient group.
inline Subgroup normalizer_brute(const Subgroup &h)
{
  const AmbientGroup &G = h.ambient();
  std::vector<std::uint64_t> bits(h.bits().size(), 0);
  for (Subgroup::Elem g = 0; g < G.order(); ++g)
    if (normalizes(h, g))
      bits[g >> 6] |= std::uint64_t{1} << (g & 63);
  return Subgroup::from_closed_bits(h.ambient_ptr(), std::move(bits));
}

/// C_G(h) by scanning every element of the ambient group.
inline Subgroup centralizer_brute(const Subgroup &h)
{
  const AmbientGroup &G = h.ambient();
  std::vector<std::uint64_t> bits(h.bits().size(), 0);
  for (Subgroup::Elem g = 0; g < G.order(); ++g) {
    bool ok = std::all_of(h.generators().begin(), h.generators().end(),
                          [&](auto x) { return G.mul(g, x) == G.mul(x, g); });
    if (ok)
      bits[g >> 6] |= std::uint64_t{1} << (g & 63);
  }
  return Subgroup::from_closed_bits(h.ambient_ptr(), std::move(bits));
}

/// No element outside the abelian group h commutes with all of h.
inline bool is_maximal_abelian(const Subgroup &h)
{
  if (!h.is_abelian())
    throw InvalidArgument("is_maximal_abelian: subgroup is not abelian");
  return centralizer_brute(h) == h;
}

inline void require_compatible(const AlgebraSpec &S, const AmbientGroup &G)
{
  if (S.rank() != G.n())
    throw InvalidArgument("algebra rank " + std::to_string(S.rank()) +
                          " does not match matrix size " + std::to_string(G.n()));
  if (!same_field(S.base(), G.field()))
    throw FieldMismatch("algebra base field differs from the ambient field");
}

/// t(S*) for GL, its norm-one part for SL.
inline Subgroup torus_subgroup(const AlgebraSpec &S, const AmbientPtr &G)
{
  require_compatible(S, *G);
  std::vector<std::uint64_t> bits((G->order() + 63) / 64, 0);
  for (auto &u : torus_units(S)) {
    if (auto e = G->find(regular_rep(S, u)))
      bits[*e >> 6] |= std::uint64_t{1} << (*e & 63);
  }
  return Subgroup::from_closed_bits(G, std::move(bits));
}

struct FormulaNormalizer
{
  /// {t(a) P_sigma : a in S*, sigma in Aut(S/k)} intersected with the ambient
  /// group, sorted.
  std::vector<Subgroup::Elem> elements;
  bool closed = false;
  std::optional<Subgroup> group;
};

/// (T x| Aut(S/k)) cap G'. A non-closed candidate set is reported, not thrown.
inline FormulaNormalizer normalizer_formula(const AlgebraSpec &S, const AmbientPtr &G)
{
  require_compatible(S, *G);
  const FieldTable &k = S.base();
  std::vector<Matrix> perms;
  for (auto &sigma : aut_group(S))
    perms.push_back(automorphism_matrix(S, sigma));
  FormulaNormalizer out;
  for (auto &u : torus_units(S)) {
    Matrix t = regular_rep(S, u);
    for (auto &p : perms)
      if (auto e = G->find(multiply(k, t, p)))
        out.elements.push_back(*e);
  }
  std::sort(out.elements.begin(), out.elements.end());
  out.elements.erase(std::unique(out.elements.begin(), out.elements.end()),
                     out.elements.end());
  out.group = subgroup_from_elements(G, out.elements);
  out.closed = out.group.has_value();
  return out;
}

} // namespace garland

#endif // GARLAND_MATRIX_GROUP_HPP
