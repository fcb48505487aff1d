#ifndef GARLAND_FINITE_FIELD_HPP
#define GARLAND_FINITE_FIELD_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace garland {

/// An element of some FieldTable, stored as its index. The index of
/// c_0 + c_1 y + ... + c_{m-1} y^{m-1} is sum c_i s^i where s is the order of
/// the subfield, so subfield elements keep their own index when embedded.
/// Comparing indices gives the total order used for canonical encodings
/// (lexicographic on coefficients, highest power most significant).
struct FieldElement
{
  std::uint32_t value = 0;

  friend auto operator<=>(const FieldElement &, const FieldElement &) = default;
};

inline constexpr std::uint64_t default_field_cap = std::uint64_t{1} << 20;

class FieldTable;
using FieldPtr = std::shared_ptr<const FieldTable>;

namespace detail {

inline bool is_prime(std::uint64_t n)
{
  if (n < 2)
    return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0)
      return false;
  return true;
}

inline std::vector<std::uint64_t> prime_divisors(std::uint64_t n)
{
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0)
        n /= d;
    }
  }
  if (n > 1)
    out.push_back(n);
  return out;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t m)
{
  std::uint64_t r = 1 % m;
  base %= m;
  while (e) {
    if (e & 1)
      r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    e >>= 1;
  }
  return r;
}

} // namespace detail

/// Exact arithmetic in a finite field F_q, built as F_s[y]/(f) over a subfield
/// F_s, or as F_p itself when there is no subfield. Immutable once built.
class FieldTable
{
public:
  /// F_p with defining polynomial x.
  static FieldPtr prime(std::uint32_t p, std::uint64_t cap = default_field_cap)
  {
    if (!detail::is_prime(p))
      throw InvalidArgument("characteristic " + std::to_string(p) + " is not prime");
    if (p > cap)
      throw CapExceeded("field order " + std::to_string(p) + " exceeds cap " +
                        std::to_string(cap));
    auto f = std::shared_ptr<FieldTable>(new FieldTable());
    f->p_ = p;
    f->q_ = p;
    f->degree_ = 1;
    f->absolute_degree_ = 1;
    f->poly_ = {FieldElement{0}, FieldElement{1}};
    f->build_tables();
    return f;
  }

  /// Degree-n extension of `base` by the lexicographically smallest monic
  /// irreducible of degree n (non-leading coefficients, constant term most
  /// significant).
  static FieldPtr extension(FieldPtr base, unsigned n,
                            std::uint64_t cap = default_field_cap)
  {
    if (!base)
      throw InvalidArgument("extension of a null field");
    if (n == 0)
      throw InvalidArgument("extension degree must be at least 1");
    std::uint64_t q = 1;
    for (unsigned i = 0; i < n; ++i) {
      q *= base->order();
      if (q > cap)
        throw CapExceeded("field order " + std::to_string(base->order()) + "^" +
                          std::to_string(n) + " exceeds cap " + std::to_string(cap));
    }
    auto f = std::shared_ptr<FieldTable>(new FieldTable());
    f->p_ = base->characteristic();
    f->q_ = static_cast<std::uint32_t>(q);
    f->degree_ = n;
    f->absolute_degree_ = n * base->absolute_degree();
    f->sub_ = base;
    f->poly_ = minimal_irreducible(*base, n);
    f->build_tables();
    return f;
  }

  std::uint32_t characteristic() const noexcept { return p_; }
  std::uint32_t order() const noexcept { return q_; }
  /// Degree over the subfield (1 for a prime field).
  unsigned degree() const noexcept { return degree_; }
  /// Degree over F_p.
  unsigned absolute_degree() const noexcept { return absolute_degree_; }
  bool is_prime_field() const noexcept { return !sub_; }
  /// The field this one was built over; null for F_p.
  const FieldPtr &subfield() const noexcept { return sub_; }
  std::uint32_t subfield_order() const noexcept { return sub_ ? sub_->order() : p_; }

  /// Monic, constant term first; coefficients live in the subfield (in F_p for
  /// a prime field).
  const std::vector<FieldElement> &defining_poly() const noexcept { return poly_; }

  FieldElement zero() const noexcept { return {0}; }
  FieldElement one() const noexcept { return {1}; }

  bool contains(FieldElement x) const noexcept { return x.value < q_; }

  FieldElement add(FieldElement a, FieldElement b) const
  {
    if (!sub_)
      return {(a.value + b.value) % p_};
    if (!add_.empty())
      return {add_[a.value * q_ + b.value]};
    return add_slow(a, b);
  }

  FieldElement neg(FieldElement a) const
  {
    if (!sub_)
      return {(p_ - a.value) % p_};
    return {neg_[a.value]};
  }

  FieldElement sub(FieldElement a, FieldElement b) const { return add(a, neg(b)); }

  FieldElement mul(FieldElement a, FieldElement b) const
  {
    if (a.value == 0 || b.value == 0)
      return {0};
    std::uint32_t s = log_[a.value] + log_[b.value];
    if (s >= q_ - 1)
      s -= q_ - 1;
    return {exp_[s]};
  }

  FieldElement inv(FieldElement a) const
  {
    if (a.value == 0)
      throw InvalidArgument("inverse of zero");
    std::uint32_t l = log_[a.value];
    return {exp_[l == 0 ? 0 : q_ - 1 - l]};
  }

  FieldElement div(FieldElement a, FieldElement b) const { return mul(a, inv(b)); }

  FieldElement pow(FieldElement a, std::uint64_t e) const
  {
    if (e == 0)
      return one();
    if (a.value == 0)
      return zero();
    std::uint64_t l = detail::mulmod(log_[a.value], e % (q_ - 1), q_ - 1);
    return {exp_[l]};
  }

  /// x^(p^i).
  FieldElement frobenius(FieldElement x, std::uint64_t i) const
  {
    if (x.value == 0 || q_ == 2)
      return x;
    return pow(x, detail::powmod(p_, i, q_ - 1) + (q_ - 1));
  }

  /// x^(s^i), s the subfield order; generates Gal(this / subfield).
  FieldElement relative_frobenius(FieldElement x, std::uint64_t i) const
  {
    if (x.value == 0 || q_ == 2)
      return x;
    return pow(x, detail::powmod(subfield_order(), i, q_ - 1) + (q_ - 1));
  }

  /// A fixed generator of the multiplicative group.
  FieldElement generator() const noexcept { return {exp_.size() > 1 ? exp_[1] : 1}; }

  std::uint32_t log(FieldElement x) const
  {
    if (x.value == 0)
      throw InvalidArgument("log of zero");
    return log_[x.value];
  }

  FieldElement exp(std::uint64_t k) const { return {exp_[k % (q_ - 1)]}; }

  /// Coordinates over the subfield in the power basis 1, y, ..., y^{m-1}.
  std::vector<FieldElement> coeffs(FieldElement x) const
  {
    std::vector<FieldElement> c(degree_);
    std::uint32_t s = subfield_order(), v = x.value;
    if (!sub_) {
      c[0] = x;
      return c;
    }
    for (unsigned i = 0; i < degree_; ++i) {
      c[i] = {v % s};
      v /= s;
    }
    return c;
  }

  FieldElement from_coeffs(std::span<const FieldElement> c) const
  {
    if (c.size() != degree_)
      throw InvalidArgument("coefficient vector has wrong length");
    if (!sub_)
      return {c[0].value % p_};
    std::uint32_t v = 0, s = sub_->order();
    for (std::size_t i = degree_; i-- > 0;)
      v = v * s + c[i].value;
    return {v};
  }

  /// Subfield element viewed in this field.
  FieldElement embed(FieldElement c) const noexcept { return c; }

  bool in_subfield(FieldElement x) const noexcept { return x.value < subfield_order(); }

  /// Structural equality: same characteristic, same tower, same polynomials.
  friend bool same_field(const FieldTable &a, const FieldTable &b)
  {
    if (&a == &b)
      return true;
    if (a.p_ != b.p_ || a.q_ != b.q_ || a.poly_ != b.poly_ || bool(a.sub_) != bool(b.sub_))
      return false;
    return !a.sub_ || same_field(*a.sub_, *b.sub_);
  }

private:
  FieldTable() = default;

  FieldElement add_slow(FieldElement a, FieldElement b) const
  {
    const FieldTable &s = *sub_;
    std::uint32_t sq = s.order(), va = a.value, vb = b.value, out = 0, scale = 1;
    for (unsigned i = 0; i < degree_; ++i) {
      out += s.add({va % sq}, {vb % sq}).value * scale;
      va /= sq;
      vb /= sq;
      scale *= sq;
    }
    return {out};
  }

  // Product via the polynomial representation; only used while building the
  // log tables.
  FieldElement mul_poly(FieldElement a, FieldElement b) const
  {
    const FieldTable &s = *sub_;
    auto ca = coeffs(a), cb = coeffs(b);
    std::vector<FieldElement> prod(2 * degree_ - 1, s.zero());
    for (unsigned i = 0; i < degree_; ++i)
      for (unsigned j = 0; j < degree_; ++j)
        prod[i + j] = s.add(prod[i + j], s.mul(ca[i], cb[j]));
    for (std::size_t d = prod.size(); d-- > degree_;) {
      FieldElement c = prod[d];
      if (c.value == 0)
        continue;
      for (unsigned i = 0; i < degree_; ++i)
        prod[d - degree_ + i] = s.sub(prod[d - degree_ + i], s.mul(c, poly_[i]));
    }
    prod.resize(degree_);
    return from_coeffs(prod);
  }

  FieldElement pow_poly(FieldElement a, std::uint64_t e) const
  {
    FieldElement r = one();
    while (e) {
      if (e & 1)
        r = mul_poly(r, a);
      a = mul_poly(a, a);
      e >>= 1;
    }
    return r;
  }

  void build_tables()
  {
    std::uint32_t q = q_;
    if (sub_) {
      neg_.resize(q);
      for (std::uint32_t v = 0; v < q; ++v) {
        auto c = coeffs({v});
        for (auto &x : c)
          x = sub_->neg(x);
        neg_[v] = from_coeffs(c).value;
      }
      if (q <= 256) {
        add_.resize(std::size_t{q} * q);
        for (std::uint32_t a = 0; a < q; ++a)
          for (std::uint32_t b = 0; b < q; ++b)
            add_[a * q + b] = add_slow({a}, {b}).value;
      }
    }
    exp_.assign(q - 1, 0);
    log_.assign(q, 0);
    if (q == 2) {
      exp_[0] = 1;
      return;
    }
    auto primes = detail::prime_divisors(q - 1);
    auto mul_any = [&](FieldElement a, FieldElement b) {
      return sub_ ? mul_poly(a, b) : FieldElement{static_cast<std::uint32_t>(
                                         std::uint64_t{a.value} * b.value % p_)};
    };
    auto pow_any = [&](FieldElement a, std::uint64_t e) {
      if (sub_)
        return pow_poly(a, e);
      return FieldElement{static_cast<std::uint32_t>(detail::powmod(a.value, e, p_))};
    };
    FieldElement g{0};
    for (std::uint32_t v = 2; v < q; ++v) {
      bool ok = std::all_of(primes.begin(), primes.end(), [&](std::uint64_t r) {
        return pow_any({v}, (q - 1) / r).value != 1;
      });
      if (ok) {
        g = {v};
        break;
      }
    }
    FieldElement cur = one();
    for (std::uint32_t k = 0; k < q - 1; ++k) {
      exp_[k] = cur.value;
      log_[cur.value] = k;
      cur = mul_any(cur, g);
    }
  }

  // --- polynomial helpers over a field, used for irreducibility testing ---
  using Poly = std::vector<FieldElement>;

  static void trim(Poly &a)
  {
    while (!a.empty() && a.back().value == 0)
      a.pop_back();
  }

  static Poly poly_mod(Poly a, const Poly &f, const FieldTable &F)
  {
    trim(a);
    Poly g = f;
    trim(g);
    FieldElement lead_inv = F.inv(g.back());
    while (a.size() >= g.size()) {
      FieldElement c = F.mul(a.back(), lead_inv);
      std::size_t shift = a.size() - g.size();
      for (std::size_t i = 0; i < g.size(); ++i)
        a[shift + i] = F.sub(a[shift + i], F.mul(c, g[i]));
      trim(a);
    }
    return a;
  }

  static Poly poly_mulmod(const Poly &a, const Poly &b, const Poly &f, const FieldTable &F)
  {
    if (a.empty() || b.empty())
      return {};
    Poly prod(a.size() + b.size() - 1, F.zero());
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        prod[i + j] = F.add(prod[i + j], F.mul(a[i], b[j]));
    return poly_mod(std::move(prod), f, F);
  }

  static Poly poly_powmod(Poly a, std::uint64_t e, const Poly &f, const FieldTable &F)
  {
    Poly r{F.one()};
    a = poly_mod(std::move(a), f, F);
    while (e) {
      if (e & 1)
        r = poly_mulmod(r, a, f, F);
      a = poly_mulmod(a, a, f, F);
      e >>= 1;
    }
    return r;
  }

  static Poly poly_gcd(Poly a, Poly b, const FieldTable &F)
  {
    trim(a);
    trim(b);
    while (!b.empty()) {
      Poly r = poly_mod(a, b, F);
      a = std::move(b);
      b = std::move(r);
    }
    return a;
  }

  // Rabin's test: f of degree n is irreducible over F_s iff y^(s^n) = y mod f
  // and gcd(y^(s^(n/r)) - y, f) = 1 for each prime r | n.
  static bool is_irreducible(const Poly &f, const FieldTable &F)
  {
    unsigned n = static_cast<unsigned>(f.size() - 1);
    if (n == 1)
      return true;
    if (f[0].value == 0)
      return false;
    std::uint64_t s = F.order();
    auto frob_iter = [&](unsigned k) {
      Poly r{F.zero(), F.one()};
      for (unsigned i = 0; i < k; ++i)
        r = poly_powmod(r, s, f, F);
      return r;
    };
    auto minus_y = [&](Poly r) {
      r.resize(std::max<std::size_t>(r.size(), 2), F.zero());
      r[1] = F.sub(r[1], F.one());
      trim(r);
      return r;
    };
    if (!minus_y(frob_iter(n)).empty())
      return false;
    for (auto r : detail::prime_divisors(n)) {
      Poly g = poly_gcd(minus_y(frob_iter(n / static_cast<unsigned>(r))), f, F);
      if (g.size() != 1)
        return false;
    }
    return true;
  }

  static Poly minimal_irreducible(const FieldTable &F, unsigned n)
  {
    std::uint32_t s = F.order();
    std::vector<std::uint32_t> digits(n, 0); // digits[0] is the constant term
    for (;;) {
      Poly f(n + 1);
      for (unsigned i = 0; i < n; ++i)
        f[i] = {digits[i]};
      f[n] = F.one();
      if (is_irreducible(f, F))
        return f;
      // Advance with the constant term most significant.
      std::size_t pos = n;
      while (pos-- > 0) {
        if (++digits[pos] < s)
          break;
        digits[pos] = 0;
        if (pos == 0)
          throw Error("no irreducible polynomial found");
      }
    }
  }

  std::uint32_t p_ = 0, q_ = 0;
  unsigned degree_ = 0, absolute_degree_ = 0;
  FieldPtr sub_;
  Poly poly_;
  std::vector<std::uint32_t> exp_, log_, neg_, add_;
};

/// F_{p^m} built in a single step over F_p.
inline FieldPtr construct_field(std::uint32_t p, unsigned m,
                                std::uint64_t cap = default_field_cap)
{
  auto prime = FieldTable::prime(p, cap);
  if (m == 1)
    return prime;
  return FieldTable::extension(prime, m, cap);
}

inline FieldElement frobenius(const FieldTable &F, FieldElement x, std::uint64_t i)
{
  return F.frobenius(x, i);
}

inline void require_subfield(const FieldTable &K, const FieldTable &base)
{
  if (!K.subfield() || !same_field(*K.subfield(), base)) {
    // A prime field counts as a degree-1 extension of itself.
    if (!(K.is_prime_field() && same_field(K, base)))
      throw FieldMismatch("field was not constructed as an extension of the given base");
  }
}

/// N_{K/base}(x) = prod_{i<n} x^(q^i), returned as an element of base.
inline FieldElement norm_to_base(const FieldTable &K, FieldElement x, const FieldTable &base)
{
  require_subfield(K, base);
  if (K.is_prime_field() || K.degree() == 1)
    return x;
  if (x.value == 0)
    return base.zero();
  std::uint64_t q = base.order(), qn = K.order();
  FieldElement r = K.pow(x, (qn - 1) / (q - 1));
  if (!K.in_subfield(r))
    throw Error("norm left the base field");
  return r;
}

/// True iff x generates K over base, i.e. its n conjugates are distinct.
inline bool is_primitive_element(const FieldTable &K, FieldElement x, const FieldTable &base)
{
  require_subfield(K, base);
  unsigned n = K.is_prime_field() ? 1 : K.degree();
  std::vector<FieldElement> conj;
  conj.reserve(n);
  for (unsigned i = 0; i < n; ++i)
    conj.push_back(K.relative_frobenius(x, i));
  std::sort(conj.begin(), conj.end());
  return std::adjacent_find(conj.begin(), conj.end()) == conj.end();
}

} // namespace garland

#endif // GARLAND_FINITE_FIELD_HPP
