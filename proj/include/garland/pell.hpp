#ifndef GARLAND_PELL_HPP
#define GARLAND_PELL_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"

namespace garland::pell {

using BigInt = boost::multiprecision::cpp_int;

inline std::int64_t isqrt(std::int64_t n)
{
  if (n < 0)
    throw InvalidArgument("isqrt of a negative number");
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n)
    --r;
  while ((r + 1) * (r + 1) <= n)
    ++r;
  return r;
}

inline bool is_square(std::int64_t n) { return n >= 0 && isqrt(n) * isqrt(n) == n; }

inline bool is_squarefree(std::int64_t d)
{
  if (d == 0)
    return false;
  std::int64_t n = d < 0 ? -d : d;
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (n % (p * p) == 0)
      return false;
  return true;
}

/// d with d squarefree and d != 0, 1.
class QuadraticCase
{
public:
  explicit QuadraticCase(std::int64_t d) : d_(d)
  {
    if (d == 0 || d == 1)
      throw InvalidArgument("d must differ from 0 and 1");
    if (!is_squarefree(d))
      throw InvalidArgument("d = " + std::to_string(d) + " is not squarefree");
  }

  std::int64_t d() const noexcept { return d_; }

private:
  std::int64_t d_;
};

/// sqrt(d) = [a0; period, period, ...].
struct ContinuedFraction
{
  std::int64_t a0 = 0;
  std::vector<std::int64_t> period;
};

/// Runs the integer recurrence on (P, Q): P' = aQ - P, Q' = (d - P'^2)/Q,
/// a' = floor((a0 + P')/Q'), stopping when the state after the first step
/// repeats.
inline ContinuedFraction continued_fraction_sqrt(std::int64_t d)
{
  if (d <= 1 || is_square(d))
    throw InvalidArgument("continued fraction needs a non-square d > 1");
  ContinuedFraction cf;
  cf.a0 = isqrt(d);
  std::int64_t P = 0, Q = 1, a = cf.a0;
  std::int64_t P1 = 0, Q1 = 0;
  for (;;) {
    P = a * Q - P;
    Q = (d - P * P) / Q;
    a = (cf.a0 + P) / Q;
    if (cf.period.empty()) {
      P1 = P;
      Q1 = Q;
    } else if (P == P1 && Q == Q1) {
      break;
    }
    cf.period.push_back(a);
  }
  return cf;
}

struct PellSolution
{
  BigInt x;
  BigInt y;

  friend bool operator==(const PellSolution &, const PellSolution &) = default;
};

namespace detail {

// Convergent p_k / q_k at the end of the first period.
inline PellSolution last_convergent(const ContinuedFraction &cf)
{
  BigInt p_prev = 1, p = cf.a0, q_prev = 0, q = 1;
  for (std::size_t k = 0; k + 1 < cf.period.size(); ++k) {
    BigInt a = cf.period[k];
    BigInt pn = a * p + p_prev, qn = a * q + q_prev;
    p_prev = p;
    p = pn;
    q_prev = q;
    q = qn;
  }
  return {p, q};
}

} // namespace detail

/// Negative Pell for any non-square d > 1, without the squarefree check.
inline std::optional<PellSolution> negative_pell_unchecked(std::int64_t d)
{
  auto cf = continued_fraction_sqrt(d);
  if (cf.period.size() % 2 == 0)
    return std::nullopt;
  PellSolution s = detail::last_convergent(cf);
  if (s.x * s.x - BigInt(d) * s.y * s.y != -1)
    throw Error("continued-fraction solution failed substitution for d = " + std::to_string(d));
  return s;
}

/// Fundamental solution of x^2 - d y^2 = -1 (smallest y > 0), or nothing.
/// Solvable iff the period of sqrt(d) is odd; d < 0 is never solvable.
inline std::optional<PellSolution> negative_pell(std::int64_t d)
{
  QuadraticCase c(d);
  if (d < 0)
    return std::nullopt;
  return negative_pell_unchecked(d);
}

/// Fundamental solution of x^2 - d y^2 = 1.
inline PellSolution positive_pell(std::int64_t d)
{
  auto cf = continued_fraction_sqrt(d);
  PellSolution s = detail::last_convergent(cf);
  if (cf.period.size() % 2 == 1)
    s = {s.x * s.x + BigInt(d) * s.y * s.y, 2 * s.x * s.y};
  return s;
}

enum class ShapeVariant { torus_only, two_cosets };

inline const char *to_string(ShapeVariant v)
{
  return v == ShapeVariant::torus_only ? "TorusOnly" : "TwoCosets";
}

/// N_{SL(2,Q)} T' for T' = {[[x, yd], [y, x]] : x^2 - d y^2 = 1}: either T'
/// alone, or T' together with the coset T' w, w = [[x0, -y0 d], [y0, -x0]].
struct NormalizerShape
{
  ShapeVariant variant = ShapeVariant::torus_only;
  std::optional<PellSolution> witness;
  /// Row-major w; empty for torus_only.
  std::vector<BigInt> coset_matrix;
};

inline NormalizerShape normalizer_shape(std::int64_t d)
{
  NormalizerShape shape;
  if (auto s = negative_pell(d)) {
    shape.variant = ShapeVariant::two_cosets;
    shape.witness = s;
    shape.coset_matrix = {s->x, -s->y * d, s->y, -s->x};
  }
  return shape;
}

/// d > 0 with no prime divisor of the form 4m + 3.
inline bool printed_criterion(std::int64_t d)
{
  if (d <= 0)
    return false;
  std::int64_t n = d;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p)
      continue;
    if (p % 4 == 3)
      return false;
    while (n % p == 0)
      n /= p;
  }
  return !(n > 1 && n % 4 == 3);
}

struct Sl2qReport
{
  std::int64_t d = 0;
  std::size_t period_length = 0;
  NormalizerShape shape;
  bool criterion_predicts_two_cosets = false;
  bool criterion_agrees = false;
};

/// Normalizer shape from negative Pell solvability, compared against the
/// "no prime divisor 4m+3" predicate.
inline Sl2qReport sl2q_normalizer_report(std::int64_t d)
{
  QuadraticCase c(d);
  Sl2qReport r;
  r.d = d;
  if (d > 1)
    r.period_length = continued_fraction_sqrt(d).period.size();
  r.shape = normalizer_shape(d);
  r.criterion_predicts_two_cosets = printed_criterion(d);
  r.criterion_agrees =
      r.criterion_predicts_two_cosets == (r.shape.variant == ShapeVariant::two_cosets);
  return r;
}

} // namespace garland::pell

#endif // GARLAND_PELL_HPP
