#ifndef GARLAND_CLI_HPP
#define GARLAND_CLI_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "error.hpp"
#include "etale_algebra.hpp"
#include "finite_field.hpp"
#include "lattice.hpp"
#include "matrix_group.hpp"
#include "pell.hpp"
#include "report.hpp"
#include "verification.hpp"

namespace garland::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_invalid = 1;
inline constexpr int exit_mismatch = 2;
inline constexpr int exit_cap = 3;

inline constexpr std::int64_t pell_sweep_cap = 1000000;
inline constexpr const char *cache_env_var = "GARLAND_CACHE_DIR";

struct CaseSpec
{
  std::uint32_t p = 0;
  unsigned base_degree = 1;
  std::vector<unsigned> degrees;
  AmbientKind ambient = AmbientKind::gl;

  unsigned n() const
  {
    unsigned s = 0;
    for (auto d : degrees)
      s += d;
    return s;
  }

  std::uint64_t q() const
  {
    std::uint64_t q = 1;
    for (unsigned i = 0; i < base_degree; ++i)
      q *= p;
    return q;
  }

  auto key() const { return std::make_tuple(p, base_degree, n(), degrees, ambient); }
  friend bool operator<(const CaseSpec &a, const CaseSpec &b) { return a.key() < b.key(); }
  friend bool operator==(const CaseSpec &, const CaseSpec &) = default;
};

inline std::string degrees_string(const std::vector<unsigned> &degrees)
{
  std::string s;
  for (auto d : degrees)
    s += (s.empty() ? "" : ",") + std::to_string(d);
  return s;
}

inline std::string describe(const CaseSpec &c)
{
  return "p=" + std::to_string(c.p) + " base_degree=" + std::to_string(c.base_degree) +
         " degrees=" + degrees_string(c.degrees) + " ambient=" + to_string(c.ambient);
}

inline AmbientKind parse_ambient(const std::string &s)
{
  std::string t = s;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "gl")
    return AmbientKind::gl;
  if (t == "sl")
    return AmbientKind::sl;
  throw InvalidArgument("ambient must be gl or sl, got '" + s + "'");
}

inline std::vector<unsigned> parse_degrees(const std::string &s)
{
  std::vector<unsigned> out;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(tok, &used);
    } catch (const std::exception &) {
      throw InvalidArgument("bad degree '" + tok + "'");
    }
    if (used != tok.size() || v == 0 || v > 64)
      throw InvalidArgument("bad degree '" + tok + "'");
    out.push_back(static_cast<unsigned>(v));
  }
  if (out.empty())
    throw InvalidArgument("degrees list is empty");
  return out;
}

inline void validate(const CaseSpec &c)
{
  if (!garland::detail::is_prime(c.p))
    throw InvalidArgument("p = " + std::to_string(c.p) + " is not prime");
  if (c.base_degree == 0)
    throw InvalidArgument("base degree must be at least 1");
  if (c.degrees.empty())
    throw InvalidArgument("degrees list is empty");
  for (auto d : c.degrees)
    if (d == 0)
      throw InvalidArgument("degrees must be positive");
}

struct Options
{
  bool json = false;
  bool timings = false;
  std::uint64_t max_order = default_group_cap;
  std::optional<std::filesystem::path> cache_dir;
  unsigned threads = 1;
};

struct CommandResult
{
  int exit_code = exit_ok;
  std::string output;
};

/// Flag first, then the environment, otherwise no cache.
inline std::optional<std::filesystem::path> resolve_cache_dir(const std::string &flag)
{
  if (!flag.empty())
    return std::filesystem::path(flag);
  if (const char *env = std::getenv(cache_env_var); env && *env)
    return std::filesystem::path(env);
  return std::nullopt;
}

namespace detail {

/// Key/value block with the keys padded to one width.
class KeyValueTable
{
public:
  void add(std::string key, std::string value) { rows_.emplace_back(std::move(key), std::move(value)); }
  void add(std::string key, bool value) { add(std::move(key), std::string(value ? "yes" : "no")); }
  void add(std::string key, std::size_t value) { add(std::move(key), std::to_string(value)); }

  std::string str() const
  {
    std::size_t w = 0;
    for (auto &[k, v] : rows_)
      w = std::max(w, k.size());
    std::string out;
    for (auto &[k, v] : rows_)
      out += k + std::string(w - k.size() + 2, ' ') + v + "\n";
    return out;
  }

private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

/// Columns left-aligned to their widest cell.
inline std::string column_table(const std::vector<std::string> &header,
                                const std::vector<std::vector<std::string>> &rows)
{
  std::vector<std::size_t> w(header.size());
  for (std::size_t i = 0; i < header.size(); ++i)
    w[i] = header[i].size();
  for (auto &r : rows)
    for (std::size_t i = 0; i < r.size(); ++i)
      w[i] = std::max(w[i], r[i].size());
  auto line = [&](const std::vector<std::string> &r) {
    std::string s;
    for (std::size_t i = 0; i < r.size(); ++i) {
      s += r[i];
      if (i + 1 < r.size())
        s += std::string(w[i] - r[i].size() + 2, ' ');
    }
    return s + "\n";
  };
  std::string out = line(header);
  for (auto &r : rows)
    out += line(r);
  return out;
}

inline std::string tuple_text(const std::vector<std::uint32_t> &c)
{
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i)
    s += (i ? "," : "") + std::to_string(c[i]);
  return s + ")";
}

inline std::string matrix_text(const FieldTable &F, const Matrix &m)
{
  std::string s = "[";
  for (std::size_t i = 0; i < m.n; ++i) {
    if (i)
      s += "; ";
    for (std::size_t j = 0; j < m.n; ++j)
      s += (j ? " " : "") + tuple_text(prime_coeffs(F, m(i, j)));
  }
  return s + "]";
}

inline std::string summary_line(const SubgroupSummary &s)
{
  return "order " + std::to_string(s.order) + "  id " + hex_id(s.id);
}

inline void add_summaries(KeyValueTable &t, const std::string &label,
                          const std::vector<SubgroupSummary> &v)
{
  if (v.empty()) {
    t.add(label, std::string("-"));
    return;
  }
  for (std::size_t i = 0; i < v.size(); ++i)
    t.add(i ? "" : label, summary_line(v[i]));
}

inline Json case_json(const CaseSpec &c)
{
  Json j;
  j["p"] = c.p;
  j["base_degree"] = c.base_degree;
  j["degrees"] = c.degrees;
  j["ambient"] = to_string(c.ambient);
  j["n"] = c.n();
  return j;
}

inline Json document(const char *command, const CaseSpec &c)
{
  Json j;
  j["schema"] = report_schema;
  j["command"] = command;
  j["case"] = case_json(c);
  return j;
}

inline int exit_for(const std::exception_ptr &e)
{
  try {
    std::rethrow_exception(e);
  } catch (const CapExceeded &) {
    return exit_cap;
  } catch (const std::exception &) {
    return exit_invalid;
  }
}

inline std::string message_of(const std::exception_ptr &e)
{
  try {
    std::rethrow_exception(e);
  } catch (const std::exception &x) {
    return x.what();
  }
}

/// Runs job(i) for i in [0, count) on up to `threads` workers.
inline void parallel_for(std::size_t count, unsigned threads,
                         const std::function<void(std::size_t)> &job)
{
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < count;)
        job(i);
    });
  for (auto &th : pool)
    th.join();
}

} // namespace detail

// ---------------------------------------------------------------- torus

struct TorusOutcome
{
  SubgroupSummary torus;
  std::size_t ambient_order = 0;
  bool diagonal = false;
  bool units_span = false;
  bool abelian = false;
  bool maximal_abelian = false;
};

inline TorusOutcome run_torus(const CaseSpec &c, const Options &opt)
{
  validate(c);
  AlgebraSpec S = AlgebraSpec::make(c.p, c.base_degree, c.degrees);
  AmbientPtr G = AmbientGroup::make(c.ambient, c.n(), S.base_ptr(), opt.max_order);
  Subgroup t = torus_subgroup(S, G);
  TorusOutcome o;
  o.torus = summarize(t);
  o.ambient_order = G->order();
  o.diagonal = true;
  for (auto e : t.elements()) {
    Matrix m = G->matrix(e);
    for (std::size_t i = 0; i < m.n; ++i)
      for (std::size_t j = 0; j < m.n; ++j)
        if (i != j && m(i, j) != G->field().zero())
          o.diagonal = false;
  }
  o.units_span = additive_span_check(S, all_units_selector()).spans;
  o.abelian = t.is_abelian();
  o.maximal_abelian = o.abelian && is_maximal_abelian(t);
  return o;
}

inline CommandResult cmd_torus(const CaseSpec &c, const Options &opt)
{
  TorusOutcome o;
  try {
    o = run_torus(c, opt);
  } catch (...) {
    auto e = std::current_exception();
    return {detail::exit_for(e), "error: " + detail::message_of(e) + "\n"};
  }
  auto field = construct_field(c.p, c.base_degree);
  const FieldTable &F = *field;
  if (opt.json) {
    Json j = detail::document("torus", c);
    j["field"] = field_json(F);
    j["ambient_order"] = o.ambient_order;
    j["torus"] = summary_json(F, o.torus);
    j["diagonal"] = o.diagonal;
    j["units_span"] = o.units_span;
    j["abelian"] = o.abelian;
    j["maximal_abelian"] = o.maximal_abelian;
    return {exit_ok, j.dump(2) + "\n"};
  }
  detail::KeyValueTable t;
  t.add("case", describe(c));
  t.add("ambient order", o.ambient_order);
  t.add("torus order", o.torus.order);
  t.add("torus id", hex_id(o.torus.id));
  for (std::size_t i = 0; i < o.torus.generators.size(); ++i)
    t.add(i ? "" : "generators", detail::matrix_text(F, o.torus.generators[i]));
  t.add("diagonal", o.diagonal);
  t.add("units span S", o.units_span);
  t.add("abelian", o.abelian);
  t.add("maximal abelian", o.maximal_abelian);
  return {exit_ok, t.str()};
}

// ---------------------------------------------------------------- verify

struct VerifyOutcome
{
  VerificationReport report;
  /// Absent when GL(n, q) is over the order cap.
  std::optional<RestrictionCheck> restriction;
  Verdict restriction_verdict = Verdict::not_applicable;
  bool cache_used = false;
  bool cache_hit = false;

  int exit_code() const
  {
    return report.verdict == Verdict::unexpected_mismatch ||
                   restriction_verdict == Verdict::unexpected_mismatch
               ? exit_mismatch
               : exit_ok;
  }
};

inline VerifyOutcome run_verify(const CaseSpec &c, const Options &opt)
{
  validate(c);
  AlgebraSpec S = AlgebraSpec::make(c.p, c.base_degree, c.degrees);
  AmbientPtr G = AmbientGroup::make(c.ambient, c.n(), S.base_ptr(), opt.max_order);
  VerifyOutcome out;
  std::optional<IntervalLattice> lattice;
  std::optional<LatticeCache> cache;
  if (opt.cache_dir) {
    cache.emplace(*opt.cache_dir);
    out.cache_used = true;
    Subgroup torus = torus_subgroup(S, G);
    lattice = cache->load(S, G, torus);
    out.cache_hit = lattice.has_value();
    if (!lattice) {
      lattice = enumerate_interval(torus);
      cache->store(S, G, *lattice);
    }
  }
  out.report = verify_lower_garland(S, G, lattice);

  std::uint64_t gl_ord = gl_order(c.n(), c.q());
  if (gl_ord <= opt.max_order) {
    AmbientPtr gl = c.ambient == AmbientKind::gl
                        ? G
                        : AmbientGroup::make(AmbientKind::gl, c.n(), S.base_ptr(), opt.max_order);
    AmbientPtr sl = c.ambient == AmbientKind::sl
                        ? G
                        : AmbientGroup::make(AmbientKind::sl, c.n(), S.base_ptr(), opt.max_order);
    out.restriction = interval_restriction_check(S, gl, sl);
    if (out.restriction->hypotheses.all_hold())
      out.restriction_verdict =
          out.restriction->equal ? Verdict::confirmed : Verdict::unexpected_mismatch;
  }
  return out;
}

inline Json verify_json(const CaseSpec &c, const FieldTable &F, const VerifyOutcome &o,
                        bool timings)
{
  Json j = detail::document("verify", c);
  j["field"] = field_json(F);
  Json body = verification_json(F, o.report, timings);
  for (auto &[k, v] : body.items())
    j[k] = v;
  if (o.restriction) {
    Json r = restriction_json(F, *o.restriction);
    r["verdict"] = to_string(o.restriction_verdict);
    j["restriction"] = r;
  } else {
    j["restriction"] = nullptr;
  }
  if (timings) {
    j["cache"] = {{"used", o.cache_used}, {"hit", o.cache_hit}};
  }
  return j;
}

inline std::string verify_text(const CaseSpec &c, const FieldTable &F, const VerifyOutcome &o,
                               bool timings)
{
  const VerificationReport &r = o.report;
  detail::KeyValueTable t;
  t.add("case", describe(c));
  t.add("ambient", r.ambient);
  t.add("torus", detail::summary_line(r.torus));
  for (std::size_t i = 0; i < r.torus.generators.size(); ++i)
    t.add(i ? "" : "torus generators", detail::matrix_text(F, r.torus.generators[i]));
  t.add("normalizer (brute)", detail::summary_line(r.normalizer));
  t.add("normalizer (formula)", "order " + std::to_string(r.formula_order) +
                                    (r.formula_closed ? "" : "  (not a subgroup)"));
  t.add("formula = brute", r.formula_equals_brute);
  t.add("N(N(T)) order", r.double_normalizer_order);
  t.add("N(N(T)) = N(T)", r.normalizer_idempotent);
  t.add("lattice size", r.lattice_size);
  t.add("garlands", r.garland_count);
  detail::add_summaries(t, "lower garland", r.lower_garland);
  detail::add_summaries(t, "interval", r.interval);
  detail::add_summaries(t, "upper garland", r.upper_garland);
  detail::add_summaries(t, "garland only", r.garland_only);
  detail::add_summaries(t, "interval only", r.interval_only);
  t.add("lower garland = interval", r.equal);
  t.add("units span S", r.hypotheses.units_span);
  t.add("selected units span S", r.hypotheses.selected_span);
  t.add("S is not F3+F3", r.hypotheses.not_f3_squared);
  t.add("at most two F2 factors", r.hypotheses.at_most_two_f2_factors);
  t.add("outside F3 split family", r.hypotheses.outside_f3_split_family);
  t.add("torus conjugate-isolated", r.conjugate_isolated);
  t.add("verdict", std::string(to_string(r.verdict)));
  if (o.restriction) {
    t.add("SL restriction equal", o.restriction->equal);
    t.add("SL restriction verdict", std::string(to_string(o.restriction_verdict)));
  } else {
    t.add("SL restriction", std::string("skipped (GL over the order cap)"));
  }
  if (timings) {
    for (auto &[k, s] : r.timings)
      t.add("time " + k, std::to_string(s) + " s");
    t.add("cache hit", o.cache_hit);
  }
  return t.str();
}

inline CommandResult cmd_verify(const CaseSpec &c, const Options &opt)
{
  VerifyOutcome o;
  try {
    o = run_verify(c, opt);
  } catch (...) {
    auto e = std::current_exception();
    return {detail::exit_for(e), "error: " + detail::message_of(e) + "\n"};
  }
  auto F = construct_field(c.p, c.base_degree);
  if (opt.json)
    return {o.exit_code(), verify_json(c, *F, o, opt.timings).dump(2) + "\n"};
  return {o.exit_code(), verify_text(c, *F, o, opt.timings)};
}

// ---------------------------------------------------------------- sweep

/// Partitions of n into positive parts, each list non-increasing.
inline std::vector<std::vector<unsigned>> partitions(unsigned n)
{
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> cur;
  std::function<void(unsigned, unsigned)> rec = [&](unsigned left, unsigned max_part) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (unsigned part = std::min(left, max_part); part >= 1; --part) {
      cur.push_back(part);
      rec(left - part, part);
      cur.pop_back();
    }
  };
  rec(n, n);
  return out;
}

struct SweepFilter
{
  std::optional<std::uint32_t> p;
  std::optional<unsigned> base_degree;
  std::optional<AmbientKind> ambient;
};

/// Every case with n >= 2 whose ambient group has order at most max_order.
inline std::vector<CaseSpec> sweep_cases(std::uint64_t max_order, const SweepFilter &filter = {})
{
  std::vector<CaseSpec> out;
  for (std::uint32_t p = 2; ambient_order(AmbientKind::sl, 2, p) <= max_order; ++p) {
    if (!garland::detail::is_prime(p) || (filter.p && *filter.p != p))
      continue;
    std::uint64_t q = p;
    for (unsigned m = 1; ambient_order(AmbientKind::sl, 2, q) <= max_order; ++m, q *= p) {
      if (filter.base_degree && *filter.base_degree != m)
        continue;
      for (unsigned n = 2; ambient_order(AmbientKind::sl, n, q) <= max_order; ++n)
        for (auto kind : {AmbientKind::gl, AmbientKind::sl}) {
          if ((filter.ambient && *filter.ambient != kind) || ambient_order(kind, n, q) > max_order)
            continue;
          for (auto &deg : partitions(n))
            out.push_back({p, m, deg, kind});
        }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct SweepEntry
{
  CaseSpec spec;
  std::optional<VerifyOutcome> outcome;
  int exit_code = exit_ok;
  std::string error;
};

inline std::vector<SweepEntry> run_sweep(const std::vector<CaseSpec> &cases, const Options &opt)
{
  std::vector<SweepEntry> out(cases.size());
  detail::parallel_for(cases.size(), opt.threads, [&](std::size_t i) {
    out[i].spec = cases[i];
    try {
      out[i].outcome = run_verify(cases[i], opt);
      out[i].exit_code = out[i].outcome->exit_code();
    } catch (...) {
      auto e = std::current_exception();
      out[i].exit_code = detail::exit_for(e);
      out[i].error = detail::message_of(e);
    }
  });
  return out;
}

struct SweepSummary
{
  std::size_t cases = 0;
  std::size_t confirmed = 0;
  std::size_t predicted_failure = 0;
  std::size_t not_applicable = 0;
  std::size_t unexpected_mismatch = 0;
  std::size_t errors = 0;
  std::size_t cap_exceeded = 0;

  int exit_code() const
  {
    if (unexpected_mismatch)
      return exit_mismatch;
    if (cap_exceeded)
      return exit_cap;
    return errors ? exit_invalid : exit_ok;
  }
};

inline SweepSummary summarize_sweep(const std::vector<SweepEntry> &entries)
{
  SweepSummary s;
  s.cases = entries.size();
  for (auto &e : entries) {
    if (!e.outcome) {
      (e.exit_code == exit_cap ? s.cap_exceeded : s.errors)++;
      continue;
    }
    if (e.exit_code == exit_mismatch) {
      ++s.unexpected_mismatch;
      continue;
    }
    switch (e.outcome->report.verdict) {
    case Verdict::confirmed:
      ++s.confirmed;
      break;
    case Verdict::predicted_failure:
      ++s.predicted_failure;
      break;
    default:
      ++s.not_applicable;
      break;
    }
  }
  return s;
}

inline CommandResult cmd_sweep(std::uint64_t max_order, const SweepFilter &filter,
                               const Options &opt)
{
  auto entries = run_sweep(sweep_cases(max_order, filter), opt);
  auto summary = summarize_sweep(entries);
  std::string out;
  if (opt.json) {
    for (auto &e : entries) {
      if (e.outcome) {
        auto F = construct_field(e.spec.p, e.spec.base_degree);
        out += verify_json(e.spec, *F, *e.outcome, opt.timings).dump() + "\n";
      } else {
        Json j = detail::document("verify", e.spec);
        j["error"] = e.error;
        j["exit_code"] = e.exit_code;
        out += j.dump() + "\n";
      }
    }
    Json s;
    s["schema"] = report_schema;
    s["command"] = "sweep-summary";
    s["max_order"] = max_order;
    s["cases"] = summary.cases;
    s["confirmed"] = summary.confirmed;
    s["predicted_failure"] = summary.predicted_failure;
    s["not_applicable"] = summary.not_applicable;
    s["unexpected_mismatch"] = summary.unexpected_mismatch;
    s["cap_exceeded"] = summary.cap_exceeded;
    s["errors"] = summary.errors;
    out += s.dump() + "\n";
    return {summary.exit_code(), out};
  }
  std::vector<std::vector<std::string>> rows;
  for (auto &e : entries) {
    std::string q = std::to_string(e.spec.q());
    std::string amb = std::string(to_string(e.spec.ambient)) + "(" + std::to_string(e.spec.n()) +
                      "," + q + ")";
    if (!e.outcome) {
      rows.push_back({q, degrees_string(e.spec.degrees), amb, "-", "-", "-", "-", "-", "-",
                      e.exit_code == exit_cap ? "cap_exceeded" : "error"});
      continue;
    }
    const auto &r = e.outcome->report;
    std::string restr = e.outcome->restriction ? (e.outcome->restriction->equal ? "yes" : "no") : "-";
    std::string verdict = to_string(r.verdict);
    if (e.outcome->restriction_verdict == Verdict::unexpected_mismatch)
      verdict += " (restriction mismatch)";
    rows.push_back({q, degrees_string(e.spec.degrees), amb, std::to_string(r.torus.order),
                    std::to_string(r.normalizer.order), std::to_string(r.formula_order),
                    std::to_string(r.lattice_size), r.equal ? "yes" : "no", restr, verdict});
  }
  out = detail::column_table({"q", "degrees", "ambient", "|T|", "|N|", "|N formula|", "lattice",
                              "lower=interval", "SL restriction", "verdict"},
                             rows);
  detail::KeyValueTable t;
  t.add("cases", summary.cases);
  t.add("confirmed", summary.confirmed);
  t.add("predicted failure", summary.predicted_failure);
  t.add("not applicable", summary.not_applicable);
  t.add("unexpected mismatch", summary.unexpected_mismatch);
  t.add("cap exceeded", summary.cap_exceeded);
  t.add("errors", summary.errors);
  out += "\n" + t.str();
  return {summary.exit_code(), out};
}

// ---------------------------------------------------------------- pell

/// One row of the Pell table. Fields that need a squarefree d (or a
/// non-square d) stay empty otherwise.
struct PellRecord
{
  std::int64_t d = 0;
  bool squarefree = false;
  std::optional<std::size_t> period_length;
  bool solvable = false;
  std::optional<pell::PellSolution> solution;
  std::optional<bool> criterion_agrees;
};

inline PellRecord pell_record(std::int64_t d)
{
  PellRecord r;
  r.d = d;
  r.squarefree = d > 1 && pell::is_squarefree(d);
  if (d > 1 && !pell::is_square(d)) {
    r.period_length = pell::continued_fraction_sqrt(d).period.size();
    r.solution = pell::negative_pell_unchecked(d);
    r.solvable = r.solution.has_value();
  }
  if (r.squarefree)
    r.criterion_agrees = pell::printed_criterion(d) == r.solvable;
  return r;
}

inline Json pell_record_json(const PellRecord &r)
{
  Json j;
  j["d"] = r.d;
  j["period_length"] = r.period_length ? Json(*r.period_length) : Json(nullptr);
  j["solvable"] = r.solvable;
  j["x0"] = r.solution ? Json(r.solution->x.str()) : Json(nullptr);
  j["y0"] = r.solution ? Json(r.solution->y.str()) : Json(nullptr);
  j["criterion_agrees"] = r.criterion_agrees ? Json(*r.criterion_agrees) : Json(nullptr);
  return j;
}

inline CommandResult cmd_pell_sweep(std::int64_t d_max, const Options &opt)
{
  if (d_max < 1)
    return {exit_invalid, "error: d-max must be at least 1\n"};
  if (d_max > pell_sweep_cap)
    return {exit_cap, "error: d-max " + std::to_string(d_max) + " is above the sweep cap " +
                          std::to_string(pell_sweep_cap) + "\n"};
  std::vector<PellRecord> records(static_cast<std::size_t>(d_max));
  detail::parallel_for(records.size(), opt.threads,
                       [&](std::size_t i) { records[i] = pell_record(static_cast<std::int64_t>(i) + 1); });
  std::string out;
  if (opt.json) {
    for (auto &r : records) {
      Json j;
      j["schema"] = report_schema;
      j["command"] = "pell-sweep";
      Json body = pell_record_json(r);
      for (auto &[k, v] : body.items())
        j[k] = v;
      out += j.dump() + "\n";
    }
    return {exit_ok, out};
  }
  std::vector<std::vector<std::string>> rows;
  auto opt_text = [](bool has, const std::string &s) { return has ? s : std::string("-"); };
  for (auto &r : records)
    rows.push_back({std::to_string(r.d),
                    opt_text(r.period_length.has_value(),
                             r.period_length ? std::to_string(*r.period_length) : ""),
                    r.solvable ? "yes" : "no",
                    opt_text(r.solution.has_value(), r.solution ? r.solution->x.str() : ""),
                    opt_text(r.solution.has_value(), r.solution ? r.solution->y.str() : ""),
                    opt_text(r.criterion_agrees.has_value(),
                             r.criterion_agrees ? (*r.criterion_agrees ? "yes" : "no") : "")});
  return {exit_ok,
          detail::column_table({"d", "period", "solvable", "x0", "y0", "criterion_agrees"}, rows)};
}

inline CommandResult cmd_pell(std::int64_t d, const Options &opt)
{
  pell::Sl2qReport r;
  try {
    r = pell::sl2q_normalizer_report(d);
  } catch (...) {
    auto e = std::current_exception();
    return {detail::exit_for(e), "error: " + detail::message_of(e) + "\n"};
  }
  if (opt.json) {
    Json j;
    j["schema"] = report_schema;
    j["command"] = "pell";
    Json body = pell_json(r);
    for (auto &[k, v] : body.items())
      j[k] = v;
    return {exit_ok, j.dump(2) + "\n"};
  }
  detail::KeyValueTable t;
  t.add("d", std::to_string(r.d));
  t.add("period length", r.d > 1 ? std::to_string(r.period_length) : std::string("-"));
  t.add("normalizer", std::string(pell::to_string(r.shape.variant)));
  if (r.shape.witness) {
    t.add("x0", r.shape.witness->x.str());
    t.add("y0", r.shape.witness->y.str());
    auto &w = r.shape.coset_matrix;
    t.add("coset matrix", "[" + w[0].str() + " " + w[1].str() + "; " + w[2].str() + " " +
                              w[3].str() + "]");
  }
  t.add("criterion predicts TwoCosets", r.criterion_predicts_two_cosets);
  t.add("criterion agrees", r.criterion_agrees);
  if (!r.criterion_agrees)
    t.add("note", std::string("criterion disagrees with negative Pell solvability"));
  return {exit_ok, t.str()};
}

} // namespace garland::cli

#endif // GARLAND_CLI_HPP
