#include <cstdint>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include <garland/cli.hpp>

namespace {

struct Flags
{
  std::uint32_t p = 0;
  unsigned base_degree = 1;
  std::string degrees;
  std::string ambient = "gl";
  std::uint64_t max_order = 0;
  bool json = false;
  bool timings = false;
  std::string cache_dir;
  std::int64_t d = 0;
  std::int64_t d_max = 0;
  unsigned threads = 0;
  bool pell = false;
};

void add_case_flags(CLI::App *cmd, Flags &f)
{
  cmd->add_option("--p", f.p, "characteristic")->required();
  cmd->add_option("--base-degree", f.base_degree, "degree of k over F_p");
  cmd->add_option("--degrees", f.degrees, "factor degrees, comma separated")->required();
  cmd->add_option("--ambient", f.ambient, "gl or sl");
}

void add_common_flags(CLI::App *cmd, Flags &f)
{
  cmd->add_option("--max-order", f.max_order, "largest ambient group order to enumerate");
  cmd->add_flag("--json", f.json, "emit JSON");
  cmd->add_flag("--timings", f.timings, "include wall-clock timings and cache status");
  cmd->add_option("--cache-dir", f.cache_dir,
                  std::string("lattice cache directory (default: $") +
                      garland::cli::cache_env_var + ")");
  cmd->add_option("--threads", f.threads, "worker threads for sweeps");
}

garland::cli::Options options_from(const Flags &f, std::uint64_t default_max_order)
{
  garland::cli::Options o;
  o.json = f.json;
  o.timings = f.timings;
  o.max_order = f.max_order ? f.max_order : default_max_order;
  o.cache_dir = garland::cli::resolve_cache_dir(f.cache_dir);
  o.threads = f.threads ? f.threads : std::max(1u, std::thread::hardware_concurrency());
  return o;
}

garland::cli::CaseSpec case_from(const Flags &f)
{
  return {f.p, f.base_degree, garland::cli::parse_degrees(f.degrees),
          garland::cli::parse_ambient(f.ambient)};
}

} // namespace

int main(int argc, char **argv)
{
  using namespace garland::cli;
  CLI::App app{"Tori, interval lattices and garlands in GL(n,q) and SL(n,q)"};
  app.require_subcommand(1);
  Flags f;

  auto *torus = app.add_subcommand("torus", "build the torus of an algebra");
  add_case_flags(torus, f);
  add_common_flags(torus, f);

  auto *verify = app.add_subcommand("verify", "compare the lower garland with the interval");
  add_case_flags(verify, f);
  add_common_flags(verify, f);

  auto *sweep = app.add_subcommand("sweep", "verify every case up to an ambient order");
  sweep->add_option("--p", f.p, "restrict to one characteristic");
  sweep->add_option("--base-degree", f.base_degree, "restrict to one base degree");
  sweep->add_option("--ambient", f.ambient, "restrict to gl or sl");
  sweep->add_flag("--pell", f.pell, "tabulate negative Pell solvability instead");
  sweep->add_option("--d-max", f.d_max, "largest d for --pell");
  add_common_flags(sweep, f);

  auto *pell = app.add_subcommand("pell", "SL(2,Q) normalizer of a quadratic torus");
  pell->add_option("--d", f.d, "squarefree d");
  pell->add_option("--d-max", f.d_max, "tabulate 1..d-max instead");
  add_common_flags(pell, f);

  CLI11_PARSE(app, argc, argv);

  CommandResult r;
  try {
    if (torus->parsed()) {
      r = cmd_torus(case_from(f), options_from(f, garland::default_group_cap));
    } else if (verify->parsed()) {
      r = cmd_verify(case_from(f), options_from(f, garland::default_group_cap));
    } else if (sweep->parsed()) {
      auto opt = options_from(f, 500);
      if (f.pell) {
        r = cmd_pell_sweep(f.d_max ? f.d_max : 100, opt);
      } else {
        SweepFilter filter;
        if (sweep->count("--p"))
          filter.p = f.p;
        if (sweep->count("--base-degree"))
          filter.base_degree = f.base_degree;
        if (sweep->count("--ambient"))
          filter.ambient = parse_ambient(f.ambient);
        r = cmd_sweep(opt.max_order, filter, opt);
      }
    } else if (pell->parsed()) {
      auto opt = options_from(f, garland::default_group_cap);
      if (pell->count("--d-max"))
        r = cmd_pell_sweep(f.d_max, opt);
      else if (pell->count("--d"))
        r = cmd_pell(f.d, opt);
      else
        r = {exit_invalid, "error: pell needs --d or --d-max\n"};
    }
  } catch (const garland::CapExceeded &e) {
    r = {exit_cap, std::string("error: ") + e.what() + "\n"};
  } catch (const std::exception &e) {
    r = {exit_invalid, std::string("error: ") + e.what() + "\n"};
  }
  (r.exit_code == exit_ok || r.exit_code == exit_mismatch ? std::cout : std::cerr) << r.output;
  return r.exit_code;
}
