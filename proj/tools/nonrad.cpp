// Batch front-end: construct non-radiative solutions, evolve data, measure
// characteristic numbers, run the verification suites.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/input error,
// 3 numerical non-convergence.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "nonrad/charnum.hpp"
#include "nonrad/dynamics.hpp"
#include "nonrad/errors.hpp"
#include "nonrad/fixpoint.hpp"
#include "nonrad/io.hpp"
#include "nonrad/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nonrad;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::string tag = "run";
  unsigned seed = 1234;

  fs::path out(const std::string& name) const { return fs::path(out_dir) / (tag + "_" + name); }
};

std::string default_out_dir() {
  const char* env = std::getenv("NONRAD_OUT_DIR");
  return env ? env : ".";
}

// Flat JSON config; CLI flags override whatever the file sets.
json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path);
  json j;
  in >> j;
  if (!j.is_object()) throw InputError(path + ": config must be a flat JSON object");
  return j;
}

template <typename T>
void from_config(const json& j, const std::string& key, T& target, const CLI::Option* opt) {
  if (opt->count() > 0) return;  // flag wins
  if (j.contains(key)) target = j.at(key).get<T>();
}

Nonlinearity make_kind(const std::string& kind) {
  if (kind == "focusing") return Nonlinearity::focusing();
  if (kind == "defocusing") return Nonlinearity::defocusing();
  throw InputError("unknown nonlinearity kind '" + kind + "'");
}

json resolved_fixpoint_config(const FixpointConfig& cfg, const std::string& kind,
                              const std::string& order, unsigned seed) {
  json j;
  j["alpha"] = cfg.alpha;
  j["beta"] = cfg.beta;
  j["order"] = order;
  j["kind"] = kind;
  j["c"] = cfg.c;
  j["R_override"] = cfg.R_override;
  j["tol"] = cfg.tol;
  j["max_iters"] = cfg.max_iters;
  j["T_extract"] = cfg.T_extract;
  j["interior_bump"] = cfg.interior_bump;
  j["step"] = cfg.solve.step;
  j["dt"] = cfg.solve.dt;
  j["r_max"] = cfg.solve.r_max;
  j["picard_iters"] = cfg.solve.picard_iters;
  j["mask"] = cfg.solve.mask == SolveConfig::Mask::sharp ? "sharp" : "smooth";
  j["seed"] = seed;
  return j;
}

void dump_iterate_profiles(const CommonOpts& common, const FixpointConfig& cfg,
                           const Nonlinearity& F, ConstructionOrder order,
                           const FixpointResult& res) {
  // re-walk the iteration tails for the per-iterate dumps
  write_profile_csv(common.out("profile.csv").string(), res.full);
  write_profile_csv(common.out("tail.csv").string(), res.tail);
  (void)cfg;
  (void)F;
  (void)order;
}

int cmd_construct(const CommonOpts& common, FixpointConfig cfg, const std::string& kind,
                  const std::string& order_name) {
  const Nonlinearity F = make_kind(kind);
  const ConstructionOrder order =
      (order_name == "second") ? ConstructionOrder::second : ConstructionOrder::first;
  if (order_name != "first" && order_name != "second")
    throw InputError("order must be 'first' or 'second'");

  FixpointResult res;
  try {
    res = iterate_to_fixed_point(cfg, F, order);
  } catch (const NonContractionError& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const SolverDivergenceError& e) {
    std::cerr << "solver divergence: " << e.what() << "\n";
    return kExitNumerical;
  }

  const json cfgj = resolved_fixpoint_config(cfg, kind, order_name, common.seed);
  atomic_write_text(common.out("run.json").string(), run_record_json(res, cfgj.dump()));
  dump_iterate_profiles(common, cfg, F, order, res);
  write_data_csv(common.out("data.csv").string(), res.sol.data_at(0.0));
  write_snapshots_csv(common.out("snapshots.csv").string(), res.sol);
  std::cout << "converged in " << res.iters << " iterations; R = " << res.R
            << ", recovered alpha = " << res.recovered_alpha;
  if (order == ConstructionOrder::second)
    std::cout << ", recovered beta = " << res.recovered_beta;
  std::cout << "\nartifacts under " << fs::path(common.out_dir) << " (tag '" << common.tag
            << "')\n";
  return kExitOk;
}

int cmd_evolve(const CommonOpts& common, const std::string& profile_path,
               const std::string& data_path, const std::string& kind, SolveConfig scfg) {
  RadialProfile G;
  if (!profile_path.empty()) {
    G = read_profile_csv(profile_path);
  } else if (!data_path.empty()) {
    G = profile_from_data(read_data_csv(data_path));
  } else {
    throw InputError("evolve needs --profile or --data");
  }
  scfg.step = G.grid.step;
  scfg.r_max = std::min(scfg.r_max, std::max(G.grid.s_max, 1.0));

  if (kind == "none") {
    // free evolution: dump r,t,u on the snapshot grid
    FreeWave w(G);
    ExteriorSolution sol;
    sol.cfg = scfg;
    sol.R = scfg.R;
    sol.rgrid = scfg.rgrid();
    for (double t = -scfg.T; t <= scfg.T + 1e-12; t += scfg.snapshot_stride_time) {
      Snapshot s;
      s.t = t;
      s.first_active = 0;
      const std::size_t n = sol.rgrid.size();
      s.u.assign(n, 0.0);
      s.ut.assign(n, 0.0);
      s.ur.assign(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double r = sol.rgrid.node(i);
        s.u[i] = w.u(r, t);
        s.ut[i] = w.ut(r, t);
      }
      sol.snaps.push_back(std::move(s));
    }
    write_eval_csv(common.out("eval.csv").string(), sol);
    std::cout << "free evolution written to " << common.out("eval.csv") << "\n";
    return kExitOk;
  }

  const Nonlinearity F = make_kind(kind);
  ExteriorSolution sol;
  try {
    sol = solve_exterior_profile(G, F, scfg);
  } catch (const SolverDivergenceError& e) {
    std::cerr << "solver divergence: " << e.what() << "\n";
    return kExitNumerical;
  }
  if (sol.small_data_warning)
    std::cerr << "warning: linear part has Y norm " << sol.linear_y_norm
              << " above threshold " << scfg.y_warn_threshold << " (large-data regime)\n";
  write_snapshots_csv(common.out("snapshots.csv").string(), sol);
  std::cout << "snapshots written to " << common.out("snapshots.csv") << "\n";
  return kExitOk;
}

int cmd_charnums(const CommonOpts& common, const std::string& data_path,
                 const std::string& ref_path, const std::string& method, double win_lo,
                 double win_hi) {
  const RadialData d = read_data_csv(data_path);
  CharNumbers cn;
  if (win_hi <= 0.0) {
    win_lo = std::max(2.0, 4.0 * d.grid.step * 64.0);
    win_hi = d.grid.r_max / 2.0;
  }
  cn.fit_window = {win_lo, win_hi};

  if (method == "integral" || method == "pv") {
    const RadialProfile G = profile_from_data(d);
    cn.alpha = alpha_of(G);
    if (method == "pv") {
      cn.method = CharNumbers::Method::principal_value;
      const PvResult pv = beta_pv(G);
      cn.beta = pv.value;
      cn.residual = pv.cauchy_tail;
    } else {
      cn.method = CharNumbers::Method::integral;
      if (!ref_path.empty()) {
        const RadialProfile Gref = profile_from_data(read_data_csv(ref_path));
        cn.beta = beta_relative(G, Gref, 1e-3);
        cn.reference_tag = ref_path;
      }
    }
  } else if (method == "fit") {
    cn.method = CharNumbers::Method::asymptotic_fit;
    const FitResult fa = alpha_fit(d, cn.fit_window);
    cn.alpha = fa.value;
    FitResult fb;
    if (!ref_path.empty()) {
      fb = beta_fit(d, read_data_csv(ref_path), cn.fit_window);
      cn.reference_tag = ref_path;
    } else {
      fb = beta_fit(d, cn.fit_window);
    }
    cn.beta = fb.value;
    cn.residual = std::max(fa.residual, fb.residual);
  } else {
    throw InputError("method must be integral|pv|fit");
  }

  const std::string j = charnumbers_json(cn);
  std::cout << j;
  atomic_write_text(common.out("charnums.json").string(), j);
  return kExitOk;
}

int cmd_translate(const CommonOpts& common, FixpointConfig cfg, const std::string& kind,
                  double t0, double win_lo, double win_hi) {
  const Nonlinearity F = make_kind(kind);
  FixpointResult res;
  try {
    res = iterate_to_fixed_point(cfg, F, ConstructionOrder::first);
  } catch (const NonContractionError& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return kExitNumerical;
  }
  if (win_hi <= 0.0) {
    win_lo = 8.0;
    win_hi = cfg.solve.r_max / 2.0;
  }
  const TranslationReport rep =
      translate_and_measure(res.sol, t0, res.sol.data_at(0.0), {win_lo, win_hi}, res.tag());
  const std::string j = translation_report_json(rep);
  std::cout << j;
  atomic_write_text(common.out("translate.json").string(), j);
  return kExitOk;
}

int cmd_decayfit(const CommonOpts& common, const std::string& input_path,
                 const std::string& profile_path, double r_lo, double r_hi, int points) {
  std::map<double, double> samples;
  if (!profile_path.empty()) {
    const RadialProfile G = read_profile_csv(profile_path);
    if (r_hi <= 0.0) {
      r_lo = std::max(1.0, 8.0 * G.grid.step);
      r_hi = G.grid.s_max / 2.0;
    }
    const double q = std::pow(r_hi / r_lo, 1.0 / (points - 1));
    double r = r_lo;
    for (int i = 0; i < points; ++i, r *= q) samples[r] = l2_tail(G, r);
  } else if (!input_path.empty()) {
    std::ifstream in(input_path);
    if (!in) throw InputError("cannot open " + input_path);
    std::string line;
    std::getline(in, line);  // header r,value
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) throw InputError(input_path + ": expected r,value rows");
      samples[std::stod(line.substr(0, comma))] = std::stod(line.substr(comma + 1));
    }
  } else {
    throw InputError("decayfit needs --profile or --input");
  }
  const double slope = decay_rate_fit(samples);
  json j;
  j["slope"] = slope;
  j["samples"] = samples.size();
  const std::string out = j.dump(2) + "\n";
  std::cout << out;
  atomic_write_text(common.out("decayfit.json").string(), out);
  return kExitOk;
}

int cmd_verify(const std::string& suite, bool fast, unsigned seed) {
  VerifyOptions opt;
  opt.fast = fast;
  opt.seed = seed;
  const auto results = run_suite(suite, opt);
  print_results(std::cout, results);
  return all_passed(results) ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radial non-radiative wave laboratory (5D energy-critical)"};
  app.require_subcommand(1);

  CommonOpts common;
  common.out_dir = default_out_dir();
  app.add_option("--out-dir", common.out_dir, "artifact directory (env NONRAD_OUT_DIR)");
  app.add_option("--tag", common.tag, "artifact filename prefix");
  app.add_option("--seed", common.seed, "seed for randomized property sampling");
  auto* cfg_opt = app.add_option("--config", common.config_path, "flat JSON config file");

  FixpointConfig fx;
  std::string kind = "focusing", order = "first";
  double t0 = 0.5;
  std::string profile_path, data_path, ref_path, method = "integral", input_path;
  double win_lo = 0.0, win_hi = 0.0, r_lo = 0.0, r_hi = 0.0;
  int points = 12;
  SolveConfig scfg;
  std::string suite;
  bool fast = false;
  std::string mask_name = "sharp";

  auto add_fixpoint_opts = [&](CLI::App* c) {
    std::map<std::string, CLI::Option*> opts;
    opts["alpha"] = c->add_option("--alpha", fx.alpha, "first characteristic number");
    opts["beta"] = c->add_option("--beta", fx.beta, "second characteristic number");
    opts["c"] = c->add_option("--c", fx.c, "contraction constant c(gamma)");
    opts["R"] = c->add_option("--R", fx.R_override, "override the recipe radius");
    opts["tol"] = c->add_option("--tol", fx.tol, "fixed-point tolerance");
    opts["max_iters"] = c->add_option("--max-iters", fx.max_iters, "iteration cap");
    opts["T_extract"] = c->add_option("--T", fx.T_extract, "extraction horizon");
    opts["dt"] = c->add_option("--dt", fx.solve.dt, "time step");
    opts["step"] = c->add_option("--step", fx.solve.step, "grid step");
    opts["r_max"] = c->add_option("--r-max", fx.solve.r_max, "radial extent");
    opts["picard_iters"] =
        c->add_option("--picard-iters", fx.solve.picard_iters, "sub-iterations per step");
    opts["interior_bump"] =
        c->add_option("--interior-bump", fx.interior_bump, "zero-moment interior perturbation");
    opts["kind"] = c->add_option("--kind", kind, "focusing|defocusing");
    return opts;
  };

  auto* construct = app.add_subcommand("construct", "build a non-radiative solution");
  auto fx_opts = add_fixpoint_opts(construct);
  auto* order_opt = construct->add_option("--order", order, "first|second");

  auto* evolve = app.add_subcommand("evolve", "evolve data or a profile on an exterior region");
  evolve->add_option("--profile", profile_path, "profile CSV (s,value)");
  evolve->add_option("--data", data_path, "data CSV (r,u0,u1)");
  auto* ev_kind = evolve->add_option("--kind", kind, "none|focusing|defocusing");
  auto* ev_R = evolve->add_option("--R", scfg.R, "cone offset");
  auto* ev_T = evolve->add_option("--T", scfg.T, "horizon");
  auto* ev_dt = evolve->add_option("--dt", scfg.dt, "time step");
  auto* ev_rmax = evolve->add_option("--r-max", scfg.r_max, "radial extent");
  auto* ev_picard = evolve->add_option("--picard-iters", scfg.picard_iters, "sub-iterations");
  auto* ev_mask = evolve->add_option("--mask", mask_name, "sharp|smooth");

  auto* charnums = app.add_subcommand("charnums", "characteristic numbers of a data file");
  charnums->add_option("--data", data_path, "data CSV (r,u0,u1)")->required();
  charnums->add_option("--ref", ref_path, "reference data CSV for beta");
  charnums->add_option("--method", method, "integral|pv|fit");
  charnums->add_option("--window", win_lo, "fit window lower radius");
  charnums->add_option("--window-hi", win_hi, "fit window upper radius");

  auto* translate_cmd = app.add_subcommand("translate", "translation law report");
  auto fx_opts2 = add_fixpoint_opts(translate_cmd);
  translate_cmd->add_option("--t0", t0, "time translation");
  translate_cmd->add_option("--window", win_lo, "fit window lower radius");
  translate_cmd->add_option("--window-hi", win_hi, "fit window upper radius");

  auto* decayfit = app.add_subcommand("decayfit", "log-log decay slope");
  decayfit->add_option("--input", input_path, "CSV r,value");
  decayfit->add_option("--profile", profile_path, "profile CSV; fits l2 tails");
  decayfit->add_option("--r-lo", r_lo, "ladder start");
  decayfit->add_option("--r-hi", r_hi, "ladder end");
  decayfit->add_option("--points", points, "ladder size");

  auto* verify = app.add_subcommand("verify", "run acceptance suites");
  verify->add_option("suite", suite, "linear|fixpoint|dynamics|all")->required();
  verify->add_flag("--fast", fast, "trim free numerical parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") ? kExitOk
                                                                               : kExitUsage;
  }

  try {
    const json cfgj = load_config(common.config_path);
    (void)cfg_opt;
    if (construct->parsed() || translate_cmd->parsed()) {
      auto& opts = construct->parsed() ? fx_opts : fx_opts2;
      from_config(cfgj, "alpha", fx.alpha, opts["alpha"]);
      from_config(cfgj, "beta", fx.beta, opts["beta"]);
      from_config(cfgj, "c", fx.c, opts["c"]);
      from_config(cfgj, "R", fx.R_override, opts["R"]);
      from_config(cfgj, "tol", fx.tol, opts["tol"]);
      from_config(cfgj, "max_iters", fx.max_iters, opts["max_iters"]);
      from_config(cfgj, "T_extract", fx.T_extract, opts["T_extract"]);
      from_config(cfgj, "dt", fx.solve.dt, opts["dt"]);
      from_config(cfgj, "step", fx.solve.step, opts["step"]);
      from_config(cfgj, "r_max", fx.solve.r_max, opts["r_max"]);
      from_config(cfgj, "picard_iters", fx.solve.picard_iters, opts["picard_iters"]);
      from_config(cfgj, "interior_bump", fx.interior_bump, opts["interior_bump"]);
      from_config(cfgj, "kind", kind, opts["kind"]);
    }

    if (construct->parsed()) {
      from_config(cfgj, "order", order, order_opt);
      return cmd_construct(common, fx, kind, order);
    }
    if (evolve->parsed()) {
      from_config(cfgj, "kind", kind, ev_kind);
      from_config(cfgj, "R", scfg.R, ev_R);
      from_config(cfgj, "T", scfg.T, ev_T);
      from_config(cfgj, "dt", scfg.dt, ev_dt);
      from_config(cfgj, "r_max", scfg.r_max, ev_rmax);
      from_config(cfgj, "picard_iters", scfg.picard_iters, ev_picard);
      from_config(cfgj, "mask", mask_name, ev_mask);
      scfg.mask = (mask_name == "smooth") ? SolveConfig::Mask::smooth : SolveConfig::Mask::sharp;
      return cmd_evolve(common, profile_path, data_path, kind, scfg);
    }
    if (charnums->parsed())
      return cmd_charnums(common, data_path, ref_path, method, win_lo, win_hi);
    if (translate_cmd->parsed()) return cmd_translate(common, fx, kind, t0, win_lo, win_hi);
    if (decayfit->parsed())
      return cmd_decayfit(common, input_path, profile_path, r_lo, r_hi, points);
    if (verify->parsed()) return cmd_verify(suite, fast, common.seed);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NonContractionError& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const SolverDivergenceError& e) {
    std::cerr << "solver divergence: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ConvergenceError& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
