#include "bb84/commands.hpp"

#include "bb84/errors.hpp"
#include "bb84/infotheory.hpp"
#include "bb84/povm.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace bb84::cli {

namespace {

constexpr double kConjectureSlack = 1e-4;

Json record(const char* command, Json parameters, Json rows, Json provenance) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["parameters"] = std::move(parameters);
  j["rows"] = std::move(rows);
  j["provenance"] = std::move(provenance);
  return j;
}

Json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round12(x);
}

Json check_row(const char* quantity, double value, double tolerance, bool pass) {
  Json r;
  r["quantity"] = quantity;
  r["value"] = num(value);
  r["tolerance"] = num(tolerance);
  r["pass"] = pass;
  return r;
}

void require_epsilon(double eps, double lo, double hi, bool open_lo = false) {
  const bool ok = open_lo ? (eps > lo && eps <= hi) : (eps >= lo && eps <= hi);
  if (!ok) {
    throw OutOfRange("--epsilon " + format12(eps) + " must lie in " + (open_lo ? "(" : "[") +
                     format12(lo) + ", " + format12(hi) + "]");
  }
}

}  // namespace

double round12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  double out = 0.0;
  std::from_chars(buf, res.ptr, out);
  return out;
}

std::string format12(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

Json thresholds(std::span<const Curve> curves, double tolerance) {
  Json rows = Json::array();
  for (Curve c : curves) {
    const ThresholdResult r = find_threshold(c, tolerance);
    Json row;
    row["curve"] = curve_name(c);
    row["epsilon_star"] = num(r.epsilon_star);
    row["qber"] = num(r.qber());
    row["residual"] = num(r.residual);
    row["iterations"] = r.iterations;
    rows.push_back(std::move(row));
  }
  Json params;
  Json names = Json::array();
  for (Curve c : curves) names.push_back(curve_name(c));
  params["curves"] = std::move(names);
  params["tolerance"] = num(tolerance);
  Json prov;
  prov["root_finder"] = "bisection on I_AB - I_Eve over (0, 0.5)";
  prov["tolerance"] = num(tolerance);
  return record("thresholds", std::move(params), std::move(rows), std::move(prov));
}

std::string scan_csv(double start, double stop, double step) {
  if (!(start >= 0.0 && start < stop && stop <= 0.5 && step > 0.0)) {
    throw std::invalid_argument("scan: need 0 <= start < stop <= 0.5 and step > 0");
  }
  const std::vector<double> grid = make_grid(start, stop, step);
  std::string out = "epsilon,I_AB,I_honest,I_maxent,I_minconc,I_hsw,qber\n";
  for (const ScanRow& r : scan_curves(grid)) {
    for (double v : {r.epsilon, r.i_ab, r.honest, r.maxent, r.minconc, r.hsw}) {
      out += format12(v);
      out += ',';
    }
    out += format12(r.qber());
    out += '\n';
  }
  return out;
}

Json table(const TableArgs& args) {
  require_epsilon(args.epsilon, 0.0, 1.0);
  const double c22 = args.c22.value_or(curve_c22(Curve::MinConc, args.epsilon));
  const FamilyPoint point{args.epsilon, c22};
  const JointTable analytic = joint_table(bell_diagonal_state(point));

  std::optional<SampledTable> sampled;
  if (args.simulate) {
    if (*args.simulate == 0) throw std::invalid_argument("--simulate must be >= 1");
    sampled = simulate_raw_data(point, *args.simulate, args.seed);
  }

  Json rows = Json::array();
  double max_abs_z = 0.0;
  for (Outcome b : kOutcomes) {
    for (Outcome a : kOutcomes) {
      const auto bi = static_cast<std::size_t>(b);
      const auto ai = static_cast<std::size_t>(a);
      const double p = analytic.p[bi][ai];
      Json row;
      row["bob"] = outcome_name(b);
      row["alice"] = outcome_name(a);
      row["analytic"] = num(p);
      if (sampled) {
        const double n = static_cast<double>(sampled->n);
        const double freq = static_cast<double>(sampled->counts[bi][ai]) / n;
        const double sigma = std::sqrt(p * (1.0 - p) / n);
        row["count"] = sampled->counts[bi][ai];
        row["empirical"] = num(freq);
        if (sigma > 0.0) {
          const double z = (freq - p) / sigma;
          max_abs_z = std::max(max_abs_z, std::abs(z));
          row["z"] = num(z);
        } else {
          // Degenerate cell: any deviation is infinitely significant.
          row["z"] = freq == p ? Json(0.0) : Json(nullptr);
          if (freq != p) max_abs_z = std::numeric_limits<double>::infinity();
        }
      }
      rows.push_back(std::move(row));
    }
  }

  Json params;
  params["epsilon"] = num(args.epsilon);
  params["c22"] = num(c22);
  params["c22_default"] = !args.c22.has_value();
  if (sampled) params["simulate"] = *args.simulate;
  Json prov;
  prov["qber"] = num(0.5 * args.epsilon);
  prov["outcome_order"] = {"z+", "z-", "x+", "x-"};
  prov["indexing"] = "p[bob][alice], 1/4 from the random basis choice on each side";
  if (sampled) {
    prov["seed"] = args.seed;
    prov["rng"] = "mt19937_64, 53-bit uniform, inverse CDF";
    prov["max_abs_z"] = num(max_abs_z);
    prov["z_bound"] = 4;
    prov["all_within_bound"] = max_abs_z <= 4.0;
  }
  return record("table", std::move(params), std::move(rows), std::move(prov));
}

Json povm_check(const PovmCheckArgs& args) {
  const FamilyPoint point{args.epsilon, args.c22};
  require_feasible(point);
  const AncillaEnsemble ens = conditioned_ancilla(point);
  const Povm m = analytic_povm(point);
  const PovmResiduals res = povm_residuals(m);
  const double info = accessible_info(ens, m);
  const double analytic = mi_eve_analytic(point.c22);
  const Povm conj = conjugate_povm(m);
  const double conj_gap = std::abs(accessible_info(ens, conj) - info);
  double convex_gap = 0.0;
  for (int i = 1; i <= 9; ++i) {
    const double w = 0.1 * i;
    convex_gap = std::max(convex_gap,
                          std::abs(accessible_info(ens, convex_combine(m, conj, w)) - info));
  }
  const Povm canonical = convex_combine(m, conj, 0.5);
  const PovmResiduals canon_res = povm_residuals(canonical);

  Json rows = Json::array();
  rows.push_back(check_row("completeness_residual", res.completeness, 1e-9, res.completeness <= 1e-9));
  rows.push_back(check_row("min_eigenvalue", res.min_eigenvalue, -1e-10,
                           res.min_eigenvalue >= -1e-10));
  rows.push_back(check_row("closed_form_residual", std::abs(info - analytic), 1e-9,
                           std::abs(info - analytic) <= 1e-9));
  rows.push_back(check_row("conjugate_residual", conj_gap, 1e-9, conj_gap <= 1e-9));
  rows.push_back(check_row("convex_residual", convex_gap, 1e-9, convex_gap <= 1e-9));
  rows.push_back(check_row("canonical_imaginary", canon_res.max_imaginary, 1e-12,
                           canon_res.max_imaginary <= 1e-12));

  Json prov;
  if (args.optimize) {
    OptimizerConfig cfg;
    cfg.restarts = args.restarts;
    cfg.seed = args.seed;
    const OptimizerResult opt = optimize_povm(ens, cfg);
    const double gap = opt.value - analytic;
    rows.push_back(check_row("optimizer_gap", gap, 1e-5, std::abs(gap) <= 1e-5));
    prov["optimizer_best"] = num(opt.value);
    prov["optimizer_restarts"] = args.restarts;
    prov["optimizer_seed"] = args.seed;
    prov["optimizer_outcomes"] = cfg.outcome_budget;
  }
  bool all_pass = true;
  for (const auto& r : rows) all_pass = all_pass && r["pass"].get<bool>();

  Json canon = Json::array();
  for (std::size_t k = 0; k < canonical.size(); ++k) {
    Json element = Json::array();
    for (Eigen::Index i = 0; i < canonical.dim(); ++i) {
      Json row = Json::array();
      for (Eigen::Index j = 0; j < canonical.dim(); ++j) row.push_back(num(canonical.elements[k](i, j).real()));
      element.push_back(std::move(row));
    }
    canon.push_back(std::move(element));
  }

  Json params;
  params["epsilon"] = num(args.epsilon);
  params["c22"] = num(args.c22);
  params["optimize"] = args.optimize;
  prov["accessible_info"] = num(info);
  prov["analytic_info"] = num(analytic);
  prov["support_rank"] = static_cast<int>(std::lround(m.support.trace().real()));
  prov["canonical_povm"] = std::move(canon);
  prov["all_pass"] = all_pass;
  return record("povm-check", std::move(params), std::move(rows), std::move(prov));
}

Json search_nonsym(const SearchArgs& args) {
  require_epsilon(args.epsilon, 0.0, 1.0, /*open_lo=*/true);
  if (args.trials < 1) throw std::invalid_argument("--trials must be >= 1");
  SearchConfig cfg;
  cfg.restarts = args.restarts;
  const SearchReport rep = nonsymmetric_search(args.epsilon, args.trials, args.seed, cfg);

  static constexpr const char* kNames[7] = {"c02", "c20", "c12", "c21", "c22", "c23", "c32"};
  auto params_json = [](const std::array<double, 7>& p) {
    Json j;
    for (std::size_t i = 0; i < 7; ++i) j[kNames[i]] = num(p[i]);
    return j;
  };

  Json row;
  row["epsilon"] = num(rep.epsilon);
  row["qber"] = num(0.5 * rep.epsilon);
  row["trials"] = rep.trials;
  row["best_value"] = num(rep.best_value);
  row["best_parameters"] = params_json(rep.best_parameters);
  row["symmetric_optimum"] = num(rep.symmetric_optimum);
  row["excess"] = num(rep.excess());
  row["within_slack"] = rep.excess() <= kConjectureSlack;
  row["near_symmetric"] = rep.near_symmetric;
  row["rejected"] = rep.rejected;
  Json rows = Json::array();
  rows.push_back(std::move(row));

  Json params;
  params["epsilon"] = num(args.epsilon);
  params["trials"] = args.trials;
  params["seed"] = args.seed;
  params["restarts"] = args.restarts;
  Json prov;
  prov["seed"] = args.seed;
  prov["slack"] = num(kConjectureSlack);
  prov["sampler"] = "hit-and-run on the positive set, alternating with local perturbations";
  prov["local_scale"] = num(cfg.local_scale);
  prov["optimizer_restarts"] = args.restarts;
  Json out = record("search-nonsym", std::move(params), std::move(rows), std::move(prov));
  if (args.include_log) {
    Json log = Json::array();
    for (std::size_t i = 0; i < rep.log.size(); ++i) {
      Json t;
      t["index"] = i;
      t["local"] = rep.log[i].local;
      t["value"] = num(rep.log[i].value);
      t["parameters"] = params_json(rep.log[i].parameters);
      log.push_back(std::move(t));
    }
    out["log"] = std::move(log);
  }
  return out;
}

namespace {

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + path);
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Eavesdropping analysis of BB84 raw data under partial tomography"};
  app.name("bb84raw");
  app.require_subcommand(1);

  std::string out_path;

  auto* th = app.add_subcommand("thresholds", "Noise thresholds where Eve's information reaches I_AB");
  bool all_curves = false;
  std::vector<std::string> curve_names;
  double tolerance = 1e-12;
  auto* all_opt = th->add_flag("--all", all_curves, "All four curves (the default)");
  th->add_option("--curve", curve_names, "Curve(s): honest, maxent, minconc, hsw")
      ->check(CLI::IsMember({"honest", "maxent", "minconc", "hsw"}))
      ->excludes(all_opt);
  th->add_option("--tol", tolerance, "Bisection tolerance on epsilon and residual (>= 1e-12)")
      ->check(CLI::Range(1e-12, 0.1));
  th->add_option("--out", out_path, "Write JSON here instead of stdout");

  auto* sc = app.add_subcommand("scan", "CSV of I_AB and Eve's curves over an epsilon grid");
  double start = 0.0, stop = 0.5, step = 0.01;
  sc->add_option("--start", start, "First epsilon (>= 0)")->capture_default_str();
  sc->add_option("--stop", stop, "Last epsilon (<= 0.5)")->capture_default_str();
  sc->add_option("--step", step, "Grid spacing (> 0)")->capture_default_str();
  sc->add_option("--out", out_path, "Write CSV here instead of stdout");

  auto* tb = app.add_subcommand("table", "Alice/Bob joint probability table");
  TableArgs targs;
  std::uint64_t simulate = 0;
  tb->add_option("--epsilon", targs.epsilon, "Noise parameter in [0, 1]")->required();
  auto* c22_opt = tb->add_option("--c22", "c22 of the Bell-diagonal state (default: minimum |c22|)");
  auto* sim_opt = tb->add_option("--simulate", simulate, "Also sample this many raw-data pairs");
  tb->add_option("--seed", targs.seed, "Sampler seed")->capture_default_str();
  tb->add_option("--out", out_path, "Write JSON here instead of stdout");

  auto* pc = app.add_subcommand("povm-check", "Validate the analytic measurement at (epsilon, c22)");
  PovmCheckArgs pargs;
  pc->add_option("--epsilon", pargs.epsilon, "Noise parameter in [0, 1]")->required();
  auto* pc_c22 = pc->add_option("--c22", "c22 (default: minimum |c22|)");
  pc->add_flag("--optimize", pargs.optimize, "Also run the numerical POVM optimizer");
  pc->add_option("--restarts", pargs.restarts, "Optimizer restarts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  pc->add_option("--seed", pargs.seed, "Optimizer seed")->capture_default_str();
  pc->add_option("--out", out_path, "Write JSON here instead of stdout");

  auto* sn = app.add_subcommand("search-nonsym", "Search nonsymmetric states for more information");
  SearchArgs sargs;
  sn->add_option("--epsilon", sargs.epsilon, "Noise parameter in (0, 1]")->required();
  sn->add_option("--trials", sargs.trials, "Accepted samples")->check(CLI::PositiveNumber)->capture_default_str();
  sn->add_option("--seed", sargs.seed, "Sampler and optimizer seed")->capture_default_str();
  sn->add_option("--restarts", sargs.restarts, "Optimizer restarts per sample")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sn->add_flag("--log", sargs.include_log, "Include every trial in the output");
  sn->add_option("--out", out_path, "Write JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (th->parsed()) {
      std::vector<Curve> curves;
      for (const auto& n : curve_names) curves.push_back(*parse_curve(n));
      if (curves.empty()) curves.assign(kCurves.begin(), kCurves.end());
      emit(dump(thresholds(curves, tolerance)), out_path, out);
    } else if (sc->parsed()) {
      emit(scan_csv(start, stop, step), out_path, out);
    } else if (tb->parsed()) {
      if (c22_opt->count() > 0) targs.c22 = c22_opt->as<double>();
      if (sim_opt->count() > 0) targs.simulate = simulate;
      emit(dump(table(targs)), out_path, out);
    } else if (pc->parsed()) {
      require_epsilon(pargs.epsilon, 0.0, 1.0);
      pargs.c22 = pc_c22->count() > 0 ? pc_c22->as<double>()
                                      : curve_c22(Curve::MinConc, pargs.epsilon);
      emit(dump(povm_check(pargs)), out_path, out);
    } else if (sn->parsed()) {
      emit(dump(search_nonsym(sargs)), out_path, out);
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::logic_error& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace bb84::cli
