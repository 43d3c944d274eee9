// stam: entropy-power set functions of subset sums, cone-membership
// certificates, and region constructions. JSON report on stdout, human
// summary on stderr. Exit codes: 0 = all checks hold, 2 = a sought
// violation was found (success for counterexample-style commands),
// 1 = usage or input error.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "stam/density1d.hpp"
#include "stam/explorer.hpp"
#include "stam/fractional_partition.hpp"
#include "stam/gaussian.hpp"
#include "stam/io.hpp"
#include "stam/piecewise.hpp"
#include "stam/repro.hpp"
#include "stam/set_function.hpp"
#include "stam/version.hpp"

namespace {

using stam::json;

constexpr int kExitHolds = 0;
constexpr int kExitError = 1;
constexpr int kExitViolation = 2;

struct GlobalOptions {
  int threads = 0;
  std::uint64_t seed = 20250810ULL;
  bool seed_set = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load_json(const std::string& path, std::string& digest_bytes) {
  const std::string bytes = read_file(path);
  digest_bytes += bytes;
  return json::parse(bytes);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  if (out.empty()) throw std::runtime_error("empty numeric list");
  return out;
}

struct Reporter {
  std::string command;
  std::string inputs;
  json body = json::object();
  std::vector<stam::PropertyReport> checks;
  bool violation_found = false;

  explicit Reporter(std::string cmd) : command(std::move(cmd)) {}

  void add_check(const stam::PropertyReport& rep) {
    checks.push_back(rep);
    if (!rep.holds) violation_found = true;
  }

  int emit(const GlobalOptions& g) {
    const int code = violation_found ? kExitViolation : kExitHolds;
    json j = json::object();
    j["command"] = command;
    j["version"] = stam::kVersion;
    j["inputs_digest"] = stam::digest_hex(inputs);
    j["seed"] = g.seed;
    j["threads"] = g.threads;
    for (const auto& [key, val] : body.items()) j[key] = val;
    if (!checks.empty()) {
      json arr = json::array();
      for (const auto& rep : checks) arr.push_back(stam::report_to_json(rep));
      j["checks"] = arr;
    }
    j["exit"] = code;
    std::cout << stam::dump_json(j) << "\n";
    for (const auto& rep : checks)
      std::cerr << (rep.holds ? "holds " : "VIOLATED ") << rep.property
                << " (margin " << rep.margin << ")\n";
    return code;
  }
};

double effective_tol(double tol, bool rel, const stam::SetFunction& v) {
  return rel ? tol * std::abs(v.full_value()) : tol;
}

json criterion_to_json(const stam::CriterionResult& c) {
  json j{{"id", c.id},
         {"name", c.name},
         {"pass", c.pass},
         {"violation_expected", c.violation_expected},
         {"elapsed_seconds", c.elapsed_seconds},
         {"runtime_cap_seconds", c.runtime_cap_seconds},
         {"notes", c.notes}};
  if (!c.metrics.empty()) j["metrics"] = c.metrics;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entropy-power set functions of subset sums: exact Gaussian "
               "ensembles, 1-D density numerics, and cone-membership "
               "certificates"};
  app.set_version_flag("--version", stam::kVersion);
  app.require_subcommand(1);

  GlobalOptions g;
  if (const char* env = std::getenv("STAM_SEED")) g.seed = std::strtoull(env, nullptr, 10);
  if (const char* env = std::getenv("STAM_THREADS")) g.threads = std::atoi(env);
  app.add_option("--threads", g.threads, "worker cap (0 = hardware)");
  auto* seed_opt = app.add_option("--seed", g.seed, "master random seed");

  // ---- setfn checks ----------------------------------------------------
  std::string setfn_path;
  double tol = 1e-9;
  bool rel = false;
  bool local_form = false;
  std::string lp_mode = "auto";

  auto* fsa = app.add_subcommand("check-fsa",
                                 "fractional superadditivity of a set function");
  fsa->add_option("setfn", setfn_path, "set function JSON")->required();
  fsa->add_option("--tol", tol, "tolerance");
  fsa->add_flag("--rel", rel, "tolerance relative to v([n])");
  fsa->add_option("--mode", lp_mode, "auto | exact | simplex");

  auto* supmod = app.add_subcommand("check-supermodular",
                                    "supermodularity of a set function");
  supmod->add_option("setfn", setfn_path, "set function JSON")->required();
  supmod->add_option("--tol", tol, "tolerance");
  supmod->add_flag("--rel", rel, "tolerance relative to v([n])");
  supmod->add_flag("--local", local_form, "also run the local i,j form");

  auto* sublog = app.add_subcommand(
      "check-submodular-log", "product-form entropy submodularity (n = 3)");
  sublog->add_option("setfn", setfn_path, "set function JSON")->required();
  sublog->add_option("--tol", tol, "tolerance");

  int ground_n = 3;
  auto* extreme = app.add_subcommand("extreme-partitions",
                                     "exact extreme fractional partitions");
  extreme->add_option("-n", ground_n, "ground set size (<= 6)")->required();
  extreme->add_flag("--exact", "exact rational mode (always on)");

  // ---- gauss -----------------------------------------------------------
  auto* gauss = app.add_subcommand("gauss", "Gaussian ensembles");
  gauss->require_subcommand(1);
  std::string ens_path;
  bool with_constant = false;
  auto* gnu = gauss->add_subcommand("nu", "det-root set function of an ensemble");
  gnu->add_option("ensemble", ens_path, "ensemble JSON")->required();
  gnu->add_flag("--constant", with_constant, "multiply by 2 pi e");

  double eps = 0.1;
  auto* gcounter = gauss->add_subcommand(
      "counterexample", "diagonal family violating supermodularity");
  gcounter->add_option("--eps", eps, "perturbation size");

  int search_d = 2, search_n = 3, search_iters = 10000;
  auto* gsearch = gauss->add_subcommand(
      "search", "randomized search for supermodularity violations");
  gsearch->add_option("--d", search_d, "dimension");
  gsearch->add_option("--n", search_n, "number of matrices");
  gsearch->add_option("--iters", search_iters, "total proposals");

  auto* gequal = gauss->add_subcommand(
      "equality", "pairwise EPI equality diagnostic");
  gequal->add_option("ensemble", ens_path, "ensemble JSON")->required();
  gequal->add_option("--tol", tol, "tolerance");

  // ---- density ---------------------------------------------------------
  auto* density = app.add_subcommand("density", "1-D grid densities");
  density->require_subcommand(1);
  std::vector<std::string> density_paths;
  auto* dnu = density->add_subcommand("nu", "entropy powers of subset sums");
  dnu->add_option("densities", density_paths, "density JSON files")
      ->required()
      ->expected(1, 8);
  std::string density_path;
  auto* dent = density->add_subcommand("entropy", "differential entropy (nats)");
  dent->add_option("density", density_path, "density JSON")->required();
  auto* dfish = density->add_subcommand("fisher", "Fisher information");
  dfish->add_option("density", density_path, "density JSON")->required();

  // ---- bc / debruijn / qsup --------------------------------------------
  std::string weights_text;
  bool verify = false;
  auto* bc = app.add_subcommand(
      "bc", "dyadic-mixture self-convolution entropy (closed form)");
  bc->add_option("--weights", weights_text, "comma list, sums to 1")->required();
  bc->add_flag("--verify", verify, "cross-check against the exact oracle");

  std::string eps_text = "1e-3";
  auto* debruijn = app.add_subcommand(
      "debruijn", "smoothing-derivative slopes vs Fisher information");
  debruijn->add_option("density", density_path, "density JSON")->required();
  debruijn->add_option("--eps", eps_text, "comma list of variances");

  std::vector<std::string> qsup_paths;
  auto* qsup = app.add_subcommand(
      "qsup", "N(X+Y+Z) + N(X) - N(X+Y) - N(X+Z), pivot first");
  qsup->add_option("densities", qsup_paths, "X.json Y.json Z.json")
      ->required()
      ->expected(3);

  // ---- explorer ---------------------------------------------------------
  std::vector<std::string> stack_paths;
  int stack_m = 1, stack_l = 1;
  auto* stack = app.add_subcommand("stack", "weighted geometric mean of points");
  stack->add_option("points", stack_paths, "a.json b.json")->required()->expected(2);
  stack->add_option("-m", stack_m, "copies of the first point");
  stack->add_option("-l", stack_l, "copies of the second point");

  double u1 = 1.0, u2 = 1.0, cbound = 10.0;
  auto* dim2 = app.add_subcommand("dim2-ray",
                                  "construct (u1, u2, >= C) with densities");
  dim2->add_option("--u1", u1, "first entropy power");
  dim2->add_option("--u2", u2, "second entropy power");
  dim2->add_option("--C", cbound, "pair-sum entropy power to exceed");

  double ga = 1.0, gb = 1.0, gc = 1.0;
  auto* dim3 = app.add_subcommand("dim3-gap",
                                  "ray vs singleton report for n = 3");
  dim3->add_option("--a", ga, "first singleton value");
  dim3->add_option("--b", gb, "second singleton value");
  dim3->add_option("--c", gc, "third singleton value");

  std::string family = "smoothed-laplace";
  int probe_steps = 4;
  double probe_scale = 1.0, probe_smoothing = 0.04;
  auto* niprobe = app.add_subcommand("ni-probe",
                                     "N*I along standardized self-convolutions");
  niprobe->add_option("--family", family, "smoothed-laplace | gaussian");
  niprobe->add_option("--steps", probe_steps, "self-convolutions (<= 6)");
  niprobe->add_option("--scale", probe_scale, "family scale parameter");
  niprobe->add_option("--smoothing", probe_smoothing, "smoothing variance");

  // ---- repro ------------------------------------------------------------
  std::string target = "all";
  bool quick = false;
  std::string json_dir;
  auto* repro = app.add_subcommand("repro", "pinned reproduction suites");
  repro->add_option("target", target, "thm1|thm2|thm3|thm4|thm5|prop-no|all");
  repro->add_option("--eps", eps, "eps for the thm2 counterexample");
  repro->add_flag("--quick", quick, "halved grids, doubled tolerances");
  repro->add_option("--json", json_dir, "write one report file per criterion");

  CLI11_PARSE(app, argc, argv);
  if (!seed_opt->empty()) g.seed_set = true;
  if (g.threads > 0)
    setenv("STAM_THREADS", std::to_string(g.threads).c_str(), 1);

  try {
    if (*fsa) {
      Reporter rep("check-fsa");
      const stam::SetFunction v =
          stam::set_function_from_json(load_json(setfn_path, rep.inputs));
      const stam::LpMode mode = lp_mode == "exact" ? stam::LpMode::extreme_points
                                : lp_mode == "simplex" ? stam::LpMode::simplex
                                                       : stam::LpMode::automatic;
      rep.add_check(stam::check_fsa(v, effective_tol(tol, rel, v), mode));
      return rep.emit(g);
    }
    if (*supmod) {
      Reporter rep("check-supermodular");
      const stam::SetFunction v =
          stam::set_function_from_json(load_json(setfn_path, rep.inputs));
      const double t = effective_tol(tol, rel, v);
      rep.add_check(stam::check_supermodular(v, t));
      if (local_form) rep.add_check(stam::check_supermodular_local(v, t));
      return rep.emit(g);
    }
    if (*sublog) {
      Reporter rep("check-submodular-log");
      const stam::SetFunction v =
          stam::set_function_from_json(load_json(setfn_path, rep.inputs));
      rep.add_check(stam::check_submodular_log(v, tol));
      return rep.emit(g);
    }
    if (*extreme) {
      Reporter rep("extreme-partitions");
      const auto vertices = stam::enumerate_extreme_partitions(ground_n, g.threads);
      json arr = json::array();
      for (const auto& beta : vertices) arr.push_back(stam::partition_to_json(beta));
      rep.body["n"] = ground_n;
      rep.body["count"] = vertices.size();
      rep.body["extreme_partitions"] = arr;
      std::cerr << vertices.size() << " extreme partitions for n=" << ground_n
                << "\n";
      return rep.emit(g);
    }
    if (*gnu) {
      Reporter rep("gauss nu");
      const stam::GaussianEnsemble ens =
          stam::ensemble_from_json(load_json(ens_path, rep.inputs));
      rep.body["nu"] =
          stam::set_function_to_json(stam::nu_gaussian(ens, with_constant));
      return rep.emit(g);
    }
    if (*gcounter) {
      Reporter rep("gauss counterexample");
      const stam::CounterexampleResult res =
          stam::supermodularity_counterexample(eps);
      rep.body["eps"] = eps;
      rep.body["ensemble"] = stam::ensemble_to_json(res.ensemble);
      rep.body["nu"] = stam::set_function_to_json(res.nu);
      rep.body["gap"] = res.gap;
      rep.add_check(stam::check_supermodular(res.nu, 0.0));
      std::cerr << "supermodularity gap " << res.gap
                << (res.gap > 0 ? " (violated)" : "") << "\n";
      return rep.emit(g);
    }
    if (*gsearch) {
      Reporter rep("gauss search");
      const stam::SearchResult res = stam::search_supermodularity_violation(
          search_d, search_n, g.seed, search_iters, g.threads);
      rep.body["ensemble"] = stam::ensemble_to_json(res.ensemble);
      rep.body["gap"] = res.gap;
      rep.body["worst_pair"] =
          json{{"s", stam::format_subset(res.worst.s)},
               {"t", stam::format_subset(res.worst.t)}};
      rep.add_check(stam::check_supermodular(stam::nu_gaussian(res.ensemble), 0.0));
      std::cerr << "best violation gap " << res.gap << "\n";
      return rep.emit(g);
    }
    if (*gequal) {
      Reporter rep("gauss equality");
      const stam::GaussianEnsemble ens =
          stam::ensemble_from_json(load_json(ens_path, rep.inputs));
      const stam::EpiEqualityReport diag = stam::epi_equality_diagnostic(ens, tol);
      json pairs = json::array();
      for (const auto& p : diag.pairs)
        pairs.push_back(json{{"i", p.i},
                             {"j", p.j},
                             {"additivity_gap", p.additivity_gap},
                             {"additive", p.additive},
                             {"proportional", p.proportional}});
      rep.body["pairs"] = pairs;
      rep.body["all_additive"] = diag.all_additive;
      rep.body["all_proportional"] = diag.all_proportional;
      rep.body["total_gap"] = diag.total_gap;
      return rep.emit(g);
    }
    if (*dnu) {
      Reporter rep("density nu");
      std::vector<stam::GridDensity> fs;
      for (const std::string& path : density_paths)
        fs.push_back(stam::density_from_json(load_json(path, rep.inputs)));
      const stam::SetFunction nu = stam::nu_from_densities(fs);
      rep.body["nu"] = stam::set_function_to_json(nu);
      rep.add_check(stam::check_fsa(nu, 1e-4 * nu.full_value()));
      return rep.emit(g);
    }
    if (*dent) {
      Reporter rep("density entropy");
      const stam::GridDensity f =
          stam::density_from_json(load_json(density_path, rep.inputs));
      rep.body["entropy_nats"] = stam::entropy(f);
      rep.body["entropy_power"] = stam::entropy_power(f);
      return rep.emit(g);
    }
    if (*dfish) {
      Reporter rep("density fisher");
      const stam::GridDensity f =
          stam::density_from_json(load_json(density_path, rep.inputs));
      rep.body["fisher_information"] = stam::fisher_information(f);
      rep.body["fisher_information_ratio_form"] =
          stam::fisher_information_ratio_form(f);
      rep.body["ni_product"] = stam::ni_product(f);
      return rep.emit(g);
    }
    if (*bc) {
      Reporter rep("bc");
      const stam::BcWeights w(parse_double_list(weights_text));
      const double formula = stam::bc_entropy_formula(w);
      rep.body["weights"] = w.a;
      rep.body["formula_nats"] = formula;
      rep.body["entropy_power"] = std::exp(2.0 * formula);
      if (verify) {
        const double oracle = stam::bc_selfconv_entropy_exact(w);
        rep.body["oracle_nats"] = oracle;
        stam::PropertyReport check;
        check.property = "bc-formula-vs-exact-oracle";
        check.margin = 1e-9 - std::abs(formula - oracle);
        check.holds = std::abs(formula - oracle) <= 1e-9;
        if (!check.holds) check.certificate = stam::PivotCert{0};
        rep.add_check(check);
      }
      std::cerr << "h(X+X') = " << formula << " nats\n";
      return rep.emit(g);
    }
    if (*debruijn) {
      Reporter rep("debruijn");
      const stam::GridDensity f =
          stam::density_from_json(load_json(density_path, rep.inputs));
      const std::vector<double> eps_list = parse_double_list(eps_text);
      const stam::DeBruijnReport res = stam::de_bruijn_check(f, eps_list);
      rep.body["entropy"] = res.entropy;
      rep.body["entropy_power"] = res.epower;
      rep.body["fisher"] = res.fisher;
      rep.body["half_fisher"] = res.half_fisher;
      rep.body["ni"] = res.ni;
      json rows = json::array();
      for (const auto& row : res.rows)
        rows.push_back(json{{"eps", row.eps},
                            {"slope_h", row.slope_h},
                            {"slope_n", row.slope_n}});
      rep.body["rows"] = rows;
      return rep.emit(g);
    }
    if (*qsup) {
      Reporter rep("qsup");
      std::vector<stam::GridDensity> fs;
      for (const std::string& path : qsup_paths)
        fs.push_back(stam::density_from_json(load_json(path, rep.inputs)));
      const double gap = stam::q_sup_gap(fs[0], fs[1], fs[2]);
      rep.body["gap"] = gap;
      stam::PropertyReport check;
      check.property = "entropy-power-supermodularity-instance";
      check.margin = gap;
      check.holds = gap >= 0.0;
      if (!check.holds) check.certificate = stam::SubsetPairCert{0b011, 0b101};
      rep.add_check(check);
      std::cerr << "gap = " << gap << "\n";
      return rep.emit(g);
    }
    if (*stack) {
      Reporter rep("stack");
      auto parse_point = [&](const std::string& path) {
        const json j = load_json(path, rep.inputs);
        const int dim = j.contains("dim") ? j.at("dim").get<int>() : 1;
        return stam::StamPoint{
            stam::set_function_from_json(j.contains("u") ? j.at("u") : j), dim,
            stam::Provenance::synthetic, ""};
      };
      const stam::StamPoint a = parse_point(stack_paths[0]);
      const stam::StamPoint b = parse_point(stack_paths[1]);
      const stam::StamPoint out = stam::stack_points(a, b, stack_m, stack_l);
      rep.body["stacked"] = stam::stam_point_to_json(out);
      const double md = static_cast<double>(stack_m) * a.dim;
      rep.body["lambda"] = md / (md + static_cast<double>(stack_l) * b.dim);
      return rep.emit(g);
    }
    if (*dim2) {
      Reporter rep("dim2-ray");
      const stam::Dim2RayResult res = stam::dim2_ray_construct(u1, u2, cbound);
      rep.body["achieved"] = stam::stam_point_to_json(res.achieved);
      rep.body["smoothing_variance"] = res.smoothing_variance;
      rep.body["weight_count"] = res.weight_count;
      rep.body["gaussian_fast_path"] = res.gaussian_fast_path;
      rep.body["x"] = stam::density_to_json(res.x);
      rep.body["y"] = stam::density_to_json(res.y);
      std::cerr << "achieved (" << res.achieved.u.value(1) << ", "
                << res.achieved.u.value(2) << ", " << res.achieved.u.value(3)
                << ")\n";
      return rep.emit(g);
    }
    if (*dim3) {
      Reporter rep("dim3-gap");
      const stam::Dim3GapReport res = stam::dim3_gap_report(ga, gb, gc);
      rep.body["fsa_ray"] = json{{"min", res.fsa_ray_min}, {"max", "inf"}};
      rep.body["stam_value"] = res.stam_value;
      rep.body["witness_nu"] = stam::set_function_to_json(res.witness_nu);
      rep.body["witness_max_error"] = res.witness_max_error;
      rep.body["witness_ok"] = res.witness_ok;
      std::cerr << "admissible triple-sum: ray [" << res.fsa_ray_min
                << ", inf) vs forced value " << res.stam_value << "\n";
      return rep.emit(g);
    }
    if (*niprobe) {
      Reporter rep("ni-probe");
      const stam::GridDensity f =
          family == "gaussian"
              ? stam::GridDensity::gaussian(probe_scale)
              : stam::smoothed_laplace(probe_scale, probe_smoothing);
      const auto steps = stam::ni_monotonicity_probe(f, probe_steps);
      json rows = json::array();
      for (const auto& s : steps)
        rows.push_back(json{{"entropy_power", s.epower},
                            {"fisher", s.fisher},
                            {"ni", s.ni}});
      rep.body["family"] = family;
      rep.body["steps"] = rows;
      rep.body["two_pi_e"] = stam::kTwoPiE;
      return rep.emit(g);
    }
    if (*repro) {
      Reporter rep("repro " + target);
      stam::ReproOptions opt;
      opt.quick = quick;
      opt.seed = g.seed;
      opt.threads = g.threads;
      std::vector<stam::CriterionResult> results;
      if (target == "thm2") {
        results.push_back(stam::criterion_counterexample_eps(opt, eps));
        results.push_back(stam::criterion_trace_example(opt));
      } else {
        results = stam::run_criteria(stam::criteria_for_target(target), opt);
      }
      bool all_pass = true;
      bool any_violation = false;
      json arr = json::array();
      for (const auto& c : results) {
        all_pass = all_pass && c.pass;
        any_violation = any_violation || (c.pass && c.violation_expected);
        arr.push_back(criterion_to_json(c));
        std::cerr << (c.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": "
                  << c.name << " (" << c.elapsed_seconds << " s)\n";
        if (!json_dir.empty()) {
          std::filesystem::create_directories(json_dir);
          char name[32];
          std::snprintf(name, sizeof(name), "criterion_%02d.json", c.id);
          std::ofstream out(std::filesystem::path(json_dir) / name);
          out << stam::dump_json(criterion_to_json(c)) << "\n";
        }
      }
      rep.body["criteria"] = arr;
      rep.body["all_pass"] = all_pass;
      const int code = !all_pass ? kExitError
                       : (any_violation && target != "all") ? kExitViolation
                                                            : kExitHolds;
      json j = json::object();
      j["command"] = rep.command;
      j["version"] = stam::kVersion;
      j["inputs_digest"] = stam::digest_hex(rep.inputs);
      j["seed"] = g.seed;
      j["threads"] = g.threads;
      for (const auto& [key, val] : rep.body.items()) j[key] = val;
      j["exit"] = code;
      std::cout << stam::dump_json(j) << "\n";
      return code;
    }
  } catch (const std::exception& e) {
    json err{{"command", app.get_subcommands().empty()
                             ? "?"
                             : app.get_subcommands()[0]->get_name()},
             {"error", e.what()},
             {"exit", kExitError}};
    std::cout << stam::dump_json(err) << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
