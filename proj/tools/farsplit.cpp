// farsplit: synthesize, split, complete, analyze and verify far fields.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "farsplit/bounds.hpp"
#include "farsplit/io.hpp"
#include "farsplit/picard.hpp"
#include "farsplit/split_l1.hpp"
#include "farsplit/split_ls.hpp"
#include "farsplit/suites.hpp"
#include "farsplit/synth.hpp"

namespace fs = std::filesystem;
using namespace farsplit;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitVerification = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_text(path, text);
}

struct SplitOptions {
  std::string scene;
  std::string gamma;
  std::string config;
  std::string method = "ls";
  std::string out = ".";
  std::optional<double> mu;
  std::optional<int> iters;
  std::optional<double> tol;
  std::optional<int> window;
  std::string weights;
  std::string format;
};

void add_split_options(CLI::App* cmd, SplitOptions& o) {
  cmd->add_option("--scene", o.scene, "Scene JSON (geometry and, without --gamma, the data)");
  cmd->add_option("--gamma", o.gamma, "Measured far field CSV (t,re,im)");
  cmd->add_option("--config", o.config, "Experiment configuration JSON");
  cmd->add_option("--method", o.method, "ls or l1")->check(CLI::IsMember({"ls", "l1"}));
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--mu", o.mu, "l1 regularization parameter");
  cmd->add_option("--iters", o.iters, "l1 iteration limit");
  cmd->add_option("--tol", o.tol, "l1 relative step tolerance");
  cmd->add_option("--window", o.window, "l1 coefficient window |n| <= window");
  cmd->add_option("--weights", o.weights, "l1 weights: uniform, auto, triangle or a list a1,a2,...");
  cmd->add_option("--format", o.format, "Run summary on stdout: json or csv")->check(CLI::IsMember({"json", "csv"}));
}

int run_split(SplitOptions o, bool complete) {
  ExperimentConfig cfg;
  if (!o.config.empty()) {
    cfg = read_config(o.config);
    const auto base = fs::path(o.config).parent_path();
    auto rel = [&](const std::string& p) { return p.empty() || fs::path(p).is_absolute() ? p : (base / p).string(); };
    cfg.scene = rel(cfg.scene);
    cfg.gamma = rel(cfg.gamma);
  }
  if (!o.scene.empty()) cfg.scene = o.scene;
  if (!o.gamma.empty()) cfg.gamma = o.gamma;
  if (o.config.empty() || o.method != "ls") cfg.method = o.method == "l1" ? Method::l1 : Method::ls;
  if (o.out != "." || o.config.empty()) cfg.output = o.out;
  if (o.mu) cfg.l1.mu = *o.mu;
  if (o.iters) cfg.l1.max_iters = *o.iters;
  if (o.tol) cfg.l1.tol = *o.tol;
  if (o.window) cfg.l1.window = *o.window;
  if (!o.format.empty()) cfg.format = o.format;
  if (!o.weights.empty()) {
    try {
      apply_weights(cfg.l1, o.weights);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (cfg.scene.empty()) throw UsageError("--scene or --config is required");

  const Scene scene = read_scene(cfg.scene);
  const SplitGeometry g = scene_geometry(scene);
  if (complete && g.omega.empty()) throw UsageError("complete: the scene has no missing arc (omega)");
  FarField gamma = cfg.gamma.empty() ? scene_farfield(scene).gamma : read_farfield_csv(cfg.gamma);
  if (!(gamma.grid() == g.grid)) throw UsageError("data grid does not match the scene grid_size");
  gamma = mask(gamma, g.omega, Region::outside);

  fs::create_directories(cfg.output);
  const fs::path out(cfg.output);
  SplitSolution sol;
  if (cfg.method == Method::ls) {
    sol = split_ls(gamma, g);
  } else {
    const auto r = fista_split(gamma, g, cfg.l1);
    sol = r.solution;
    write_text((out / "trace.csv").string(), trace_csv(r.trace));
  }
  write_text((out / "solution.json").string(), solution_to_json(sol, g).dump(2) + "\n");
  for (int i = 0; i < g.components(); ++i)
    write_farfield_csv((out / ("component_" + std::to_string(i + 1) + ".csv")).string(),
                       component_field(sol.alphas[i], g.centers[i], g.k, g.grid));
  write_farfield_csv((out / "beta.csv").string(), sol.beta);
  if (complete) write_farfield_csv((out / "completed.csv").string(), gamma - sol.beta);
  const auto& d = sol.diagnostics;
  if (cfg.format == "csv") {
    std::cout << "method,residual,condition_number,iterations,objective\n"
              << d.method << "," << format_double(sol.residual) << "," << format_double(d.condition_number) << ","
              << d.iterations << "," << format_double(d.objective) << "\n";
  } else {
    std::cout << json{{"method", d.method},
                      {"residual", sol.residual},
                      {"condition_number", d.condition_number},
                      {"iterations", d.iterations},
                      {"objective", d.objective}}
                     .dump()
              << "\n";
  }
  return 0;
}

std::string bounds_table(const BoundInputs& base) {
  std::string s = "theorem,feasible,constant,rhs\n";
  for (auto id : all_theorems()) {
    try {
      const auto r = evaluate_bound(id, base);
      s += std::string(theorem_name(id)) + "," + (r.hypotheses_ok ? "true" : "false") + "," +
           format_double(r.constant) + "," + format_double(r.rhs) + "\n";
    } catch (const std::invalid_argument&) {
      s += std::string(theorem_name(id)) + ",unavailable,nan,nan\n";
    }
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Far field splitting, completion and stability bounds"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Synthesize the measured far field of a scene");
  std::string synth_scene, synth_out, synth_clean, synth_truth;
  synth->add_option("--scene", synth_scene, "Scene JSON")->required();
  synth->add_option("--out", synth_out, "Far field CSV (default: stdout)");
  synth->add_option("--clean", synth_clean, "Noise-free full-circle far field CSV");
  synth->add_option("--truth", synth_truth, "Ground truth component coefficients JSON");

  // split / complete
  SplitOptions split_opts, complete_opts;
  auto* split = app.add_subcommand("split", "Split a far field into its components");
  add_split_options(split, split_opts);
  auto* complete = app.add_subcommand("complete", "Restore the missing arc and split");
  add_split_options(complete, complete_opts);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Singular values and stability bounds");
  analyze->require_subcommand(1);
  auto* svd = analyze->add_subcommand("svd", "Squared singular values s_n^2(R) as CSV");
  double svd_R = 10.0;
  std::optional<int> svd_nmax;
  std::optional<double> svd_ratio;
  std::string svd_out;
  svd->add_option("--R", svd_R, "Radius (in wavelengths / 2 pi)")->required();
  svd->add_option("--nmax", svd_nmax, "Largest order (default 3R + 50)");
  svd->add_option("--ratio", svd_ratio, "Power ratio p/P: also report the threshold order N");
  svd->add_option("--out", svd_out, "CSV path (default: stdout)");
  auto* bnd = analyze->add_subcommand("bounds", "Evaluate every estimate for a scene as CSV");
  std::string bnd_scene, bnd_out, bnd_weights = "pairwise", bnd_sign = "printed";
  double bnd_delta = 0.0, bnd_perturbation = 0.0, bnd_tau = 1.0;
  std::vector<double> bnd_l0;
  bnd->add_option("--scene", bnd_scene, "Scene JSON")->required();
  bnd->add_option("--delta", bnd_delta, "Noise level delta for the l1 estimates");
  bnd->add_option("--perturbation", bnd_perturbation, "Data perturbation norm for the least squares estimates");
  bnd->add_option("--tau", bnd_tau, "tau for the unknown-Omega completion estimate");
  bnd->add_option("--l0", bnd_l0, "Support sizes per component (default: from the scene ground truth)");
  bnd->add_option("--weights", bnd_weights, "pairwise or triangle")->check(CLI::IsMember({"pairwise", "triangle"}));
  bnd->add_option("--sign", bnd_sign, "printed or conservative")->check(CLI::IsMember({"printed", "conservative"}));
  bnd->add_option("--out", bnd_out, "CSV path (default: stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "Run the property suites");
  int verify_trials = 1000;
  std::uint64_t verify_seed = 7;
  int verify_threads = 0;
  verify->add_option("--trials", verify_trials, "Randomized trials per suite")->check(CLI::PositiveNumber);
  verify->add_option("--seed", verify_seed, "Base seed");
  verify->add_option("--threads", verify_threads, "Worker threads (default: FARSPLIT_THREADS or all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*synth) {
      const auto scene = read_scene(synth_scene);
      const auto data = scene_farfield(scene);
      emit(synth_out, farfield_csv(data.gamma));
      if (!synth_clean.empty()) write_farfield_csv(synth_clean, data.clean);
      if (!synth_truth.empty()) {
        json comps = json::array();
        for (std::size_t i = 0; i < data.truth.size(); ++i)
          comps.push_back({{"center", detail::to_json(scene.components[i].center)},
                           {"order", data.truth[i].N},
                           {"coefficients", detail::to_json(data.truth[i].values)}});
        write_text(synth_truth, json{{"version", kFormatVersion}, {"components", comps}}.dump(2) + "\n");
      }
      return 0;
    }
    if (*split) return run_split(split_opts, false);
    if (*complete) return run_split(complete_opts, true);
    if (*svd) {
      const int nmax = svd_nmax.value_or(default_spectrum_order(svd_R));
      const auto sp = spectrum(svd_R, nmax);
      std::string s = "n,s_n_squared,asymptote_2sqrt(R^2-n^2)\n";
      for (int n = 0; n <= nmax; ++n)
        s += std::to_string(n) + "," + format_double(sp.at(n)) + "," +
             format_double(2.0 * svd_R * asymptote(n / svd_R)) + "\n";
      emit(svd_out, s);
      if (svd_ratio) {
        const auto N = picard_threshold(svd_R, {1.0, *svd_ratio});
        std::fprintf(stderr, "threshold N = %s\n", N ? std::to_string(*N).c_str() : "none");
      }
      return 0;
    }
    if (*bnd) {
      const auto scene = read_scene(bnd_scene);
      BoundInputs in;
      in.k = scene.k;
      in.omega_measure = scene.omega.grid_measure(scene.grid);
      in.delta = bnd_delta;
      in.perturbation = bnd_perturbation;
      in.tau = bnd_tau;
      in.weight_rule = bnd_weights == "triangle" ? WeightRule::triangle : WeightRule::pairwise;
      in.sign = bnd_sign == "conservative" ? SignVariant::conservative : SignVariant::as_printed;
      for (const auto& c : scene.components) {
        in.centers.push_back(c.center);
        in.orders.push_back(c.resolved_order(scene.k));
      }
      if (!bnd_l0.empty()) {
        in.support_sizes = bnd_l0;
      } else {
        for (const auto& w : scene_farfield(scene).truth) {
          double mx = 0.0, cnt = 0.0;
          for (const auto& z : w.values) mx = std::max(mx, std::abs(z));
          for (const auto& z : w.values) cnt += mx > 0.0 && std::abs(z) > kDefaultSupportTol * mx;
          in.support_sizes.push_back(cnt);
        }
      }
      emit(bnd_out, bounds_table(in));
      return 0;
    }
    if (*verify) {
      const auto results = run_all_suites(verify_trials, verify_seed, verify_threads);
      bool ok = true;
      std::printf("suite,trials,violations,max_ratio\n");
      for (const auto& r : results) {
        std::printf("%s,%d,%d,%.17g\n", r.name.c_str(), r.trials, r.violations, r.max_ratio);
        ok = ok && r.ok();
      }
      return ok ? 0 : kExitVerification;
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "farsplit: %s\n", e.what());
    return kExitUsage;
  } catch (const IoError& e) {
    std::fprintf(stderr, "farsplit: %s\n", e.what());
    return kExitUsage;
  } catch (const GeometryError& e) {
    std::fprintf(stderr, "farsplit: infeasible geometry: %s\n", e.what());
    return kExitInfeasible;
  } catch (const SingularSystemError& e) {
    std::fprintf(stderr, "farsplit: %s\n", e.what());
    return kExitInfeasible;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "farsplit: invalid input: %s\n", e.what());
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "farsplit: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
