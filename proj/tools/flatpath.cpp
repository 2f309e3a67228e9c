/*
   Copyright 2026 The flatpath Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// flatpath: command-line driver for free path experiments on translation
// surfaces. Exit codes: 0 success, 1 validation error, 2 runtime error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "flatpath/flatpath.hpp"
#include "flatpath/io.hpp"

namespace {

using namespace flatpath;

constexpr int kValidationError = 1;
constexpr int kRuntimeError = 2;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFoundWithinBound:
    case ErrorCode::SingularImpact:
    case ErrorCode::IncompleteDecomposition:
    case ErrorCode::TooManyAborts:
      return kRuntimeError;
    default:
      return kValidationError;
  }
}

// Radians, or degrees with a "deg:" prefix.
double parse_angle(const std::string& text) {
  constexpr std::string_view deg = "deg:";
  if (text.rfind(deg, 0) == 0)
    return io::parse_double(std::string_view(text).substr(deg.size()), "angle") * kPi / 180.0;
  return io::parse_double(text, "angle");
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Parse, "cannot write '" + path + "'");
  return out;
}

struct SimulateArgs {
  std::string spec;
  double epsilon = 0.1;
  std::string mode = "circular";
  std::size_t samples = 100'000;
  std::uint64_t seed = 1;
  double grid_max = 4.0;
  int grid_points = 401;
  std::string theta;
  std::string out;
};

int cmd_validate(const std::string& spec) {
  const auto ns = io::load_surface(spec);
  const auto& st = ns.surface.stratum();
  std::cout << "alphas=[";
  for (std::size_t i = 0; i < st.alphas.size(); ++i) std::cout << (i ? "," : "") << st.alphas[i];
  std::cout << "] kappa=" << st.kappa << " area=" << fmt(ns.surface.total_area())
            << " separation=" << fmt(shortest_singularity_separation(ns.surface)) << '\n';
  return 0;
}

int cmd_simulate(const SimulateArgs& a) {
  const auto ns = io::load_surface(a.spec);
  SamplePlan plan;
  plan.n_samples = a.samples;
  plan.seed = a.seed;
  plan.epsilon = a.epsilon;
  plan.grid = {a.grid_max, a.grid_points};
  if (!a.theta.empty()) {
    plan.theta_mode = ThetaMode::Fixed;
    plan.theta = parse_angle(a.theta);
  }
  io::CsvMetadata meta{ns.name, a.epsilon,
                       a.theta.empty() ? "averaged" : "fixed:" + io::format_double(plan.theta), "",
                       a.seed};

  auto emit = [&](const EmpiricalCCDF& c, const std::string& kind, const std::string& path) {
    meta.obstacles = kind;
    if (path.empty()) {
      io::write_ccdf_csv(std::cout, c, meta);
    } else {
      auto out = open_output(path);
      io::write_ccdf_csv(out, c, meta);
    }
    std::cerr << kind << ": samples=" << c.n_samples << " censored=" << c.n_censored
              << " aborted=" << c.n_aborted << '\n';
  };

  if (a.mode == "circular") {
    emit(estimate_F(ns.surface, plan), "circular", a.out);
  } else if (a.mode == "segment") {
    emit(plan.theta_mode == ThetaMode::Fixed ? estimate_ftilde(ns.surface, plan)
                                             : estimate_Ftilde(ns.surface, plan),
         "segment", a.out);
  } else {
    if (a.out.empty()) throw Error(ErrorCode::Parse, "--mode both needs --out");
    std::string stem = a.out;
    if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv") stem.resize(stem.size() - 4);
    const auto outcomes = flatpath::detail::run_samples(ns.surface, plan,
                                                        flatpath::detail::ObstacleKinds::Both);
    emit(flatpath::detail::collect(outcomes, plan, true), "circular", stem + ".circular.csv");
    emit(flatpath::detail::collect(outcomes, plan, false), "segment", stem + ".segment.csv");
  }
  return 0;
}

int cmd_zr(const std::string& spec, double epsilon, double height_bound, double grid_max,
           int grid_points, const std::string& out_path) {
  const auto ns = io::load_surface(spec);
  ZipperedOptions opt;
  opt.epsilon = epsilon;
  opt.height_bound = height_bound;
  const auto z = compute_decomposition(ns.surface, opt);
  std::cerr << "rectangles=" << z.rectangles.size() << " covered_area=" << fmt(z.covered_area)
            << " transversal_length=" << fmt(z.transversal_length) << '\n';
  std::cout << "width,height\n";
  for (const auto& [h, w] : heights_histogram(z))
    std::cout << io::format_double(w) << ',' << io::format_double(h) << '\n';

  EmpiricalCCDF c;
  c.grid = TimeGrid{grid_max, grid_points}.values();
  for (double t : c.grid) {
    c.values.push_back(exact_distribution(z, t));
    c.std_error.push_back(0.0);
  }
  const io::CsvMetadata meta{ns.name, epsilon, "fixed:" + io::format_double(-kPi / 2.0), "exact", 0};
  if (out_path.empty()) {
    std::cout << '\n';
    io::write_ccdf_csv(std::cout, c, meta);
  } else {
    auto out = open_output(out_path);
    io::write_ccdf_csv(out, c, meta);
  }
  return 0;
}

int cmd_renorm_check(const std::string& spec, double epsilon, const std::string& theta,
                     std::size_t samples, std::uint64_t seed) {
  const auto ns = io::load_surface(spec);
  std::optional<double> th;
  if (!theta.empty()) th = parse_angle(theta);
  const auto rep = renormalization_check(ns.surface, epsilon, th, samples, seed);
  std::cout << "compared=" << rep.compared << " censored=" << rep.censored
            << " aborted=" << rep.aborted << " max_relative_difference="
            << fmt(rep.max_relative_difference) << " tolerance=" << fmt(rep.tolerance) << ' '
            << (rep.passed() ? "PASS" : "FAIL") << '\n';
  return rep.passed() ? 0 : kRuntimeError;
}

int cmd_sweep(const std::string& spec, const std::vector<double>& epsilons, std::size_t samples,
              std::uint64_t seed) {
  const auto ns = io::load_surface(spec);
  SamplePlan plan;
  plan.n_samples = samples;
  plan.seed = seed;
  const auto sweep = convergence_sweep(ns.surface, epsilons, plan);
  std::cout << "epsilon_a,epsilon_b,ks,pooled_sigma\n";
  for (std::size_t i = 0; i < sweep.ks.size(); ++i)
    std::cout << fmt(epsilons[i]) << ',' << fmt(epsilons[i + 1]) << ',' << fmt(sweep.ks[i]) << ','
              << fmt(sweep.pooled_sigma[i]) << '\n';
  std::cout << "trend=" << (sweep.weakly_decreasing() ? "weakly_decreasing" : "not_decreasing")
            << "\n\nepsilon,kappa,sup_gap,bound,three_sigma,r10_max,r01_max,violations,status\n";
  for (double eps : epsilons) {
    SamplePlan p = plan;
    p.epsilon = eps;
    const auto rep = approximation_check(ns.surface, p);
    const bool ok = rep.gap_within_bound() && rep.r10_max == 0.0 && rep.r01_within_bound() &&
                    rep.domination_violations == 0;
    std::cout << fmt(eps) << ',' << rep.kappa << ',' << fmt(rep.sup_gap) << ',' << fmt(rep.bound)
              << ',' << fmt(3.0 * rep.gap_std_error) << ',' << fmt(rep.r10_max) << ','
              << fmt(rep.r01_max) << ',' << rep.domination_violations << ','
              << (ok ? "ok" : "violated") << '\n';
  }
  return 0;
}

int cmd_plot(const std::vector<std::string>& csvs, const std::string& out_path) {
  std::vector<io::PlotSeries> series;
  for (const auto& path : csvs) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Parse, "cannot open '" + path + "'");
    auto parsed = io::read_ccdf_csv(in, path);
    std::string label = parsed.meta.surface.empty() ? path : parsed.meta.surface;
    if (!parsed.meta.obstacles.empty()) label += " " + parsed.meta.obstacles;
    if (parsed.meta.epsilon > 0.0) label += " eps=" + fmt(parsed.meta.epsilon);
    series.push_back({label, std::move(parsed.ccdf)});
  }
  auto out = open_output(out_path);
  io::write_svg_plot(out, series);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free path lengths of the linear flow on translation surfaces"};
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "Report stratum data of a surface spec");
  std::string spec;
  validate->add_option("spec", spec, "Surface spec JSON file or builtin:NAME")->required();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo free path distributions");
  simulate->add_option("spec", sim.spec, "Surface spec JSON file or builtin:NAME")->required();
  simulate->add_option("--epsilon", sim.epsilon, "Obstacle radius")->check(CLI::PositiveNumber);
  simulate->add_option("--mode", sim.mode, "circular, segment, or both")
      ->check(CLI::IsMember({"circular", "segment", "both"}));
  simulate->add_option("--samples", sim.samples, "Number of samples")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "Random seed");
  simulate->add_option("--grid-max", sim.grid_max, "Largest grid time")->check(CLI::PositiveNumber);
  simulate->add_option("--grid-points", sim.grid_points, "Grid points")->check(CLI::PositiveNumber);
  simulate->add_option("--theta", sim.theta, "Fixed direction (radians, or deg:VALUE); averaged if absent");
  simulate->add_option("--out", sim.out, "Output CSV (stdout if absent; stem for --mode both)");

  auto* zr = app.add_subcommand("zr", "Zippered rectangle heights and exact distribution");
  double zr_epsilon = 0.5, zr_height = 1e3, zr_grid_max = 4.0;
  int zr_points = 401;
  std::string zr_out;
  zr->add_option("spec", spec, "Surface spec JSON file or builtin:NAME")->required();
  zr->add_option("--epsilon", zr_epsilon, "Transversal half-length")->check(CLI::PositiveNumber);
  zr->add_option("--height-bound", zr_height, "Largest return time traced")->check(CLI::PositiveNumber);
  zr->add_option("--grid-max", zr_grid_max, "Largest grid time")->check(CLI::PositiveNumber);
  zr->add_option("--grid-points", zr_points, "Grid points")->check(CLI::PositiveNumber);
  zr->add_option("--out", zr_out, "Distribution CSV (appended to stdout if absent)");

  auto* renorm = app.add_subcommand("renorm-check", "Pathwise renormalization identity check");
  double rn_epsilon = 0.1;
  std::string rn_theta;
  std::size_t rn_samples = 10'000;
  std::uint64_t rn_seed = 1;
  renorm->add_option("spec", spec, "Surface spec JSON file or builtin:NAME")->required();
  renorm->add_option("--epsilon", rn_epsilon, "Obstacle half-length")->check(CLI::PositiveNumber);
  renorm->add_option("--theta", rn_theta, "Fixed direction (radians, or deg:VALUE); random if absent");
  renorm->add_option("--samples", rn_samples, "Number of states")->check(CLI::PositiveNumber);
  renorm->add_option("--seed", rn_seed, "Random seed");

  auto* sweep = app.add_subcommand("sweep", "KS distances across radii and approximation gaps");
  std::vector<double> sw_eps{0.2, 0.1, 0.05, 0.025};
  std::size_t sw_samples = 100'000;
  std::uint64_t sw_seed = 1;
  sweep->add_option("spec", spec, "Surface spec JSON file or builtin:NAME")->required();
  sweep->add_option("--epsilons", sw_eps, "Decreasing obstacle radii")->expected(1, -1);
  sweep->add_option("--samples", sw_samples, "Samples per radius")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", sw_seed, "Random seed");

  auto* plot = app.add_subcommand("plot", "Plot result CSVs as SVG");
  std::vector<std::string> plot_inputs;
  std::string plot_out;
  plot->add_option("csv", plot_inputs, "Result CSV files")->required()->expected(1, -1);
  plot->add_option("--out", plot_out, "Output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidationError;
  }

  try {
    if (validate->parsed()) return cmd_validate(spec);
    if (simulate->parsed()) return cmd_simulate(sim);
    if (zr->parsed()) return cmd_zr(spec, zr_epsilon, zr_height, zr_grid_max, zr_points, zr_out);
    if (renorm->parsed()) return cmd_renorm_check(spec, rn_epsilon, rn_theta, rn_samples, rn_seed);
    if (sweep->parsed()) return cmd_sweep(spec, sw_eps, sw_samples, sw_seed);
    if (plot->parsed()) return cmd_plot(plot_inputs, plot_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kValidationError;
}
