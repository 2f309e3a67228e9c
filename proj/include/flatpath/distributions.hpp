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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "flatpath/error.hpp"
#include "flatpath/geometry.hpp"
#include "flatpath/parallel.hpp"
#include "flatpath/rng.hpp"
#include "flatpath/sampling.hpp"
#include "flatpath/separation.hpp"
#include "flatpath/surface.hpp"
#include "flatpath/tracer.hpp"

namespace flatpath {

/// Uniform grid on [0, t_max] with `points` nodes.
struct TimeGrid {
  double t_max = 4.0;
  int points = 401;

  std::vector<double> values() const {
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
      g[static_cast<std::size_t>(i)] = points == 1 ? 0.0 : t_max * i / (points - 1);
    return g;
  }
};

enum class ThetaMode { Averaged, Fixed };

struct SamplePlan {
  std::size_t n_samples = 100'000;
  std::uint64_t seed = 1;
  ThetaMode theta_mode = ThetaMode::Averaged;
  double theta = 0.0;  // used when theta_mode == Fixed
  double epsilon = 0.1;
  TimeGrid grid;
  unsigned threads = 0;  // 0: hardware concurrency (capped by FLATPATH_THREADS)
  ProngPolicy policy = ProngPolicy::All;

  /// Trace cap: anything censored there has scaled time past the grid.
  double trace_cap() const { return (grid.t_max + 1.0) / (2.0 * epsilon); }
};

/// Survivor function estimate measure{2 epsilon tau > t} on a grid.
struct EmpiricalCCDF {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> std_error;
  std::size_t n_samples = 0;
  std::size_t n_censored = 0;
  std::size_t n_aborted = 0;

  friend bool operator==(const EmpiricalCCDF&, const EmpiricalCCDF&) = default;
};

/// Empirical survivor function of `scaled` (infinite entries are censored
/// samples) evaluated on grid.
inline EmpiricalCCDF survivor_from_samples(std::vector<double> scaled, const std::vector<double>& grid) {
  std::sort(scaled.begin(), scaled.end());
  EmpiricalCCDF out;
  out.grid = grid;
  out.n_samples = scaled.size();
  const double n = static_cast<double>(scaled.size());
  for (double t : grid) {
    const auto above = scaled.end() - std::upper_bound(scaled.begin(), scaled.end(), t);
    const double v = static_cast<double>(above) / n;
    out.values.push_back(v);
    out.std_error.push_back(std::sqrt(v * (1.0 - v) / n));
  }
  out.n_censored = static_cast<std::size_t>(
      std::count(scaled.begin(), scaled.end(), std::numeric_limits<double>::infinity()));
  return out;
}

namespace detail {

enum class ObstacleKinds { Circular, Segment, Both };

struct SampleOutcome {
  HitResult circular;
  HitResult segment;
  bool starts_inside = false;  // initial point in the closed disks
  std::uint32_t aborts = 0;
};

inline void check_plan(const SamplePlan& plan) {
  if (plan.n_samples == 0) throw Error(ErrorCode::InvalidState, "sample count must be positive");
  if (plan.grid.points < 1 || !(plan.grid.t_max > 0.0))
    throw Error(ErrorCode::InvalidState, "time grid must have points and a positive extent");
  check_epsilon(plan.epsilon);
}

// Draws n_samples states (resampling after singular impacts) and traces the
// requested obstacle kinds on each with common random numbers.
inline std::vector<SampleOutcome> run_samples(const TranslationSurface& s, const SamplePlan& plan,
                                              ObstacleKinds kinds) {
  check_plan(plan);
  const bool want_circ = kinds != ObstacleKinds::Segment;
  const bool want_seg = kinds != ObstacleKinds::Circular;
  std::optional<CircularObstacles> circ;
  if (want_circ) circ.emplace(s, plan.epsilon, max_circular_epsilon(s));
  std::optional<SegmentObstacles> fixed_seg;
  if (want_seg && plan.theta_mode == ThetaMode::Fixed)
    fixed_seg.emplace(s, plan.epsilon, plan.theta, plan.policy);

  const StateSampler sampler(s);
  const double cap = plan.trace_cap();
  constexpr std::uint32_t kMaxAttempts = 1000;
  std::vector<SampleOutcome> out(plan.n_samples);
  parallel_for(plan.n_samples, worker_count(plan.threads), [&](std::size_t i) {
    SampleOutcome& o = out[i];
    for (std::uint32_t attempt = 0;; ++attempt) {
      if (attempt == kMaxAttempts)
        throw Error(ErrorCode::TooManyAborts, "sample " + std::to_string(i) + " never traced cleanly");
      StreamRng rng(plan.seed, i, attempt);
      UnitTangentState st = sampler.point(rng);
      st.theta = plan.theta_mode == ThetaMode::Fixed ? plan.theta : kTwoPi * rng.uniform();
      bool aborted = false;
      if (want_circ) {
        o.starts_inside = circ->contains(st.chart, st.point);
        o.circular = free_path_circular(*circ, st, cap);
        aborted = o.circular.kind == HitKind::SingularImpact;
      }
      if (want_seg && !aborted) {
        o.segment = fixed_seg ? free_path_segment(*fixed_seg, st, cap)
                              : free_path_segment(SegmentObstacles(s, plan.epsilon, st.theta, plan.policy),
                                                  st, cap);
        aborted = o.segment.kind == HitKind::SingularImpact;
      }
      if (!aborted) break;
      ++o.aborts;
    }
  });

  std::size_t aborts = 0;
  for (const auto& o : out) aborts += o.aborts;
  if (static_cast<double>(aborts) > 1e-3 * static_cast<double>(plan.n_samples)) {
    std::ostringstream msg;
    msg << aborts << " singular impacts in " << plan.n_samples
        << " samples exceed 0.1%; the surface geometry is suspect";
    throw Error(ErrorCode::TooManyAborts, msg.str());
  }
  return out;
}

inline double scaled(const HitResult& r, double epsilon) {
  return r.hit() ? 2.0 * epsilon * r.time : std::numeric_limits<double>::infinity();
}

inline EmpiricalCCDF collect(const std::vector<SampleOutcome>& outcomes, const SamplePlan& plan,
                             bool circular) {
  std::vector<double> values;
  values.reserve(outcomes.size());
  std::size_t aborts = 0;
  for (const auto& o : outcomes) {
    values.push_back(scaled(circular ? o.circular : o.segment, plan.epsilon));
    aborts += o.aborts;
  }
  EmpiricalCCDF out = survivor_from_samples(std::move(values), plan.grid.values());
  out.n_aborted = aborts;
  return out;
}

}  // namespace detail

/// Circular-obstacle distribution F_epsilon (direction averaged unless the
/// plan fixes theta).
inline EmpiricalCCDF estimate_F(const TranslationSurface& s, const SamplePlan& plan) {
  return detail::collect(detail::run_samples(s, plan, detail::ObstacleKinds::Circular), plan, true);
}

/// Segment-obstacle distribution averaged over uniform directions.
inline EmpiricalCCDF estimate_Ftilde(const TranslationSurface& s, SamplePlan plan) {
  plan.theta_mode = ThetaMode::Averaged;
  return detail::collect(detail::run_samples(s, plan, detail::ObstacleKinds::Segment), plan, false);
}

/// Segment-obstacle distribution for the plan's fixed direction.
inline EmpiricalCCDF estimate_ftilde(const TranslationSurface& s, const SamplePlan& plan) {
  if (plan.theta_mode != ThetaMode::Fixed)
    throw Error(ErrorCode::InvalidState, "estimate_ftilde needs a fixed direction");
  return detail::collect(detail::run_samples(s, plan, detail::ObstacleKinds::Segment), plan, false);
}

/// Largest absolute difference between two estimates on a common grid.
inline double ks_distance(const EmpiricalCCDF& a, const EmpiricalCCDF& b) {
  if (a.grid.size() != b.grid.size())
    throw Error(ErrorCode::GridMismatch, "grids have different sizes");
  double d = 0.0;
  for (std::size_t i = 0; i < a.grid.size(); ++i) {
    if (std::abs(a.grid[i] - b.grid[i]) > 1e-12)
      throw Error(ErrorCode::GridMismatch, "grids differ at index " + std::to_string(i));
    d = std::max(d, std::abs(a.values[i] - b.values[i]));
  }
  return d;
}

/// Largest pooled standard error sqrt(se_a^2 + se_b^2) over the grid.
inline double pooled_sigma(const EmpiricalCCDF& a, const EmpiricalCCDF& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.std_error.size() && i < b.std_error.size(); ++i)
    s = std::max(s, std::hypot(a.std_error[i], b.std_error[i]));
  return s;
}

/// Coupled comparison of circular and segment obstacles on one sample stream.
struct ApproximationReport {
  double epsilon = 0.0;
  int kappa = 0;
  EmpiricalCCDF circular;
  EmpiricalCCDF segment;
  double sup_gap = 0.0;        // max over grid of |F - Ftilde|
  double gap_std_error = 0.0;  // binomial standard error of the gap at its argmax
  double bound = 0.0;          // 2 kappa pi epsilon^2
  double r10_max = 0.0;        // max over grid of the empirical volume of R_{1,0}
  double r01_max = 0.0;        // max over grid of the empirical volume of R_{0,1}
  double r01_std_error = 0.0;
  double obstacle_volume = 0.0;  // kappa pi epsilon^2
  std::size_t domination_violations = 0;

  bool gap_within_bound() const { return sup_gap <= bound + 3.0 * gap_std_error; }
  bool r01_within_bound() const { return r01_max <= obstacle_volume + 3.0 * r01_std_error; }
};

/// Runs both estimators with common random numbers and measures the gap
/// between them against 2 kappa pi epsilon^2. Also counts pathwise
/// violations of tau <= tau~ and the empirical volumes of R_{1,0}, R_{0,1}.
inline ApproximationReport approximation_check(const TranslationSurface& s, SamplePlan plan) {
  plan.theta_mode = ThetaMode::Averaged;
  const auto outcomes = detail::run_samples(s, plan, detail::ObstacleKinds::Both);
  ApproximationReport rep;
  rep.epsilon = plan.epsilon;
  rep.kappa = s.stratum().kappa;
  rep.obstacle_volume = rep.kappa * kPi * plan.epsilon * plan.epsilon;
  rep.bound = 2.0 * rep.obstacle_volume;
  rep.circular = detail::collect(outcomes, plan, true);
  rep.segment = detail::collect(outcomes, plan, false);

  const auto grid = plan.grid.values();
  const double n = static_cast<double>(outcomes.size());
  std::vector<double> circ, seg, circ_out, seg_out;  // *_out: samples starting outside the disks
  for (const auto& o : outcomes) {
    const double a = detail::scaled(o.circular, plan.epsilon);
    const double b = detail::scaled(o.segment, plan.epsilon);
    circ.push_back(a);
    seg.push_back(b);
    if (!o.starts_inside) {
      circ_out.push_back(a);
      seg_out.push_back(b);
    }
    const bool violated = o.segment.hit() &&
                          (!o.circular.hit() || o.circular.time > o.segment.time + 1e-12);
    if (violated) ++rep.domination_violations;
  }
  auto proportion = [n](std::size_t count) { return static_cast<double>(count) / n; };
  auto stderr_of = [n](double p) { return std::sqrt(p * (1.0 - p) / n); };
  for (double t : grid) {
    std::size_t gap = 0, r10 = 0, r01 = 0;
    for (std::size_t i = 0; i < circ.size(); ++i)
      if ((circ[i] > t) != (seg[i] > t)) ++gap;
    for (std::size_t i = 0; i < circ_out.size(); ++i) {
      if (circ_out[i] > t && !(seg_out[i] > t)) ++r10;
      if (!(circ_out[i] > t) && seg_out[i] > t) ++r01;
    }
    const double g = proportion(gap);
    if (g > rep.sup_gap) {
      rep.sup_gap = g;
      rep.gap_std_error = stderr_of(g);
    }
    rep.r10_max = std::max(rep.r10_max, proportion(r10));
    if (proportion(r01) > rep.r01_max) {
      rep.r01_max = proportion(r01);
      rep.r01_std_error = stderr_of(rep.r01_max);
    }
  }
  return rep;
}

/// Successive KS distances of direction-averaged segment distributions
/// along a decreasing list of radii.
struct SweepReport {
  std::vector<double> epsilons;
  std::vector<EmpiricalCCDF> curves;
  std::vector<double> ks;             // ks[i] = distance between curves i and i+1
  std::vector<double> pooled_sigma;   // matching pooled standard errors

  /// Each distance is at most the previous one plus three pooled sigmas of
  /// the two distances.
  bool weakly_decreasing() const {
    for (std::size_t i = 0; i + 1 < ks.size(); ++i)
      if (ks[i + 1] > ks[i] + 3.0 * std::hypot(pooled_sigma[i], pooled_sigma[i + 1])) return false;
    return true;
  }
};

inline SweepReport convergence_sweep(const TranslationSurface& s, const std::vector<double>& epsilons,
                                     const SamplePlan& plan) {
  for (std::size_t i = 0; i + 1 < epsilons.size(); ++i)
    if (!(epsilons[i + 1] < epsilons[i]))
      throw Error(ErrorCode::InvalidEpsilon, "sweep radii must be strictly decreasing");
  SweepReport rep;
  rep.epsilons = epsilons;
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    SamplePlan p = plan;
    p.epsilon = epsilons[i];
    p.seed = plan.seed + i;
    rep.curves.push_back(estimate_Ftilde(s, p));
  }
  for (std::size_t i = 0; i + 1 < rep.curves.size(); ++i) {
    rep.ks.push_back(ks_distance(rep.curves[i], rep.curves[i + 1]));
    rep.pooled_sigma.push_back(pooled_sigma(rep.curves[i], rep.curves[i + 1]));
  }
  return rep;
}

/// Pathwise comparison of 2 epsilon tau~_epsilon(S, p, theta) with
/// tau~_{1/2}(gS, gp, -pi/2) for g = renormalization_matrix(epsilon, theta).
struct RenormalizationReport {
  std::size_t compared = 0;
  std::size_t censored = 0;
  std::size_t aborted = 0;
  double max_relative_difference = 0.0;
  double tolerance = 1e-9;

  bool passed() const { return compared > 0 && max_relative_difference <= tolerance; }
};

inline RenormalizationReport renormalization_check(const TranslationSurface& s, double epsilon,
                                                   std::optional<double> theta, std::size_t samples,
                                                   std::uint64_t seed, double grid_t_max = 4.0) {
  check_epsilon(epsilon);
  const StateSampler sampler(s);
  const double cap = (grid_t_max + 1.0) / (2.0 * epsilon);
  const double down = -kPi / 2.0;
  std::optional<TranslationSurface> fixed_image;
  if (theta) fixed_image = apply_matrix(renormalization_matrix(epsilon, *theta), s);

  RenormalizationReport rep;
  for (std::size_t i = 0; i < samples; ++i) {
    StreamRng rng(seed, i);
    UnitTangentState st = sampler.point(rng);
    st.theta = theta ? *theta : kTwoPi * rng.uniform();
    const Mat2 g = renormalization_matrix(epsilon, st.theta);
    std::optional<TranslationSurface> image;
    if (!fixed_image) image = apply_matrix(g, s);
    const TranslationSurface& gs = fixed_image ? *fixed_image : *image;

    const HitResult a = free_path_segment(s, epsilon, st, cap);
    const HitResult b = free_path_segment(gs, 0.5, {st.chart, g(st.point), down, st.edge},
                                          2.0 * epsilon * cap);
    if (a.kind == HitKind::SingularImpact || b.kind == HitKind::SingularImpact) {
      ++rep.aborted;
      continue;
    }
    if (!a.hit() && !b.hit()) {
      ++rep.censored;
      continue;
    }
    // One side censored: a disagreement unless the other hit right at the cap.
    const double x = 2.0 * epsilon * a.time, y = b.time;
    const double scale = std::max(std::abs(x), std::abs(y));
    const double rel = scale > 0.0 ? std::abs(x - y) / scale : 0.0;
    rep.max_relative_difference = std::max(rep.max_relative_difference, rel);
    ++rep.compared;
  }
  return rep;
}

}  // namespace flatpath
