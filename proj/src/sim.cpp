#include <ergosim/sim.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <ergosim/ergodic.hpp>

namespace ergosim
{
namespace
{
std::string join_issues(const std::vector<std::string>& issues)
{
  std::string out = "invalid configuration:";
  for (const auto& s : issues)
  {
    out += "\n  - " + s;
  }
  return out;
}

bool spd_2x2(const Eigen::Matrix2d& m)
{
  const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return std::abs(m(0, 1) - m(1, 0)) <= 1e-9 * std::max(m.cwiseAbs().maxCoeff(), 1.0) &&
         det > 0.0 && m(0, 0) + m(1, 1) > 0.0;
}
}  // namespace

ValidationError::ValidationError(std::vector<std::string> issues)
  : std::runtime_error(join_issues(issues)), issues_(std::move(issues))
{
}

std::vector<std::string> SimConfig::validate() const
{
  std::vector<std::string> issues;
  auto fail = [&issues](const std::string& msg) { issues.push_back(msg); };

  if (!(grid.x_max > grid.x_min))
  {
    fail("domain.x_max must exceed domain.x_min");
  }
  if (!(grid.y_max > grid.y_min))
  {
    fail("domain.y_max must exceed domain.y_min");
  }
  if (grid.nx < 2 || grid.ny < 2)
  {
    fail("grid.nx and grid.ny must be at least 2");
  }

  if (holes.empty())
  {
    fail("at least one hole (mixture component) is required");
  }
  double weight_sum = 0.0;
  std::ostringstream weights;
  for (std::size_t i = 0; i < holes.size(); ++i)
  {
    const auto& h = holes[i];
    const std::string key = "hole." + std::to_string(i + 1);
    if (!(h.weight > 0.0) || h.weight > 1.0)
    {
      fail(key + ".weight = " + std::to_string(h.weight) + " outside (0, 1]");
    }
    weight_sum += h.weight;
    weights << (i == 0 ? "" : ", ") << h.weight;
    if (!spd_2x2(h.cov))
    {
      fail(key + ".cov is not symmetric positive definite");
    }
    // Containment is only meaningful once the domain itself is well formed.
    if (grid.x_max > grid.x_min && grid.y_max > grid.y_min && !grid.contains(h.mean))
    {
      fail(key + ".mean lies outside the domain");
    }
  }
  if (!holes.empty() && std::abs(weight_sum - 1.0) > 1e-12)
  {
    fail("hole weights [" + weights.str() + "] sum to " + std::to_string(weight_sum) +
         ", expected 1");
  }

  if (grid.x_max > grid.x_min && grid.y_max > grid.y_min && !grid.contains(start))
  {
    fail("robot.start lies outside the domain");
  }
  if (!spd_2x2(sigma_robot))
  {
    fail("robot.cov is not symmetric positive definite");
  }
  if (!(v_max > 0.0))
  {
    fail("robot.v_max must be > 0");
  }
  if (!(beta > 0.0))
  {
    fail("timing.beta must be > 0");
  }
  if (!(gamma >= 0.0))
  {
    fail("timing.gamma must be >= 0");
  }
  if (!(sigma_level > 0.0))
  {
    fail("run.sigma_level must be > 0");
  }
  if (!(stamp_radius_sigmas >= 3.0))
  {
    fail("run.stamp_radius_sigmas must be >= 3");
  }
  if (v_every < 1)
  {
    fail("run.v_every must be >= 1");
  }
  if (max_steps < 0)
  {
    fail("run.max_steps must be >= 0");
  }
  for (const double f : snapshot_fractions)
  {
    if (!(f >= 0.0) || f > 1.0)
    {
      fail("run.snapshot_fracs entries must lie in [0, 1]");
      break;
    }
  }
  return issues;
}

MixtureModel SimConfig::build_model() const
{
  std::vector<GaussianComponent> comps;
  comps.reserve(holes.size());
  for (const auto& h : holes)
  {
    comps.push_back({ h.weight, Gaussian(h.mean, h.cov) });
  }
  return MixtureModel(std::move(comps));
}

std::vector<std::int64_t> SimConfig::snapshot_steps() const
{
  std::set<std::int64_t> steps;
  for (const double f : snapshot_fractions)
  {
    steps.insert(static_cast<std::int64_t>(std::llround(f * static_cast<double>(max_steps))));
  }
  return { steps.begin(), steps.end() };
}

namespace
{
/** Per-run state wrapped so the loop body stays readable. */
struct Engine
{
  const SimConfig& cfg;
  SimTrace trace;
  MixtureModel model;
  ScalarField rho_star;
  RegionMask mask;
  MassAccumulator acc;
  RobotState robot;
  MissionPlan plan;
  std::vector<std::int64_t> snapshot_at;
  std::int64_t first_hole_arrivals = 0;
  double a_transit_start = 0.0;
  std::int64_t transit_start_k = 0;
  bool clamped_a_warned = false;

  explicit Engine(const SimConfig& config)
    : cfg(config)
    , model(config.build_model())
    , rho_star(rasterize_mixture(model, config.grid, &trace.warnings))
    , mask(build_hole_masks(model, config.grid, config.sigma_level))
    , acc(config.grid, config.sigma_robot, config.stamp_radius_sigmas)
    , robot{ config.start, config.v_max }
    , snapshot_at(config.snapshot_steps())
  {
  }

  double frozen_hole_mass()
  {
    double a = hole_mass_fraction(acc, mask);
    if (a >= 1.0)
    {
      // Degenerate: the entire time average sits inside the holes. Keep the
      // dwell bound finite; flag it once.
      a = 1.0 - 1e-9;
      if (!clamped_a_warned)
      {
        trace.warnings.push_back(
            "hole mass fraction reached 1; dwell bound clamped");
        clamped_a_warned = true;
      }
    }
    return a;
  }

  double current_threshold() const
  {
    return departure_threshold({ cfg.beta, cfg.gamma, plan.cycle });
  }

  /** Transit -> Dwell at step k; records the arrive event. */
  void process_arrival(std::int64_t k)
  {
    const int hole = plan.current_target();
    plan.phase = Phase::Dwell;
    plan.phase_start_k = k;
    plan.h_frozen = plan.transit_h;
    plan.frozen_a = frozen_hole_mass();
    plan.h_bar_prime = min_steps_above(stay_bound(plan.h_frozen, plan.frozen_a));
    plan.dwell_elapsed = 1;

    if (hole == plan.tour.front())
    {
      ++first_hole_arrivals;
      if (first_hole_arrivals > 1)
      {
        ++plan.cycle;
      }
    }

    const double residual = hole_deficit_from(acc, rho_star, mask, hole);
    plan.h_bar_dprime.reset();
    if (residual <= current_threshold())
    {
      plan.h_bar_dprime = 0;  // satisfied on entry
    }

    EventRow row;
    row.k = k;
    row.kind = EventKind::Arrive;
    row.hole = hole;
    row.h = plan.h_frozen;
    row.h_bar_prime = plan.h_bar_prime;
    row.h_bar_dprime = plan.h_bar_dprime;
    row.frozen_a = plan.frozen_a;
    row.residual = residual;
    row.cycle = plan.cycle;
    row.a_transit_start = a_transit_start;
    row.transit_start_k = transit_start_k;
    trace.events.push_back(row);
  }

  /** Dwell -> Transit at step k if both stay conditions are met. */
  bool maybe_depart(std::int64_t k, double residual)
  {
    const int hole = plan.current_target();
    const std::int64_t dwell = plan.dwell_elapsed;
    const std::int64_t h = plan.h_frozen;
    const std::int64_t hbp = plan.h_bar_prime;
    const auto hbd = plan.h_bar_dprime;
    const double fa = plan.frozen_a;
    if (departure_decision(plan, dwell, hbp, hbd) == Decision::Stay)
    {
      return false;
    }
    EventRow row;
    row.k = k;
    row.kind = EventKind::Depart;
    row.hole = hole;
    row.h = h;
    row.h_bar_prime = hbp;
    row.h_bar_dprime = hbd;
    row.frozen_a = fa;
    row.residual = residual;
    row.cycle = plan.cycle;
    trace.events.push_back(row);

    plan.phase_start_k = k;
    a_transit_start = frozen_hole_mass();
    transit_start_k = k;
    return true;
  }

  void record_metrics(std::int64_t k)
  {
    MetricsRow row;
    row.k = k;
    row.V = ergodic_value_from(acc, rho_star);
    row.target_hole = plan.current_target();
    row.phase = plan.phase;
    row.cycle = plan.cycle;
    row.mass = total_mass_from(acc);
    trace.metrics.push_back(row);
  }

  void maybe_snapshot(std::int64_t k)
  {
    if (std::binary_search(snapshot_at.begin(), snapshot_at.end(), k))
    {
      trace.snapshots.push_back({ k, compute_phi(acc.time_average(), rho_star) });
    }
  }

  SimTrace execute()
  {
    // Step 0: the robot deposits f_0 at its start position before moving.
    acc.deposit(robot.position);
    trace.trajectory.push_back({ 0, robot.position.x(), robot.position.y() });

    const int first =
        initial_target(robot.position, mask, model, cfg.sigma_level);
    plan.tour = tour_order(model, first);
    plan.tour_pos = 0;
    plan.phase = Phase::Transit;
    plan.transit_h = 0;
    a_transit_start = frozen_hole_mass();
    transit_start_k = 0;

    if (mask.hole_id(cfg.grid.cell_of(robot.position)) == first)
    {
      process_arrival(0);
      const double residual = hole_deficit_from(acc, rho_star, mask, first);
      maybe_depart(0, residual);
    }
    record_metrics(0);
    trace.initial_V = trace.metrics.front().V;
    maybe_snapshot(0);

    for (std::int64_t k = 1; k <= cfg.max_steps; ++k)
    {
      const int target = plan.current_target();
      const Eigen::Vector2d goal = goal_point(acc, rho_star, mask, target);
      robot.position = motion_step(robot, goal);
      acc.deposit(robot.position);
      trace.trajectory.push_back({ k, robot.position.x(), robot.position.y() });

      bool transition = false;
      if (plan.phase == Phase::Transit)
      {
        if (mask.hole_id(cfg.grid.cell_of(robot.position)) == target)
        {
          process_arrival(k);
          transition = true;
        }
        else
        {
          ++plan.transit_h;
        }
      }
      else
      {
        ++plan.dwell_elapsed;
      }

      if (plan.phase == Phase::Dwell)
      {
        const double residual = hole_deficit_from(acc, rho_star, mask,
                                                  plan.current_target());
        if (!plan.h_bar_dprime.has_value() && plan.dwell_elapsed >= 2 &&
            residual <= current_threshold())
        {
          plan.h_bar_dprime = plan.dwell_elapsed;
        }
        if (maybe_depart(k, residual))
        {
          transition = true;
        }
      }

      if (transition || k % cfg.v_every == 0 || k == cfg.max_steps)
      {
        record_metrics(k);
      }
      maybe_snapshot(k);
    }

    trace.final_V = trace.metrics.back().V;
    trace.final_mass = total_mass_from(acc);
    trace.cycles_completed = plan.cycle;
    return std::move(trace);
  }
};
}  // namespace

SimTrace run(const SimConfig& config)
{
  const std::vector<std::string> issues = config.validate();
  if (!issues.empty())
  {
    throw ValidationError(issues);
  }
  Engine engine(config);
  return engine.execute();
}

std::vector<std::pair<std::int64_t, double>> end_of_cycle_values(const SimTrace& trace)
{
  std::vector<std::pair<std::int64_t, double>> out;
  std::int64_t seen_cycle = 0;
  for (const EventRow& e : trace.events)
  {
    if (e.kind == EventKind::Arrive && e.cycle > seen_cycle)
    {
      seen_cycle = e.cycle;
      const auto it = std::lower_bound(
          trace.metrics.begin(), trace.metrics.end(), e.k,
          [](const MetricsRow& row, std::int64_t k) { return row.k < k; });
      if (it == trace.metrics.end() || it->k != e.k)
      {
        throw std::logic_error("end_of_cycle_values: missing metrics row at a "
                               "cycle boundary");
      }
      out.emplace_back(e.cycle, it->V);
    }
  }
  if (out.size() < 2)
  {
    throw std::invalid_argument(
        "end_of_cycle_values: trace holds fewer than two completed cycles");
  }
  return out;
}

}  // namespace ergosim
