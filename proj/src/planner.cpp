#include <ergosim/planner.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ergosim
{
int initial_target(const Eigen::Vector2d& position, const RegionMask& mask,
                   const MixtureModel& model, double sigma_level)
{
  const std::int32_t id = mask.hole_id(mask.spec().cell_of(position));
  if (id >= 0)
  {
    return id;
  }
  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < model.size(); ++i)
  {
    const double d =
        ellipse_boundary_distance(model.component(i).gaussian, position, sigma_level);
    if (d < best_dist)
    {
      best_dist = d;
      best = i;
    }
  }
  return best;
}

namespace
{
double closed_tour_length(const std::vector<Eigen::Vector2d>& means,
                          const std::vector<int>& order)
{
  double len = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i)
  {
    const auto& from = means[static_cast<std::size_t>(order[i])];
    const auto& to = means[static_cast<std::size_t>(order[(i + 1) % order.size()])];
    len += (to - from).norm();
  }
  return len;
}
}  // namespace

std::vector<int> tour_order(const MixtureModel& model, int first)
{
  const int m = model.size();
  if (first < 0 || first >= m)
  {
    throw std::out_of_range("tour_order: first hole index out of range");
  }
  std::vector<Eigen::Vector2d> means;
  means.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
  {
    means.push_back(model.component(i).gaussian.mean());
  }

  std::vector<int> rest;
  for (int i = 0; i < m; ++i)
  {
    if (i != first)
    {
      rest.push_back(i);
    }
  }

  if (m <= 8)
  {
    // Exact: enumerate the remaining holes in lexicographic order; only a
    // genuine improvement replaces the incumbent, so the lexicographically
    // smallest minimal tour wins. The tolerance absorbs summation-order
    // rounding between a closed tour and its reversal, which tie exactly.
    std::vector<int> order(static_cast<std::size_t>(m));
    order[0] = first;
    std::vector<int> best_rest = rest;
    double best_len = std::numeric_limits<double>::infinity();
    std::sort(rest.begin(), rest.end());
    do
    {
      std::copy(rest.begin(), rest.end(), order.begin() + 1);
      const double len = closed_tour_length(means, order);
      if (len < best_len - 1e-9 * (1.0 + len))
      {
        best_len = len;
        best_rest = rest;
      }
    } while (std::next_permutation(rest.begin(), rest.end()));
    std::vector<int> result{ first };
    result.insert(result.end(), best_rest.begin(), best_rest.end());
    return result;
  }

  // Nearest-neighbor heuristic for large instances; ties to the lowest index.
  std::vector<int> result{ first };
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  used[static_cast<std::size_t>(first)] = true;
  int current = first;
  for (int n = 1; n < m; ++n)
  {
    int next = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i)
    {
      if (used[static_cast<std::size_t>(i)])
      {
        continue;
      }
      const double d = (means[static_cast<std::size_t>(i)] -
                        means[static_cast<std::size_t>(current)])
                           .norm();
      if (d < best)
      {
        best = d;
        next = i;
      }
    }
    used[static_cast<std::size_t>(next)] = true;
    result.push_back(next);
    current = next;
  }
  return result;
}

std::size_t goal_cell(const ScalarField& phi, const RegionMask& mask, int hole)
{
  if (!(phi.spec() == mask.spec()))
  {
    throw std::invalid_argument("goal_cell: field and mask grids differ");
  }
  const auto& cells = mask.hole_cells(hole);
  if (cells.empty())
  {
    throw std::invalid_argument("goal_cell: hole has no cells on this grid");
  }
  std::size_t best = static_cast<std::size_t>(cells.front());
  double best_val = phi[best];
  for (const std::int32_t c : cells)
  {
    const auto cc = static_cast<std::size_t>(c);
    if (phi[cc] < best_val)
    {
      best_val = phi[cc];
      best = cc;
    }
  }
  return best;
}

Eigen::Vector2d goal_point(const ScalarField& phi, const RegionMask& mask, int hole)
{
  return mask.spec().cell_center(goal_cell(phi, mask, hole));
}

Eigen::Vector2d goal_point(const MassAccumulator& acc, const ScalarField& rho_star,
                           const RegionMask& mask, int hole)
{
  require_same_grid(acc.sum_field(), rho_star);
  const auto& cells = mask.hole_cells(hole);
  if (cells.empty())
  {
    throw std::invalid_argument("goal_point: hole has no cells on this grid");
  }
  const double inv = acc.inv_count();
  const ScalarField& s = acc.sum_field();
  std::size_t best = static_cast<std::size_t>(cells.front());
  double best_val = s[best] * inv - rho_star[best];
  for (const std::int32_t c : cells)
  {
    const auto cc = static_cast<std::size_t>(c);
    const double v = s[cc] * inv - rho_star[cc];
    if (v < best_val)
    {
      best_val = v;
      best = cc;
    }
  }
  return mask.spec().cell_center(best);
}

Eigen::Vector2d motion_step(const RobotState& robot, const Eigen::Vector2d& goal)
{
  const Eigen::Vector2d d = goal - robot.position;
  const double dist = d.norm();
  if (dist <= robot.v_max)
  {
    return goal;
  }
  return robot.position + (robot.v_max / dist) * d;
}

Decision departure_decision(MissionPlan& plan, std::int64_t dwell_elapsed,
                            std::int64_t h_bar_prime,
                            std::optional<std::int64_t> h_bar_dprime)
{
  if (plan.phase != Phase::Dwell)
  {
    throw std::logic_error("departure_decision: plan is not dwelling");
  }
  if (!h_bar_dprime.has_value())
  {
    return Decision::Stay;  // residual condition not met yet
  }
  if (dwell_elapsed < std::max(h_bar_prime, *h_bar_dprime))
  {
    return Decision::Stay;
  }
  plan.tour_pos = static_cast<int>((static_cast<std::size_t>(plan.tour_pos) + 1) %
                                   plan.tour.size());
  plan.phase = Phase::Transit;
  plan.transit_h = 0;
  plan.dwell_elapsed = 0;
  plan.h_bar_dprime.reset();
  return Decision::Advance;
}

}  // namespace ergosim
