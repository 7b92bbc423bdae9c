#ifndef ERGOSIM_PLANNER_HPP
#define ERGOSIM_PLANNER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <ergosim/ergodic.hpp>
#include <ergosim/gaussian.hpp>
#include <ergosim/region.hpp>

namespace ergosim
{
enum class Phase
{
  Transit,
  Dwell
};

struct RobotState
{
  Eigen::Vector2d position;
  double v_max;
};

/**
 * @brief Tour bookkeeping for the stay/departure state machine.
 *
 * The tour is a fixed cyclic permutation of the holes. The phase
 * alternates Transit -> Dwell -> Transit; the cycle count increments
 * each time the robot re-enters the tour's first hole.
 */
struct MissionPlan
{
  std::vector<int> tour;
  int tour_pos = 0;
  Phase phase = Phase::Transit;
  std::int64_t phase_start_k = 0;
  std::int64_t transit_h = 0;
  std::int64_t dwell_elapsed = 0;
  double frozen_a = 0.0;
  std::int64_t h_frozen = 0;
  std::int64_t h_bar_prime = 0;
  std::optional<std::int64_t> h_bar_dprime;
  std::int64_t cycle = 0;

  int current_target() const
  {
    return tour[static_cast<std::size_t>(tour_pos)];
  }

  int next_target() const
  {
    return tour[(static_cast<std::size_t>(tour_pos) + 1) % tour.size()];
  }
};

/**
 * @brief Hole whose sigma-level ellipse boundary is closest to the robot.
 *
 * A robot standing inside a hole selects that hole. Ties break to the
 * lowest component index.
 */
int initial_target(const Eigen::Vector2d& position, const RegionMask& mask,
                   const MixtureModel& model, double sigma_level = 3.0);

/**
 * @brief Minimum-length closed tour over the hole means, starting at `first`.
 *
 * Exact enumeration up to 8 holes, nearest-neighbor beyond. Among tours
 * of equal length the lexicographically smallest order wins, which keeps
 * the result deterministic (a closed tour and its reversal tie).
 */
std::vector<int> tour_order(const MixtureModel& model, int first);

/** @brief Cell with the smallest phi inside a hole; ties to the lowest linear index. */
std::size_t goal_cell(const ScalarField& phi, const RegionMask& mask, int hole);

/** @brief Center of goal_cell's cell. */
Eigen::Vector2d goal_point(const ScalarField& phi, const RegionMask& mask, int hole);

/** @brief Same selection evaluated lazily from the accumulator (bit-identical). */
Eigen::Vector2d goal_point(const MassAccumulator& acc, const ScalarField& rho_star,
                           const RegionMask& mask, int hole);

/**
 * @brief Advance v_max toward the goal; land exactly on it when closer than
 * v_max; stay put when the goal equals the current position.
 */
Eigen::Vector2d motion_step(const RobotState& robot, const Eigen::Vector2d& goal);

enum class Decision
{
  Stay,
  Advance
};

/**
 * @brief Stay/advance rule: advance once the dwell has lasted at least
 * max(h_bar_prime, h_bar_dprime) steps, with h_bar_dprime only counting
 * once the residual condition has been met. On advance the plan moves to
 * the tour successor and returns to Transit.
 */
Decision departure_decision(MissionPlan& plan, std::int64_t dwell_elapsed,
                            std::int64_t h_bar_prime,
                            std::optional<std::int64_t> h_bar_dprime);

}  // namespace ergosim
#endif
