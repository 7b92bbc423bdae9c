#ifndef ERGOSIM_SIM_HPP
#define ERGOSIM_SIM_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include <ergosim/grid.hpp>
#include <ergosim/planner.hpp>

namespace ergosim
{
/** @brief Validation failure carrying every violated constraint. */
class ValidationError : public std::runtime_error
{
public:
  explicit ValidationError(std::vector<std::string> issues);

  const std::vector<std::string>& issues() const
  {
    return issues_;
  }

private:
  std::vector<std::string> issues_;
};

/** @brief One mixture component as plain configuration data. */
struct ComponentSpec
{
  double weight = 0.0;
  Eigen::Vector2d mean{ 0.0, 0.0 };
  Eigen::Matrix2d cov = Eigen::Matrix2d::Identity();
};

/**
 * @brief Fully deterministic simulation configuration. Plain data so that
 * validation can report every violation at once instead of failing on the
 * first strongly-typed constructor.
 */
struct SimConfig
{
  std::vector<ComponentSpec> holes;
  GridSpec grid{ 0.0, 400.0, 0.0, 400.0, 400, 400 };
  Eigen::Vector2d start{ 200.0, 200.0 };
  Eigen::Matrix2d sigma_robot = (Eigen::Matrix2d() << 3.0, 0.0, 0.0, 3.0).finished();
  double v_max = 10.0;
  double beta = 0.1;
  double gamma = 0.05;
  double sigma_level = 3.0;
  double stamp_radius_sigmas = 5.0;
  std::int64_t v_every = 100;
  std::int64_t max_steps = 20000;
  std::vector<double> snapshot_fractions{ 0.0, 0.05, 0.25, 0.5, 0.75, 1.0 };

  /** @brief All constraint violations, empty when the config is runnable. */
  std::vector<std::string> validate() const;

  /** @brief Typed mixture; call only on a validated config. */
  MixtureModel build_model() const;

  /** @brief Snapshot steps: unique round(fraction * max_steps). */
  std::vector<std::int64_t> snapshot_steps() const;
};

struct MetricsRow
{
  std::int64_t k = 0;
  double V = 0.0;
  int target_hole = 0;
  Phase phase = Phase::Transit;
  std::int64_t cycle = 0;
  // Not serialized: time-averaged mass at this step, for invariant checks.
  double mass = 0.0;
};

struct TrajectoryRow
{
  std::int64_t k = 0;
  double x = 0.0;
  double y = 0.0;
};

enum class EventKind
{
  Arrive,
  Depart
};

struct EventRow
{
  std::int64_t k = 0;
  EventKind kind = EventKind::Arrive;
  int hole = 0;
  std::int64_t h = 0;
  std::int64_t h_bar_prime = 0;
  std::optional<std::int64_t> h_bar_dprime;
  double frozen_a = 0.0;
  double residual = 0.0;
  std::int64_t cycle = 0;
  // Not serialized: hole-mass fraction measured when the transit began,
  // consumed by the rise-bound checks.
  double a_transit_start = 0.0;
  std::int64_t transit_start_k = 0;
};

struct Snapshot
{
  std::int64_t k = 0;
  ScalarField phi;
};

/** @brief Complete record of one run; everything the exporters need. */
struct SimTrace
{
  std::vector<MetricsRow> metrics;
  std::vector<TrajectoryRow> trajectory;
  std::vector<EventRow> events;
  std::vector<Snapshot> snapshots;
  std::vector<std::string> warnings;
  double initial_V = 0.0;
  double final_V = 0.0;
  double final_mass = 0.0;
  std::int64_t cycles_completed = 0;
};

/**
 * @brief Execute the exploration loop: initial deposit at the start
 * position, then per step goal update, motion, deposit, timing
 * bookkeeping and phase transitions until max_steps.
 *
 * Throws ValidationError when the configuration is invalid. Identical
 * configurations produce bit-identical traces.
 */
SimTrace run(const SimConfig& config);

/**
 * @brief V at each cycle boundary (re-entry into the tour's first hole),
 * as (cycle number, V). Requires at least two completed cycles.
 */
std::vector<std::pair<std::int64_t, double>> end_of_cycle_values(const SimTrace& trace);

}  // namespace ergosim
#endif
