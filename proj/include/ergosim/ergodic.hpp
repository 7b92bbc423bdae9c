#ifndef ERGOSIM_ERGODIC_HPP
#define ERGOSIM_ERGODIC_HPP

#include <cstdint>
#include <vector>

#include <ergosim/gaussian.hpp>
#include <ergosim/grid.hpp>
#include <ergosim/region.hpp>

namespace ergosim
{
/**
 * @brief Running, unnormalized sum of the robot's deposited stamps.
 *
 * Keeps S_k = sum of the unit-mass stamps f_0..f_k so that the
 * time-averaged distribution rho_k = S_k / (k+1) never needs a
 * whole-grid rescale per step. The discrete step k equals the number
 * of deposits minus one.
 */
class MassAccumulator
{
public:
  MassAccumulator(const GridSpec& spec, const Eigen::Matrix2d& sigma_robot,
                  double stamp_radius_sigmas = 5.0);

  /** @brief Stamp N(position, sigma_robot) into the sum and advance the step. */
  void deposit(const Eigen::Vector2d& position);

  std::int64_t count() const
  {
    return count_;
  }

  /** @brief Current discrete step k (count - 1). Requires one deposit. */
  std::int64_t step() const;

  const ScalarField& sum_field() const
  {
    return sum_;
  }

  /** @brief 1/(k+1), the factor applied cellwise by time_average(). */
  double inv_count() const
  {
    return 1.0 / static_cast<double>(count_);
  }

  /** @brief Time-averaged distribution rho_k = S_k / (k+1). */
  ScalarField time_average() const;

  const Gaussian& stamp_shape() const
  {
    return shape_;
  }

  double stamp_radius_sigmas() const
  {
    return radius_sigmas_;
  }

private:
  ScalarField sum_;
  Gaussian shape_;
  double radius_sigmas_;
  std::int64_t count_ = 0;
};

/** @brief Ergodic error phi_k = rho_k - rho_star (cellwise; grids must match). */
ScalarField compute_phi(const ScalarField& rho_k, const ScalarField& rho_star);

/** @brief Ergodic function V = integral of |phi|; lies in [0, 2] up to quadrature. */
double ergodic_value(const ScalarField& phi);

/**
 * @brief Closed-form change of the time average after h further deposits:
 * (sum of the h future stamps - h * rho_k) / (k+h+1).
 *
 * Equals rho_{k+h} - rho_k obtained by actually depositing.
 */
ScalarField delta_rho_oracle(const MassAccumulator& acc,
                             const std::vector<ScalarField>& future_stamps);

/**
 * @brief Minimum dwell bound h * a / (1 - a) with a the time-averaged mass
 * currently inside the holes. The stay time must be strictly greater.
 */
double stay_bound(std::int64_t h, double a);

/** @brief Smallest integer step count strictly greater than a dwell bound. */
std::int64_t min_steps_above(double bound);

/** @brief Idealized rise |V_{k+h} - V_k| = 2 h a / (k+h+1) while crossing the complement. */
double predict_V_rise(std::int64_t k, std::int64_t h, double a);

/**
 * @brief Idealized fall |V_{k+h+h'} - V_{k+h}| =
 * 2 h' (1 - a (k+1)/(k+h+1)) / (k+h+h'+1) while filling a hole.
 */
double predict_V_fall(std::int64_t k, std::int64_t h, std::int64_t h_prime, double a);

/** @brief Quadrature of |phi| over one hole's cells. */
double hole_residual(const ScalarField& phi, const RegionMask& mask, int hole);

/**
 * @brief Quadrature of the remaining deficit max(-phi, 0) over one hole.
 *
 * Equal to hole_residual whenever phi <= 0 throughout the hole (the
 * idealized dwell regime); unlike |phi| it keeps falling once coarse
 * early stamps overshoot locally, so the departure rule cannot wedge on
 * quantization overshoot.
 */
double hole_deficit(const ScalarField& phi, const RegionMask& mask, int hole);

/** @brief Departure schedule parameters; the threshold shrinks each cycle. */
struct TimingParams
{
  double beta = 0.1;
  double gamma = 0.05;
  std::int64_t cycle = 0;
};

/** @brief c_N = beta * exp(-gamma * N), strictly positive, non-increasing in N. */
double departure_threshold(const TimingParams& params);

// Accumulator-backed evaluations used by the simulation loop. These apply
// the same per-cell expression S[c] * inv - rho_star[c] as the materialized
// compute_phi(time_average(acc), rho_star) path, so selections and sums are
// bit-identical between the two routes.

/** @brief V computed directly from the accumulator without materializing phi. */
double ergodic_value_from(const MassAccumulator& acc, const ScalarField& rho_star);

/** @brief Total time-averaged mass on the grid. */
double total_mass_from(const MassAccumulator& acc);

/** @brief a = time-averaged mass inside the union of holes. */
double hole_mass_fraction(const MassAccumulator& acc, const RegionMask& mask);

/** @brief Residual of one hole straight from the accumulator. */
double hole_residual_from(const MassAccumulator& acc, const ScalarField& rho_star,
                          const RegionMask& mask, int hole);

/** @brief Deficit of one hole straight from the accumulator. */
double hole_deficit_from(const MassAccumulator& acc, const ScalarField& rho_star,
                         const RegionMask& mask, int hole);

}  // namespace ergosim
#endif
