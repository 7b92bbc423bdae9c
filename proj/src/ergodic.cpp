#include <ergosim/ergodic.hpp>

#include <cmath>
#include <stdexcept>

namespace ergosim
{
MassAccumulator::MassAccumulator(const GridSpec& spec, const Eigen::Matrix2d& sigma_robot,
                                 double stamp_radius_sigmas)
  : sum_(spec), shape_(Eigen::Vector2d::Zero(), sigma_robot), radius_sigmas_(stamp_radius_sigmas)
{
  if (!(stamp_radius_sigmas >= 3.0))
  {
    throw std::invalid_argument("MassAccumulator: stamp radius must be >= 3 sigmas");
  }
}

void MassAccumulator::deposit(const Eigen::Vector2d& position)
{
  stamp_gaussian(sum_, shape_.with_mean(position), radius_sigmas_);
  ++count_;
}

std::int64_t MassAccumulator::step() const
{
  if (count_ == 0)
  {
    throw std::logic_error("MassAccumulator: no deposits yet");
  }
  return count_ - 1;
}

ScalarField MassAccumulator::time_average() const
{
  if (count_ == 0)
  {
    throw std::logic_error("MassAccumulator: no deposits yet");
  }
  ScalarField avg = sum_;
  const double inv = inv_count();
  for (double& v : avg.values())
  {
    v *= inv;
  }
  return avg;
}

ScalarField compute_phi(const ScalarField& rho_k, const ScalarField& rho_star)
{
  require_same_grid(rho_k, rho_star);
  ScalarField phi = rho_k;
  for (std::size_t c = 0; c < phi.size(); ++c)
  {
    phi[c] -= rho_star[c];
  }
  return phi;
}

double ergodic_value(const ScalarField& phi)
{
  KahanSum sum;
  for (const double v : phi.values())
  {
    sum.add(std::abs(v));
  }
  return sum.value() * phi.spec().cell_area();
}

ScalarField delta_rho_oracle(const MassAccumulator& acc,
                             const std::vector<ScalarField>& future_stamps)
{
  if (future_stamps.empty())
  {
    throw std::invalid_argument("delta_rho_oracle: need at least one future stamp");
  }
  const std::int64_t k = acc.step();
  const auto h = static_cast<std::int64_t>(future_stamps.size());

  ScalarField delta(acc.sum_field().spec());
  for (const ScalarField& f : future_stamps)
  {
    require_same_grid(delta, f);
    for (std::size_t c = 0; c < delta.size(); ++c)
    {
      delta[c] += f[c];
    }
  }
  const double inv_k1 = acc.inv_count();
  const double inv_kh1 = 1.0 / static_cast<double>(k + h + 1);
  const auto hd = static_cast<double>(h);
  const ScalarField& s = acc.sum_field();
  for (std::size_t c = 0; c < delta.size(); ++c)
  {
    delta[c] = (delta[c] - hd * (s[c] * inv_k1)) * inv_kh1;
  }
  return delta;
}

double stay_bound(std::int64_t h, double a)
{
  if (h < 0)
  {
    throw std::invalid_argument("stay_bound: h must be non-negative");
  }
  if (!(a >= 0.0) || a >= 1.0)
  {
    throw std::invalid_argument("stay_bound: hole mass fraction must lie in [0, 1)");
  }
  return static_cast<double>(h) * a / (1.0 - a);
}

std::int64_t min_steps_above(double bound)
{
  if (!(bound >= 0.0))
  {
    throw std::invalid_argument("min_steps_above: bound must be non-negative");
  }
  return static_cast<std::int64_t>(std::floor(bound)) + 1;
}

double predict_V_rise(std::int64_t k, std::int64_t h, double a)
{
  if (k < 0 || h < 0)
  {
    throw std::invalid_argument("predict_V_rise: k and h must be non-negative");
  }
  if (!(a >= 0.0) || a >= 1.0)
  {
    throw std::invalid_argument("predict_V_rise: hole mass fraction must lie in [0, 1)");
  }
  return 2.0 * static_cast<double>(h) * a / static_cast<double>(k + h + 1);
}

double predict_V_fall(std::int64_t k, std::int64_t h, std::int64_t h_prime, double a)
{
  if (k < 0 || h < 0 || h_prime < 0)
  {
    throw std::invalid_argument("predict_V_fall: step counts must be non-negative");
  }
  if (!(a >= 0.0) || a >= 1.0)
  {
    throw std::invalid_argument("predict_V_fall: hole mass fraction must lie in [0, 1)");
  }
  const double shrunk_a =
      a * static_cast<double>(k + 1) / static_cast<double>(k + h + 1);
  return 2.0 * static_cast<double>(h_prime) * (1.0 - shrunk_a) /
         static_cast<double>(k + h + h_prime + 1);
}

double hole_residual(const ScalarField& phi, const RegionMask& mask, int hole)
{
  if (!(phi.spec() == mask.spec()))
  {
    throw std::invalid_argument("hole_residual: field and mask grids differ");
  }
  KahanSum sum;
  for (const std::int32_t c : mask.hole_cells(hole))
  {
    sum.add(std::abs(phi[static_cast<std::size_t>(c)]));
  }
  return sum.value() * phi.spec().cell_area();
}

double hole_deficit(const ScalarField& phi, const RegionMask& mask, int hole)
{
  if (!(phi.spec() == mask.spec()))
  {
    throw std::invalid_argument("hole_deficit: field and mask grids differ");
  }
  KahanSum sum;
  for (const std::int32_t c : mask.hole_cells(hole))
  {
    const double v = phi[static_cast<std::size_t>(c)];
    if (v < 0.0)
    {
      sum.add(-v);
    }
  }
  return sum.value() * phi.spec().cell_area();
}

double departure_threshold(const TimingParams& params)
{
  if (!(params.beta > 0.0))
  {
    throw std::invalid_argument("departure_threshold: beta must be > 0");
  }
  if (!(params.gamma >= 0.0))
  {
    throw std::invalid_argument("departure_threshold: gamma must be >= 0");
  }
  if (params.cycle < 0)
  {
    throw std::invalid_argument("departure_threshold: cycle must be >= 0");
  }
  return params.beta * std::exp(-params.gamma * static_cast<double>(params.cycle));
}

double ergodic_value_from(const MassAccumulator& acc, const ScalarField& rho_star)
{
  require_same_grid(acc.sum_field(), rho_star);
  const double inv = acc.inv_count();
  const ScalarField& s = acc.sum_field();
  KahanSum sum;
  for (std::size_t c = 0; c < s.size(); ++c)
  {
    sum.add(std::abs(s[c] * inv - rho_star[c]));
  }
  return sum.value() * s.spec().cell_area();
}

double total_mass_from(const MassAccumulator& acc)
{
  const double inv = acc.inv_count();
  const ScalarField& s = acc.sum_field();
  KahanSum sum;
  for (std::size_t c = 0; c < s.size(); ++c)
  {
    sum.add(s[c] * inv);
  }
  return sum.value() * s.spec().cell_area();
}

double hole_mass_fraction(const MassAccumulator& acc, const RegionMask& mask)
{
  if (!(acc.sum_field().spec() == mask.spec()))
  {
    throw std::invalid_argument("hole_mass_fraction: accumulator and mask grids differ");
  }
  const double inv = acc.inv_count();
  const ScalarField& s = acc.sum_field();
  KahanSum sum;
  for (const std::int32_t c : mask.all_hole_cells())
  {
    sum.add(s[static_cast<std::size_t>(c)] * inv);
  }
  return sum.value() * s.spec().cell_area();
}

double hole_residual_from(const MassAccumulator& acc, const ScalarField& rho_star,
                          const RegionMask& mask, int hole)
{
  require_same_grid(acc.sum_field(), rho_star);
  const double inv = acc.inv_count();
  const ScalarField& s = acc.sum_field();
  KahanSum sum;
  for (const std::int32_t c : mask.hole_cells(hole))
  {
    const auto cc = static_cast<std::size_t>(c);
    sum.add(std::abs(s[cc] * inv - rho_star[cc]));
  }
  return sum.value() * s.spec().cell_area();
}

double hole_deficit_from(const MassAccumulator& acc, const ScalarField& rho_star,
                         const RegionMask& mask, int hole)
{
  require_same_grid(acc.sum_field(), rho_star);
  const double inv = acc.inv_count();
  const ScalarField& s = acc.sum_field();
  KahanSum sum;
  for (const std::int32_t c : mask.hole_cells(hole))
  {
    const auto cc = static_cast<std::size_t>(c);
    const double v = s[cc] * inv - rho_star[cc];
    if (v < 0.0)
    {
      sum.add(-v);
    }
  }
  return sum.value() * s.spec().cell_area();
}

}  // namespace ergosim
