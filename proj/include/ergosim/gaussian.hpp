#ifndef ERGOSIM_GAUSSIAN_HPP
#define ERGOSIM_GAUSSIAN_HPP

#include <string>
#include <vector>

#include <Eigen/Core>

#include <ergosim/grid.hpp>

namespace ergosim
{
/**
 * @brief 2D Gaussian density with a precomputed inverse covariance.
 *
 * The covariance is checked for symmetry and positive definiteness at
 * construction; evaluation never fails after that.
 */
class Gaussian
{
public:
  Gaussian(const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov);

  double density(const Eigen::Vector2d& x) const
  {
    const Eigen::Vector2d d = x - mean_;
    return norm_ * std::exp(-0.5 * d.dot(inv_ * d));
  }

  double mahalanobis_sq(const Eigen::Vector2d& x) const
  {
    const Eigen::Vector2d d = x - mean_;
    return d.dot(inv_ * d);
  }

  /** @brief Same shape relocated to a new mean; no re-factorization. */
  Gaussian with_mean(const Eigen::Vector2d& mean) const
  {
    Gaussian g = *this;
    g.mean_ = mean;
    return g;
  }

  const Eigen::Vector2d& mean() const
  {
    return mean_;
  }

  const Eigen::Matrix2d& cov() const
  {
    return cov_;
  }

  /** @brief Peak value 1/(2*pi*sqrt(|cov|)). */
  double peak() const
  {
    return norm_;
  }

  /** @brief Eigenvalues of the covariance, ascending. */
  const Eigen::Vector2d& cov_eigenvalues() const
  {
    return eigval_;
  }

  /** @brief Unit eigenvectors, column i paired with eigenvalue i. */
  const Eigen::Matrix2d& cov_eigenvectors() const
  {
    return eigvec_;
  }

  /** @brief Half extents of the level ellipse {d : d'inv(cov)d <= s^2} along x and y. */
  Eigen::Vector2d level_half_extents(double sigma_level) const
  {
    return { sigma_level * std::sqrt(cov_(0, 0)), sigma_level * std::sqrt(cov_(1, 1)) };
  }

private:
  Eigen::Vector2d mean_;
  Eigen::Matrix2d cov_;
  Eigen::Matrix2d inv_;
  double norm_;
  Eigen::Vector2d eigval_;
  Eigen::Matrix2d eigvec_;
};

/** @brief Density of N(mu, sigma) at x. Non-SPD sigma throws std::invalid_argument. */
double gaussian_density(const Eigen::Vector2d& x, const Eigen::Vector2d& mu,
                        const Eigen::Matrix2d& sigma);

/** @brief One weighted component of the reference mixture. */
struct GaussianComponent
{
  double weight;
  Gaussian gaussian;
};

/**
 * @brief Reference spatial distribution: a weighted sum of Gaussians.
 *
 * Weights must lie in (0, 1] and sum to one within 1e-12. A single
 * component necessarily carries weight one.
 */
class MixtureModel
{
public:
  explicit MixtureModel(std::vector<GaussianComponent> components);

  double density(const Eigen::Vector2d& x) const;

  int size() const
  {
    return static_cast<int>(components_.size());
  }

  const GaussianComponent& component(int i) const
  {
    return components_.at(static_cast<std::size_t>(i));
  }

  const std::vector<GaussianComponent>& components() const
  {
    return components_;
  }

private:
  std::vector<GaussianComponent> components_;
};

/**
 * @brief Sample the mixture density at every cell center.
 *
 * A component mean outside the domain is a hard error. A 3-sigma
 * ellipse that sticks out of the domain only produces a warning entry.
 */
ScalarField rasterize_mixture(const MixtureModel& model, const GridSpec& spec,
                              std::vector<std::string>* warnings = nullptr);

/**
 * @brief Add a unit-mass Gaussian to the accumulator field, truncated at
 * Mahalanobis distance radius_sigmas. Cells outside the stamp are untouched.
 *
 * The mean must lie inside the domain and radius_sigmas must be >= 3.
 */
void stamp_gaussian(ScalarField& field, const Gaussian& shape, double radius_sigmas);

}  // namespace ergosim
#endif
