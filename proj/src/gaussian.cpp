#include <ergosim/gaussian.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace ergosim
{
namespace
{
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Symmetry tolerance relative to the largest covariance entry.
bool is_symmetric(const Eigen::Matrix2d& m)
{
  const double scale = m.cwiseAbs().maxCoeff();
  return std::abs(m(0, 1) - m(1, 0)) <= 1e-9 * std::max(scale, 1.0);
}

}  // namespace

Gaussian::Gaussian(const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov)
  : mean_(mean), cov_(cov)
{
  if (!is_symmetric(cov))
  {
    std::ostringstream msg;
    msg << "covariance is not symmetric: [" << cov(0, 0) << ", " << cov(0, 1) << "; "
        << cov(1, 0) << ", " << cov(1, 1) << "]";
    throw std::invalid_argument(msg.str());
  }
  const double det = cov(0, 0) * cov(1, 1) - cov(0, 1) * cov(1, 0);
  // Symmetric 2x2: positive definite iff trace > 0 and det > 0.
  if (!(det > 0.0) || !(cov(0, 0) + cov(1, 1) > 0.0))
  {
    std::ostringstream msg;
    msg << "covariance is not positive definite (det = " << det << ")";
    throw std::invalid_argument(msg.str());
  }
  inv_ << cov(1, 1) / det, -cov(0, 1) / det, -cov(1, 0) / det, cov(0, 0) / det;
  norm_ = 1.0 / (kTwoPi * std::sqrt(det));

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
  eigval_ = eig.eigenvalues();
  eigvec_ = eig.eigenvectors();
}

double gaussian_density(const Eigen::Vector2d& x, const Eigen::Vector2d& mu,
                        const Eigen::Matrix2d& sigma)
{
  return Gaussian(mu, sigma).density(x);
}

MixtureModel::MixtureModel(std::vector<GaussianComponent> components)
  : components_(std::move(components))
{
  if (components_.empty())
  {
    throw std::invalid_argument("MixtureModel: at least one component required");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i)
  {
    const double w = components_[i].weight;
    if (!(w > 0.0) || w > 1.0)
    {
      std::ostringstream msg;
      msg << "MixtureModel: weight " << i + 1 << " = " << w << " outside (0, 1]";
      throw std::invalid_argument(msg.str());
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
  {
    std::ostringstream msg;
    msg << "MixtureModel: weights sum to " << sum << ", expected 1";
    throw std::invalid_argument(msg.str());
  }
}

double MixtureModel::density(const Eigen::Vector2d& x) const
{
  double d = 0.0;
  for (const auto& c : components_)
  {
    d += c.weight * c.gaussian.density(x);
  }
  return d;
}

ScalarField rasterize_mixture(const MixtureModel& model, const GridSpec& spec,
                              std::vector<std::string>* warnings)
{
  spec.validate();
  for (int i = 0; i < model.size(); ++i)
  {
    const auto& g = model.component(i).gaussian;
    const Eigen::Vector2d mu = g.mean();
    if (!spec.contains(mu))
    {
      std::ostringstream msg;
      msg << "component " << i + 1 << " mean (" << mu.x() << ", " << mu.y()
          << ") lies outside the domain";
      throw std::invalid_argument(msg.str());
    }
    const Eigen::Vector2d ext = g.level_half_extents(3.0);
    if (mu.x() - ext.x() < spec.x_min || mu.x() + ext.x() > spec.x_max ||
        mu.y() - ext.y() < spec.y_min || mu.y() + ext.y() > spec.y_max)
    {
      if (warnings != nullptr)
      {
        std::ostringstream msg;
        msg << "component " << i + 1
            << ": 3-sigma ellipse extends beyond the domain; mixture mass on the "
               "grid will fall short of 1";
        warnings->push_back(msg.str());
      }
    }
  }

  ScalarField field(spec);
  for (int iy = 0; iy < spec.ny; ++iy)
  {
    for (int ix = 0; ix < spec.nx; ++ix)
    {
      field.at(ix, iy) = model.density(spec.cell_center(ix, iy));
    }
  }
  return field;
}

void stamp_gaussian(ScalarField& field, const Gaussian& shape, double radius_sigmas)
{
  if (!(radius_sigmas >= 3.0))
  {
    throw std::invalid_argument("stamp_gaussian: radius_sigmas must be >= 3");
  }
  const GridSpec& spec = field.spec();
  const Eigen::Vector2d mu = shape.mean();
  if (!spec.contains(mu))
  {
    std::ostringstream msg;
    msg << "stamp_gaussian: position (" << mu.x() << ", " << mu.y()
        << ") outside the domain";
    throw std::invalid_argument(msg.str());
  }

  // The level ellipse fits the axis-aligned box mu +- radius * sqrt(diag(cov)).
  const Eigen::Vector2d ext = shape.level_half_extents(radius_sigmas);
  int ix_lo = static_cast<int>(std::floor((mu.x() - ext.x() - spec.x_min) / spec.dx()));
  int ix_hi = static_cast<int>(std::ceil((mu.x() + ext.x() - spec.x_min) / spec.dx()));
  int iy_lo = static_cast<int>(std::floor((mu.y() - ext.y() - spec.y_min) / spec.dy()));
  int iy_hi = static_cast<int>(std::ceil((mu.y() + ext.y() - spec.y_min) / spec.dy()));
  ix_lo = std::max(ix_lo, 0);
  iy_lo = std::max(iy_lo, 0);
  ix_hi = std::min(ix_hi, spec.nx - 1);
  iy_hi = std::min(iy_hi, spec.ny - 1);

  const double r2 = radius_sigmas * radius_sigmas;
  for (int iy = iy_lo; iy <= iy_hi; ++iy)
  {
    for (int ix = ix_lo; ix <= ix_hi; ++ix)
    {
      const Eigen::Vector2d c = spec.cell_center(ix, iy);
      if (shape.mahalanobis_sq(c) <= r2)
      {
        field.at(ix, iy) += shape.density(c);
      }
    }
  }
}

}  // namespace ergosim
