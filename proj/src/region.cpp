#include <ergosim/region.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ergosim
{
RegionMask::RegionMask(const GridSpec& spec, std::vector<std::int32_t> hole_id,
                       int hole_count)
  : spec_(spec), hole_id_(std::move(hole_id)), cells_(static_cast<std::size_t>(hole_count))
{
  if (hole_id_.size() != spec.size())
  {
    throw std::invalid_argument("RegionMask: hole_id size does not match the grid");
  }
  for (std::size_t c = 0; c < hole_id_.size(); ++c)
  {
    const std::int32_t id = hole_id_[c];
    if (id >= hole_count)
    {
      throw std::invalid_argument("RegionMask: hole id out of range");
    }
    if (id >= 0)
    {
      cells_[static_cast<std::size_t>(id)].push_back(static_cast<std::int32_t>(c));
      union_cells_.push_back(static_cast<std::int32_t>(c));
    }
  }
}

const std::vector<std::int32_t>& RegionMask::hole_cells(int hole) const
{
  if (hole < 0 || hole >= hole_count())
  {
    throw std::out_of_range("RegionMask: invalid hole index");
  }
  return cells_[static_cast<std::size_t>(hole)];
}

RegionMask build_hole_masks(const MixtureModel& model, const GridSpec& spec,
                            double sigma_level)
{
  spec.validate();
  if (!(sigma_level > 0.0))
  {
    throw std::invalid_argument("build_hole_masks: sigma_level must be > 0");
  }

  const double level_sq = sigma_level * sigma_level;
  std::vector<std::int32_t> hole_id(spec.size(), -1);
  for (int iy = 0; iy < spec.ny; ++iy)
  {
    for (int ix = 0; ix < spec.nx; ++ix)
    {
      const Eigen::Vector2d c = spec.cell_center(ix, iy);
      // First matching component wins: overlapping holes resolve to the
      // lowest index.
      for (int i = 0; i < model.size(); ++i)
      {
        if (model.component(i).gaussian.mahalanobis_sq(c) <= level_sq)
        {
          hole_id[spec.index(ix, iy)] = i;
          break;
        }
      }
    }
  }
  return RegionMask(spec, std::move(hole_id), model.size());
}

double ellipse_boundary_distance(const Gaussian& g, const Eigen::Vector2d& p,
                                 double sigma_level)
{
  if (!(sigma_level > 0.0))
  {
    throw std::invalid_argument("ellipse_boundary_distance: sigma_level must be > 0");
  }
  // Work in the ellipse frame: columns of the eigenvector matrix map frame
  // axes to world axes; semi-axis i has length sigma_level * sqrt(lambda_i).
  const Eigen::Vector2d q = g.cov_eigenvectors().transpose() * (p - g.mean());
  const double a = sigma_level * std::sqrt(g.cov_eigenvalues()(0));
  const double b = sigma_level * std::sqrt(g.cov_eigenvalues()(1));

  const auto dist_sq = [&](double theta) {
    const double ex = a * std::cos(theta) - q.x();
    const double ey = b * std::sin(theta) - q.y();
    return ex * ex + ey * ey;
  };

  // Dense scan to bracket the global minimum, then golden-section refine.
  constexpr int kScan = 1024;
  constexpr double kTau = 2.0 * std::numbers::pi;
  int best = 0;
  double best_val = dist_sq(0.0);
  for (int i = 1; i < kScan; ++i)
  {
    const double v = dist_sq(kTau * i / kScan);
    if (v < best_val)
    {
      best_val = v;
      best = i;
    }
  }
  double lo = kTau * (best - 1) / kScan;
  double hi = kTau * (best + 1) / kScan;

  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = dist_sq(x1);
  double f2 = dist_sq(x2);
  for (int it = 0; it < 90; ++it)
  {
    if (f1 < f2)
    {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = dist_sq(x1);
    }
    else
    {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = dist_sq(x2);
    }
  }
  return std::sqrt(std::min(f1, f2));
}

}  // namespace ergosim
