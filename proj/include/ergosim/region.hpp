#ifndef ERGOSIM_REGION_HPP
#define ERGOSIM_REGION_HPP

#include <cstdint>
#include <vector>

#include <ergosim/gaussian.hpp>
#include <ergosim/grid.hpp>

namespace ergosim
{
/**
 * @brief Cellwise decomposition of the domain into holes and their complement.
 *
 * A cell belongs to hole i when its center lies within the sigma_level
 * Mahalanobis ellipse of component i. Overlaps resolve to the lowest
 * component index, so every inside cell has exactly one hole id.
 */
class RegionMask
{
public:
  RegionMask(const GridSpec& spec, std::vector<std::int32_t> hole_id, int hole_count);

  const GridSpec& spec() const
  {
    return spec_;
  }

  /** @brief Hole index of a cell, -1 when the cell lies in the complement. */
  std::int32_t hole_id(std::size_t cell) const
  {
    return hole_id_[cell];
  }

  bool inside_any(std::size_t cell) const
  {
    return hole_id_[cell] >= 0;
  }

  int hole_count() const
  {
    return static_cast<int>(cells_.size());
  }

  /** @brief Cells of one hole in ascending linear order. */
  const std::vector<std::int32_t>& hole_cells(int hole) const;

  /** @brief All hole cells (the union), ascending. */
  const std::vector<std::int32_t>& all_hole_cells() const
  {
    return union_cells_;
  }

private:
  GridSpec spec_;
  std::vector<std::int32_t> hole_id_;
  std::vector<std::vector<std::int32_t>> cells_;
  std::vector<std::int32_t> union_cells_;
};

/** @brief Build the hole masks for every mixture component. sigma_level must be > 0. */
RegionMask build_hole_masks(const MixtureModel& model, const GridSpec& spec,
                            double sigma_level = 3.0);

/**
 * @brief Euclidean distance from a point to the sigma_level ellipse boundary
 * of a Gaussian. Exact to ~1e-9 via a dense angular scan refined by
 * golden-section search; valid for points inside or outside the ellipse.
 */
double ellipse_boundary_distance(const Gaussian& g, const Eigen::Vector2d& p,
                                 double sigma_level);

}  // namespace ergosim
#endif
