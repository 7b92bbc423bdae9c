#ifndef ERGOSIM_GRID_HPP
#define ERGOSIM_GRID_HPP

#include <cstddef>
#include <cstdint>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace ergosim
{
/**
 * @brief Uniform rectangular grid over a 2D world domain.
 *
 * Samples live at cell centers. Cells are indexed row-major with the
 * x index varying fastest: cell(ix, iy) -> iy * nx + ix.
 */
struct GridSpec
{
  double x_min = 0.0;
  double x_max = 400.0;
  double y_min = 0.0;
  double y_max = 400.0;
  int nx = 400;
  int ny = 400;

  void validate() const
  {
    if (!(x_max > x_min) || !(y_max > y_min))
    {
      throw std::invalid_argument("GridSpec: domain bounds must satisfy max > min");
    }
    if (nx < 2 || ny < 2)
    {
      throw std::invalid_argument("GridSpec: nx and ny must be at least 2");
    }
  }

  double dx() const
  {
    return (x_max - x_min) / nx;
  }

  double dy() const
  {
    return (y_max - y_min) / ny;
  }

  /** @brief Cell area used as the quadrature weight. */
  double cell_area() const
  {
    return dx() * dy();
  }

  std::size_t size() const
  {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  }

  std::size_t index(int ix, int iy) const
  {
    return static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx) +
           static_cast<std::size_t>(ix);
  }

  Eigen::Vector2d cell_center(int ix, int iy) const
  {
    return { x_min + (ix + 0.5) * dx(), y_min + (iy + 0.5) * dy() };
  }

  Eigen::Vector2d cell_center(std::size_t cell) const
  {
    const int iy = static_cast<int>(cell / static_cast<std::size_t>(nx));
    const int ix = static_cast<int>(cell % static_cast<std::size_t>(nx));
    return cell_center(ix, iy);
  }

  bool contains(const Eigen::Vector2d& p) const
  {
    return p.x() >= x_min && p.x() <= x_max && p.y() >= y_min && p.y() <= y_max;
  }

  /** @brief Cell containing a world point, clamped to the grid. */
  std::size_t cell_of(const Eigen::Vector2d& p) const
  {
    int ix = static_cast<int>(std::floor((p.x() - x_min) / dx()));
    int iy = static_cast<int>(std::floor((p.y() - y_min) / dy()));
    ix = ix < 0 ? 0 : (ix >= nx ? nx - 1 : ix);
    iy = iy < 0 ? 0 : (iy >= ny ? ny - 1 : iy);
    return index(ix, iy);
  }

  bool operator==(const GridSpec& o) const
  {
    return x_min == o.x_min && x_max == o.x_max && y_min == o.y_min &&
           y_max == o.y_max && nx == o.nx && ny == o.ny;
  }
};

/** @brief Real-valued function sampled on a GridSpec, one value per cell center. */
class ScalarField
{
public:
  explicit ScalarField(const GridSpec& spec, double fill = 0.0)
    : spec_(spec), values_(spec.size(), fill)
  {
    spec.validate();
  }

  const GridSpec& spec() const
  {
    return spec_;
  }

  double& operator[](std::size_t cell)
  {
    return values_[cell];
  }

  double operator[](std::size_t cell) const
  {
    return values_[cell];
  }

  double& at(int ix, int iy)
  {
    return values_[spec_.index(ix, iy)];
  }

  double at(int ix, int iy) const
  {
    return values_[spec_.index(ix, iy)];
  }

  std::size_t size() const
  {
    return values_.size();
  }

  const std::vector<double>& values() const
  {
    return values_;
  }

  std::vector<double>& values()
  {
    return values_;
  }

private:
  GridSpec spec_;
  std::vector<double> values_;
};

/**
 * @brief Compensated (Neumaier) accumulator.
 *
 * Fixed evaluation order plus compensation keeps grid reductions
 * deterministic and accurate to a few ulp.
 */
class KahanSum
{
public:
  void add(double x)
  {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
    {
      comp_ += (sum_ - t) + x;
    }
    else
    {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const
  {
    return sum_ + comp_;
  }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/** @brief Midpoint-rule integral over the whole domain. */
double integrate(const ScalarField& field);

/** @brief Midpoint-rule integral over the cells selected by a predicate. */
template <typename Pred>
double integrate_where(const ScalarField& field, Pred&& keep)
{
  KahanSum sum;
  const std::size_t n = field.size();
  for (std::size_t c = 0; c < n; ++c)
  {
    if (keep(c))
    {
      sum.add(field[c]);
    }
  }
  return sum.value() * field.spec().cell_area();
}

/** @brief Midpoint-rule integral over an explicit cell list (ascending order). */
double integrate_cells(const ScalarField& field, const std::vector<std::int32_t>& cells);

/** @brief Throws if the two fields are not defined on the same grid. */
void require_same_grid(const ScalarField& a, const ScalarField& b);

}  // namespace ergosim
#endif
