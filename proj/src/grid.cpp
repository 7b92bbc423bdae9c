#include <ergosim/grid.hpp>

namespace ergosim
{
double integrate(const ScalarField& field)
{
  KahanSum sum;
  for (const double v : field.values())
  {
    sum.add(v);
  }
  return sum.value() * field.spec().cell_area();
}

double integrate_cells(const ScalarField& field, const std::vector<std::int32_t>& cells)
{
  KahanSum sum;
  for (const std::int32_t c : cells)
  {
    sum.add(field[static_cast<std::size_t>(c)]);
  }
  return sum.value() * field.spec().cell_area();
}

void require_same_grid(const ScalarField& a, const ScalarField& b)
{
  if (!(a.spec() == b.spec()))
  {
    throw std::invalid_argument("ScalarField: grids differ, fields cannot be combined");
  }
}

}  // namespace ergosim
