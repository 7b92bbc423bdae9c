#include <ergosim/io.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <ergosim/config.hpp>
#include <ergosim/version.hpp>

namespace ergosim
{
namespace
{
std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out)
{
  std::ofstream out(path, mode);
  if (!out)
  {
    throw std::ios_base::failure("cannot open '" + path + "' for writing");
  }
  return out;
}

void close_checked(std::ofstream& out, const std::string& path)
{
  out.flush();
  if (!out)
  {
    throw std::ios_base::failure("write failed for '" + path + "'");
  }
}

const char* phase_name(Phase p)
{
  return p == Phase::Transit ? "TRANSIT" : "DWELL";
}
}  // namespace

std::string format_double(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_pgm16(const std::string& path, const ScalarField& field)
{
  const GridSpec& spec = field.spec();
  double lo = field[0];
  double hi = field[0];
  for (const double v : field.values())
  {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double scale = hi > lo ? 65535.0 / (hi - lo) : 0.0;

  auto out = open_out(path, std::ios::out | std::ios::binary);
  out << "P5\n" << spec.nx << " " << spec.ny << "\n65535\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(spec.nx) * 2);
  // Image rows top-down: the last grid row (largest y) comes first.
  for (int iy = spec.ny - 1; iy >= 0; --iy)
  {
    for (int ix = 0; ix < spec.nx; ++ix)
    {
      const double v = (field.at(ix, iy) - lo) * scale;
      const auto g = static_cast<unsigned>(std::lround(std::clamp(v, 0.0, 65535.0)));
      row[static_cast<std::size_t>(ix) * 2] = static_cast<unsigned char>(g >> 8);
      row[static_cast<std::size_t>(ix) * 2 + 1] = static_cast<unsigned char>(g & 0xff);
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size()));
  }
  close_checked(out, path);
}

void write_field_csv(const std::string& path, const ScalarField& field)
{
  const GridSpec& spec = field.spec();
  auto out = open_out(path);
  for (int iy = 0; iy < spec.ny; ++iy)
  {
    for (int ix = 0; ix < spec.nx; ++ix)
    {
      out << (ix == 0 ? "" : ",") << format_double(field.at(ix, iy));
    }
    out << "\n";
  }
  close_checked(out, path);
}

void write_metrics_csv(const std::string& path, const SimTrace& trace)
{
  auto out = open_out(path);
  out << "k,V,target_hole,phase,cycle\n";
  for (const MetricsRow& r : trace.metrics)
  {
    out << r.k << "," << format_double(r.V) << "," << r.target_hole + 1 << ","
        << phase_name(r.phase) << "," << r.cycle << "\n";
  }
  close_checked(out, path);
}

void write_trajectory_csv(const std::string& path, const SimTrace& trace)
{
  auto out = open_out(path);
  out << "k,x,y\n";
  for (const TrajectoryRow& r : trace.trajectory)
  {
    out << r.k << "," << format_double(r.x) << "," << format_double(r.y) << "\n";
  }
  close_checked(out, path);
}

void write_events_csv(const std::string& path, const SimTrace& trace)
{
  auto out = open_out(path);
  out << "k,event,hole,h,h_bar_prime,h_bar_dprime,frozen_a,residual,cycle\n";
  for (const EventRow& r : trace.events)
  {
    out << r.k << "," << (r.kind == EventKind::Arrive ? "arrive" : "depart") << ","
        << r.hole + 1 << "," << r.h << "," << r.h_bar_prime << ",";
    if (r.h_bar_dprime.has_value())
    {
      out << *r.h_bar_dprime;
    }
    out << "," << format_double(r.frozen_a) << "," << format_double(r.residual)
        << "," << r.cycle << "\n";
  }
  close_checked(out, path);
}

void write_manifest(const std::string& path, const SimConfig& config,
                    const SimTrace& trace, const std::vector<std::string>& artifacts,
                    double wall_seconds)
{
  auto out = open_out(path);
  out << "# ergosim run manifest (valid config; rerun with --config " << path << ")\n";
  out << "# meta: version = " << kVersion << "\n";
  out << "# meta: wall_seconds = " << format_double(wall_seconds) << "\n";
  out << "# meta: initial_V = " << format_double(trace.initial_V) << "\n";
  out << "# meta: final_V = " << format_double(trace.final_V) << "\n";
  out << "# meta: cycles_completed = " << trace.cycles_completed << "\n";
  for (const std::string& a : artifacts)
  {
    out << "# meta: artifact = " << a << "\n";
  }
  for (const std::string& w : trace.warnings)
  {
    out << "# meta: warning = " << w << "\n";
  }
  out << emit_config(config);
  close_checked(out, path);
}

}  // namespace ergosim
