#ifndef ERGOSIM_IO_HPP
#define ERGOSIM_IO_HPP

#include <string>

#include <ergosim/grid.hpp>
#include <ergosim/sim.hpp>

namespace ergosim
{
/** @brief 17 significant digits (%.17g): every double round-trips exactly. */
std::string format_double(double v);

/**
 * @brief 16-bit binary PGM (P5, maxval 65535, big-endian), max-normalized
 * with the field minimum mapped to 0. Rows run top-down (largest y first).
 */
void write_pgm16(const std::string& path, const ScalarField& field);

/** @brief CSV grid dump: one line per grid row (ascending y), comma-separated. */
void write_field_csv(const std::string& path, const ScalarField& field);

void write_metrics_csv(const std::string& path, const SimTrace& trace);
void write_trajectory_csv(const std::string& path, const SimTrace& trace);
void write_events_csv(const std::string& path, const SimTrace& trace);

/**
 * @brief Run manifest: the fully resolved configuration (directly reusable
 * as a config file) plus `# meta:` comment lines recording artifact paths,
 * wall-clock duration, final V, cycle count and software version.
 */
void write_manifest(const std::string& path, const SimConfig& config,
                    const SimTrace& trace, const std::vector<std::string>& artifacts,
                    double wall_seconds);

}  // namespace ergosim
#endif
