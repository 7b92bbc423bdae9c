#ifndef ERGOSIM_CONFIG_HPP
#define ERGOSIM_CONFIG_HPP

#include <string>

#include <ergosim/sim.hpp>

namespace ergosim
{
/**
 * @brief Parse the flat key-value configuration grammar.
 *
 * Lines are `key = value` with `#` comments; values are numbers or
 * bracketed numeric arrays; keys use dotted sections with 1-based hole
 * indices (hole.1.mean = [80, 250]). Unknown keys are errors, missing
 * keys take the documented defaults; the mixture itself is mandatory.
 *
 * Errors are reported through ValidationError with one entry per issue,
 * each naming the offending key and line.
 */
SimConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");

/** @brief parse_config_text over a file; a missing or unreadable file is a ValidationError. */
SimConfig parse_config_file(const std::string& path);

/** @brief Apply one `key=value` override (same grammar as a config line). */
void apply_override(SimConfig& config, const std::string& assignment);

/**
 * @brief Serialize a config so that parse_config_text(emit_config(c)) == c.
 * Floating-point values are printed with 17 significant digits.
 */
std::string emit_config(const SimConfig& config);

}  // namespace ergosim
#endif
