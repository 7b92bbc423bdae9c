#include <ergosim/config.hpp>

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <ergosim/io.hpp>

namespace ergosim
{
namespace
{
struct ParsedValue
{
  bool is_array = false;
  std::vector<double> numbers;  // scalars use numbers[0]
};

std::string trim(const std::string& s)
{
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
  {
    ++b;
  }
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
  {
    --e;
  }
  return s.substr(b, e - b);
}

bool parse_number(const std::string& token, double& out)
{
  const std::string t = trim(token);
  if (t.empty())
  {
    return false;
  }
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

bool parse_value(const std::string& text, ParsedValue& out)
{
  const std::string t = trim(text);
  if (t.empty())
  {
    return false;
  }
  if (t.front() == '[')
  {
    if (t.back() != ']')
    {
      return false;
    }
    out.is_array = true;
    const std::string inner = t.substr(1, t.size() - 2);
    std::string token;
    std::istringstream ss(inner);
    while (std::getline(ss, token, ','))
    {
      double v = 0.0;
      if (!parse_number(token, v))
      {
        return false;
      }
      out.numbers.push_back(v);
    }
    return !out.numbers.empty();
  }
  out.is_array = false;
  double v = 0.0;
  if (!parse_number(t, v))
  {
    return false;
  }
  out.numbers.push_back(v);
  return true;
}

struct Assignment
{
  std::string key;
  ParsedValue value;
  int line = 0;
  std::string origin;

  std::string where() const
  {
    return origin + ":" + std::to_string(line);
  }
};

/** Collects issues and assignments; applies them onto a SimConfig at the end. */
class ConfigBuilder
{
public:
  void add_line(const std::string& raw, int line, const std::string& origin)
  {
    std::string text = raw;
    const std::size_t hash = text.find('#');
    if (hash != std::string::npos)
    {
      text = text.substr(0, hash);
    }
    text = trim(text);
    if (text.empty())
    {
      return;
    }
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos)
    {
      issue(origin + ":" + std::to_string(line) + ": expected `key = value`");
      return;
    }
    Assignment a;
    a.key = trim(text.substr(0, eq));
    a.line = line;
    a.origin = origin;
    if (a.key.empty())
    {
      issue(a.where() + ": empty key");
      return;
    }
    if (!parse_value(text.substr(eq + 1), a.value))
    {
      issue(a.where() + ": key '" + a.key +
            "': value must be a number or [num, num, ...]");
      return;
    }
    if (seen_.count(a.key) != 0)
    {
      issue(a.where() + ": duplicate key '" + a.key + "'");
      return;
    }
    seen_.insert(a.key);
    assignments_.push_back(std::move(a));
  }

  void issue(const std::string& msg)
  {
    issues_.push_back(msg);
  }

  /**
   * Applies assignments; grammar and semantic problems both become issues.
   * A full parse requires every referenced hole to be complete and the
   * indices contiguous; overrides onto an existing config do not.
   */
  SimConfig build(SimConfig config, bool full_parse)
  {
    bool start_given = false;
    std::map<int, bool> hole_indices;
    const auto holes_before = static_cast<int>(config.holes.size());

    for (const Assignment& a : assignments_)
    {
      apply(a, config, start_given, hole_indices);
    }

    if (full_parse && !hole_indices.empty())
    {
      const int m = hole_indices.rbegin()->first;
      for (int i = 1; i <= m; ++i)
      {
        if (hole_indices.count(i) == 0)
        {
          issue("hole." + std::to_string(i) + " is missing (indices must be "
                "contiguous from 1)");
        }
      }
      for (const auto& [idx, _] : hole_indices)
      {
        for (const char* field : { "weight", "mean", "cov" })
        {
          const std::string key = "hole." + std::to_string(idx) + "." + field;
          if (seen_.count(key) == 0)
          {
            issue("missing key '" + key + "'");
          }
        }
      }
    }
    else if (!full_parse && !hole_indices.empty() &&
             hole_indices.rbegin()->first > holes_before)
    {
      issue("--set cannot introduce new holes (index exceeds the configured "
            "mixture size)");
    }

    if (full_parse && !start_given)
    {
      config.start = { 0.5 * (config.grid.x_min + config.grid.x_max),
                       0.5 * (config.grid.y_min + config.grid.y_max) };
    }

    if (issues_.empty())
    {
      const std::vector<std::string> semantic = config.validate();
      issues_.insert(issues_.end(), semantic.begin(), semantic.end());
    }
    if (!issues_.empty())
    {
      throw ValidationError(std::move(issues_));
    }
    return config;
  }

private:
  void apply(const Assignment& a, SimConfig& config, bool& start_given,
             std::map<int, bool>& hole_indices)
  {
    auto scalar = [&](double& target) {
      if (a.value.is_array)
      {
        issue(a.where() + ": key '" + a.key + "' expects a single number");
        return;
      }
      target = a.value.numbers[0];
    };
    auto integer = [&](auto& target) {
      if (a.value.is_array || a.value.numbers[0] != std::floor(a.value.numbers[0]))
      {
        issue(a.where() + ": key '" + a.key + "' expects an integer");
        return;
      }
      target = static_cast<std::decay_t<decltype(target)>>(a.value.numbers[0]);
    };
    auto vec2 = [&](Eigen::Vector2d& target) {
      if (!a.value.is_array || a.value.numbers.size() != 2)
      {
        issue(a.where() + ": key '" + a.key + "' expects [x, y]");
        return;
      }
      target = { a.value.numbers[0], a.value.numbers[1] };
    };
    auto mat2 = [&](Eigen::Matrix2d& target) {
      if (!a.value.is_array || a.value.numbers.size() != 4)
      {
        issue(a.where() + ": key '" + a.key + "' expects [a, b, c, d] row-major");
        return;
      }
      target << a.value.numbers[0], a.value.numbers[1], a.value.numbers[2],
          a.value.numbers[3];
    };

    if (a.key == "domain.x_min")
    {
      scalar(config.grid.x_min);
    }
    else if (a.key == "domain.x_max")
    {
      scalar(config.grid.x_max);
    }
    else if (a.key == "domain.y_min")
    {
      scalar(config.grid.y_min);
    }
    else if (a.key == "domain.y_max")
    {
      scalar(config.grid.y_max);
    }
    else if (a.key == "grid.nx")
    {
      integer(config.grid.nx);
    }
    else if (a.key == "grid.ny")
    {
      integer(config.grid.ny);
    }
    else if (a.key == "robot.start")
    {
      vec2(config.start);
      start_given = true;
    }
    else if (a.key == "robot.cov")
    {
      mat2(config.sigma_robot);
    }
    else if (a.key == "robot.v_max")
    {
      scalar(config.v_max);
    }
    else if (a.key == "timing.beta")
    {
      scalar(config.beta);
    }
    else if (a.key == "timing.gamma")
    {
      scalar(config.gamma);
    }
    else if (a.key == "run.max_steps")
    {
      integer(config.max_steps);
    }
    else if (a.key == "run.v_every")
    {
      integer(config.v_every);
    }
    else if (a.key == "run.sigma_level")
    {
      scalar(config.sigma_level);
    }
    else if (a.key == "run.stamp_radius_sigmas")
    {
      scalar(config.stamp_radius_sigmas);
    }
    else if (a.key == "run.snapshot_fracs")
    {
      if (!a.value.is_array)
      {
        issue(a.where() + ": key '" + a.key + "' expects an array");
        return;
      }
      config.snapshot_fractions = a.value.numbers;
    }
    else if (a.key.rfind("hole.", 0) == 0)
    {
      apply_hole(a, config, hole_indices);
    }
    else
    {
      issue(a.where() + ": unknown key '" + a.key + "'");
    }
  }

  void apply_hole(const Assignment& a, SimConfig& config,
                  std::map<int, bool>& hole_indices)
  {
    const std::string rest = a.key.substr(5);
    const std::size_t dot = rest.find('.');
    long idx = 0;
    if (dot != std::string::npos && dot > 0)
    {
      const std::string id = rest.substr(0, dot);
      char* end = nullptr;
      idx = std::strtol(id.c_str(), &end, 10);
      if (end != id.c_str() + id.size())
      {
        idx = 0;
      }
    }
    if (idx < 1 || idx > 1024)
    {
      issue(a.where() + ": unknown key '" + a.key +
            "' (expected hole.<i>.weight|mean|cov with i >= 1)");
      return;
    }
    const std::string field = rest.substr(dot + 1);
    hole_indices[static_cast<int>(idx)] = true;
    if (config.holes.size() < static_cast<std::size_t>(idx))
    {
      config.holes.resize(static_cast<std::size_t>(idx));
    }
    ComponentSpec& hole = config.holes[static_cast<std::size_t>(idx - 1)];

    if (field == "weight")
    {
      if (a.value.is_array)
      {
        issue(a.where() + ": key '" + a.key + "' expects a single number");
        return;
      }
      hole.weight = a.value.numbers[0];
    }
    else if (field == "mean")
    {
      if (!a.value.is_array || a.value.numbers.size() != 2)
      {
        issue(a.where() + ": key '" + a.key + "' expects [x, y]");
        return;
      }
      hole.mean = { a.value.numbers[0], a.value.numbers[1] };
    }
    else if (field == "cov")
    {
      if (!a.value.is_array || a.value.numbers.size() != 4)
      {
        issue(a.where() + ": key '" + a.key + "' expects [a, b, c, d] row-major");
        return;
      }
      hole.cov << a.value.numbers[0], a.value.numbers[1], a.value.numbers[2],
          a.value.numbers[3];
    }
    else
    {
      issue(a.where() + ": unknown key '" + a.key + "'");
    }
  }

  std::vector<Assignment> assignments_;
  std::set<std::string> seen_;
  std::vector<std::string> issues_;
};

}  // namespace

SimConfig parse_config_text(const std::string& text, const std::string& origin)
{
  ConfigBuilder builder;
  std::istringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line))
  {
    builder.add_line(line, ++line_no, origin);
  }
  return builder.build(SimConfig{}, true);
}

SimConfig parse_config_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ValidationError({ "cannot open config file '" + path + "'" });
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

void apply_override(SimConfig& config, const std::string& assignment)
{
  ConfigBuilder builder;
  builder.add_line(assignment, 1, "--set");
  SimConfig updated = builder.build(config, false);
  config = std::move(updated);
}

namespace
{
std::string num(double v)
{
  return format_double(v);
}

std::string arr(std::initializer_list<double> values)
{
  std::string out = "[";
  bool first = true;
  for (const double v : values)
  {
    out += (first ? "" : ", ") + num(v);
    first = false;
  }
  return out + "]";
}
}  // namespace

std::string emit_config(const SimConfig& c)
{
  std::ostringstream out;
  out << "domain.x_min = " << num(c.grid.x_min) << "\n";
  out << "domain.x_max = " << num(c.grid.x_max) << "\n";
  out << "domain.y_min = " << num(c.grid.y_min) << "\n";
  out << "domain.y_max = " << num(c.grid.y_max) << "\n";
  out << "grid.nx = " << c.grid.nx << "\n";
  out << "grid.ny = " << c.grid.ny << "\n";
  for (std::size_t i = 0; i < c.holes.size(); ++i)
  {
    const auto& h = c.holes[i];
    const std::string key = "hole." + std::to_string(i + 1);
    out << key << ".weight = " << num(h.weight) << "\n";
    out << key << ".mean = " << arr({ h.mean.x(), h.mean.y() }) << "\n";
    out << key << ".cov = "
        << arr({ h.cov(0, 0), h.cov(0, 1), h.cov(1, 0), h.cov(1, 1) }) << "\n";
  }
  out << "robot.start = " << arr({ c.start.x(), c.start.y() }) << "\n";
  out << "robot.cov = "
      << arr({ c.sigma_robot(0, 0), c.sigma_robot(0, 1), c.sigma_robot(1, 0),
               c.sigma_robot(1, 1) })
      << "\n";
  out << "robot.v_max = " << num(c.v_max) << "\n";
  out << "timing.beta = " << num(c.beta) << "\n";
  out << "timing.gamma = " << num(c.gamma) << "\n";
  out << "run.max_steps = " << c.max_steps << "\n";
  out << "run.v_every = " << c.v_every << "\n";
  out << "run.sigma_level = " << num(c.sigma_level) << "\n";
  out << "run.stamp_radius_sigmas = " << num(c.stamp_radius_sigmas) << "\n";
  out << "run.snapshot_fracs = [";
  for (std::size_t i = 0; i < c.snapshot_fractions.size(); ++i)
  {
    out << (i == 0 ? "" : ", ") << num(c.snapshot_fractions[i]);
  }
  out << "]\n";
  return out.str();
}

}  // namespace ergosim
