#include "effcap/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "effcap/csv.hpp"
#include "effcap/region.hpp"

namespace effcap {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

double parse_double(const std::string& value, const std::string& field) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(field, "cannot parse number from '" + value + "'");
  }
}

std::vector<double> parse_double_list(const std::string& value, const std::string& field) {
  std::vector<double> out;
  for (const auto& item : split(value, ','))
    if (!item.empty()) out.push_back(parse_double(item, field));
  if (out.empty()) throw ConfigError(field, "empty list");
  return out;
}

long long parse_integer(const std::string& value, const std::string& field) {
  const double v = parse_double(value, field);
  if (std::abs(v - std::llround(v)) > 1e-9)
    throw ConfigError(field, "expected an integer, got '" + value + "'");
  return std::llround(v);
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += CsvWriter::format(values[i]);
  }
  return out;
}

std::string join_ints(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(values[i]);
  }
  return out;
}

std::string join_strings(const std::vector<std::string>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += values[i];
  }
  return out;
}

FadingModel load_tabulated_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("fading", "cannot open tabulated density file " + path.string());
  std::vector<double> zs, ps;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line, ',');
    if (cells.size() < 2) throw ConfigError("fading", "expected 'z,density' rows");
    zs.push_back(parse_double(cells[0], "fading"));
    ps.push_back(parse_double(cells[1], "fading"));
  }
  if (zs.size() < 4) throw ConfigError("fading", "need at least 4 density knots");
  for (std::size_t i = 1; i < zs.size(); ++i)
    if (zs[i] <= zs[i - 1]) throw ConfigError("fading", "z knots must ascend");

  auto density = [zs, ps](double z) {
    if (z <= zs.front()) return ps.front();
    if (z >= zs.back()) return ps.back();
    const auto it = std::upper_bound(zs.begin(), zs.end(), z);
    const std::size_t i = static_cast<std::size_t>(it - zs.begin());
    const double f = (z - zs[i - 1]) / (zs[i] - zs[i - 1]);
    return ps[i - 1] * (1.0 - f) + ps[i] * f;
  };
  try {
    return FadingModel::tabulated(density, zs.back());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("fading", e.what());
  }
}

// Single switchboard shared by file parsing, --set overrides and the
// metadata round trip.
void set_key(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "command") c.command = value;
  else if (key == "T") c.T = parse_double(value, key);
  else if (key == "B") c.B = parse_double(value, key);
  else if (key == "snr") c.snr = parse_double_list(value, key);
  else if (key == "snr_db") {
    c.snr.clear();
    for (double db : parse_double_list(value, key))
      c.snr.push_back(std::pow(10.0, db / 10.0));
  } else if (key == "theta") c.theta = parse_double_list(value, key);
  else if (key == "fading") c.fading = value;
  else if (key == "strategies") {
    c.strategies.clear();
    for (const auto& s : split(value, ','))
      if (!s.empty()) c.strategies.push_back(s);
  } else if (key == "method") c.method = value;
  else if (key == "budget") c.budget = static_cast<long>(parse_integer(value, key));
  else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_integer(value, key));
  else if (key == "threads") c.threads = static_cast<int>(parse_integer(value, key));
  else if (key == "k_grid") c.k_grid = GridSpec::parse(value, key);
  else if (key == "lambda_grid") c.lambda_grid = GridSpec::parse(value, key);
  else if (key == "tau_grid") c.tau_grid = GridSpec::parse(value, key);
  else if (key == "delta_grid") c.delta_grid = GridSpec::parse(value, key);
  else if (key == "theta_grid") c.theta_grid = GridSpec::parse(value, key);
  else if (key == "order") {
    c.order.clear();
    for (double v : parse_double_list(value, key)) c.order.push_back(static_cast<int>(v));
  } else if (key == "calib_tol") c.calib_tol = parse_double(value, key);
  else if (key == "frames") c.frames = static_cast<std::size_t>(parse_integer(value, key));
  else if (key == "arrival_scale") c.arrival_scale = parse_double(value, key);
  else if (key == "arrival_bits_per_sec") c.arrival_bits_per_sec = parse_double(value, key);
  else if (key == "trace_stride")
    c.trace_stride = static_cast<std::size_t>(parse_integer(value, key));
  else throw ConfigError(key, "unknown key");
}

}  // namespace

std::vector<double> GridSpec::expand() const {
  if (kind == Kind::Explicit) return values;
  if (count < 1) throw ConfigError("grid", "grid needs at least one point");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    out.push_back(lo);
    return out;
  }
  if (kind == Kind::Linear) {
    const double step = (hi - lo) / (count - 1);
    for (int i = 0; i < count; ++i) out.push_back(lo + step * i);
  } else {
    if (!(lo > 0.0) || !(hi > 0.0))
      throw ConfigError("grid", "logspace endpoints must be > 0");
    const double step = (std::log(hi) - std::log(lo)) / (count - 1);
    for (int i = 0; i < count; ++i) out.push_back(std::exp(std::log(lo) + step * i));
  }
  return out;
}

std::string GridSpec::to_string() const {
  switch (kind) {
    case Kind::Linear:
      return "linspace:" + CsvWriter::format(lo) + "," + CsvWriter::format(hi) + "," +
             std::to_string(count);
    case Kind::Log:
      return "logspace:" + CsvWriter::format(lo) + "," + CsvWriter::format(hi) + "," +
             std::to_string(count);
    case Kind::Explicit:
      return join(values);
  }
  return "";
}

GridSpec GridSpec::parse(const std::string& text, const std::string& field) {
  GridSpec g;
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string kind = trim(text.substr(0, colon));
    const auto parts = split(text.substr(colon + 1), ',');
    if (parts.size() != 3)
      throw ConfigError(field, "expected <kind>:<lo>,<hi>,<count>");
    if (kind == "linspace") g.kind = Kind::Linear;
    else if (kind == "logspace") g.kind = Kind::Log;
    else throw ConfigError(field, "unknown grid kind '" + kind + "'");
    g.lo = parse_double(parts[0], field);
    g.hi = parse_double(parts[1], field);
    g.count = static_cast<int>(parse_integer(parts[2], field));
    if (g.count < 1) throw ConfigError(field, "grid count must be >= 1");
    return g;
  }
  g.kind = Kind::Explicit;
  g.values = parse_double_list(text, field);
  return g;
}

void RunConfig::validate() const {
  static const std::vector<std::string> kCommands = {"region", "sumrate", "power",
                                                     "validate", "effcap"};
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end())
    throw ConfigError("command", "expected one of region|sumrate|power|validate|effcap");
  if (!(T > 0.0)) throw ConfigError("T", "must be > 0");
  if (!(B > 0.0)) throw ConfigError("B", "must be > 0");
  if (snr.empty()) throw ConfigError("snr", "need at least one user");
  for (double s : snr)
    if (!(s > 0.0)) throw ConfigError("snr", "must be > 0 (linear)");
  if (theta.size() != snr.size())
    throw ConfigError("theta", "need one theta per user (or a single broadcast value)");
  for (double t : theta)
    if (!(t > 0.0)) throw ConfigError("theta", "must be > 0");
  if (fading != "rayleigh" && fading.rfind("tabulated:", 0) != 0)
    throw ConfigError("fading", "expected 'rayleigh' or 'tabulated:<path>'");
  if (method != "quadrature" && method != "monte-carlo")
    throw ConfigError("method", "expected quadrature or monte-carlo");
  for (const auto& s : strategies) {
    try {
      strategy_from_name(s);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("strategies", e.what());
    }
    if (s == "optimal" && snr.size() != 2 &&
        (command == "region" || command == "sumrate"))
      throw ConfigError("strategies",
                        "optimal order switching is derived for two users only");
  }
  if (command == "power" || command == "effcap") {
    if (order.size() != snr.size()) throw ConfigError("order", "need one entry per user");
    std::vector<bool> seen(order.size(), false);
    for (int v : order) {
      if (v < 1 || v > static_cast<int>(order.size()) ||
          seen[static_cast<std::size_t>(v - 1)])
        throw ConfigError("order", "must be a permutation of 1..M");
      seen[static_cast<std::size_t>(v - 1)] = true;
    }
  }
  if (!(calib_tol > 0.0)) throw ConfigError("calib_tol", "must be > 0");
  if (command == "validate" && frames < 100'000)
    throw ConfigError("frames", "need at least 1e5 frames");
  if (arrival_scale < 0.0) throw ConfigError("arrival_scale", "must be >= 0");
  if (arrival_bits_per_sec < 0.0)
    throw ConfigError("arrival_bits_per_sec", "must be >= 0");
}

SystemParams RunConfig::system_params() const {
  SystemParams p;
  p.frame_duration_s = T;
  p.bandwidth_hz = B;
  p.snr = snr;
  p.theta = theta;
  if (p.theta.size() == 1 && p.snr.size() > 1)
    p.theta.assign(p.snr.size(), theta.front());
  return p;
}

std::vector<FadingModel> RunConfig::fading_models() const {
  std::vector<FadingModel> models;
  if (fading == "rayleigh") {
    for (std::size_t j = 0; j < snr.size(); ++j) models.push_back(FadingModel::rayleigh());
  } else if (fading.rfind("tabulated:", 0) == 0) {
    const FadingModel m = load_tabulated_model(fading.substr(10));
    for (std::size_t j = 0; j < snr.size(); ++j) models.push_back(m);
  } else {
    throw ConfigError("fading", "expected 'rayleigh' or 'tabulated:<path>'");
  }
  return models;
}

Method RunConfig::expect_method() const {
  return method == "monte-carlo" ? Method::MonteCarlo : Method::Quadrature;
}

DecodingOrder RunConfig::decoding_order() const {
  DecodingOrder o;
  for (int v : order) o.pi.push_back(v - 1);
  o.validate();
  return o;
}

std::vector<std::string> RunConfig::echo_lines() const {
  std::vector<std::string> lines;
  auto add = [&](const std::string& key, const std::string& value) {
    lines.push_back("cfg." + key + " = " + value);
  };
  add("command", command);
  add("T", CsvWriter::format(T));
  add("B", CsvWriter::format(B));
  add("snr", join(snr));
  add("theta", join(theta));
  add("fading", fading);
  add("strategies", join_strings(strategies));
  add("method", method);
  add("budget", std::to_string(budget));
  add("seed", std::to_string(seed));
  add("threads", std::to_string(threads));
  add("k_grid", k_grid.to_string());
  add("lambda_grid", lambda_grid.to_string());
  add("tau_grid", tau_grid.to_string());
  add("delta_grid", delta_grid.to_string());
  add("theta_grid", theta_grid.to_string());
  add("order", join_ints(order));
  add("calib_tol", CsvWriter::format(calib_tol));
  add("frames", std::to_string(frames));
  add("arrival_scale", CsvWriter::format(arrival_scale));
  add("arrival_bits_per_sec", CsvWriter::format(arrival_bits_per_sec));
  add("trace_stride", std::to_string(trace_stride));
  return lines;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  RunConfig c;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config", "line " + std::to_string(line_no) +
                                      ": expected key = value");
    set_key(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

void apply_override(RunConfig& config, const std::string& key_value) {
  const auto eq = key_value.find('=');
  if (eq == std::string::npos)
    throw ConfigError("--set", "expected key=value, got '" + key_value + "'");
  set_key(config, trim(key_value.substr(0, eq)), trim(key_value.substr(eq + 1)));
}

RunConfig parse_metadata_echo(const std::filesystem::path& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw ConfigError("config", "cannot open " + csv_path.string());
  RunConfig c;
  std::string line;
  bool any = false;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.rfind("# cfg.", 0) != 0) continue;
    const std::string body = line.substr(6);
    const auto eq = body.find('=');
    if (eq == std::string::npos) continue;
    set_key(c, trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
    any = true;
  }
  if (!any) throw ConfigError("config", "no '# cfg.' metadata in " + csv_path.string());
  return c;
}

}  // namespace effcap
