#include "stokes2p/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "stokes2p/mesh_io.hpp"

namespace stokes2p {

InterfaceDescriptor RunConfig::make_descriptor() const {
  switch (kind) {
    case InterfaceDescriptor::Kind::circle:
      return InterfaceDescriptor::circle({cx, cy}, radius);
    case InterfaceDescriptor::Kind::ellipse:
      return InterfaceDescriptor::ellipse({cx, cy}, a, b);
    case InterfaceDescriptor::Kind::star:
      return InterfaceDescriptor::star({cx, cy}, r0, amplitude, lobes);
  }
  throw ValidationError("unknown interface kind");
}

double RunConfig::tau() const {
  switch (tau_rule) {
    case TauRule::fixed:
      return tau_c;
    case TauRule::h_pow_k:
      return tau_c * std::pow(target_h, k);
    case TauRule::h_pow_2:
      return tau_c * target_h * target_h;
  }
  return tau_c;
}

namespace {

struct RawConfig {
  std::map<std::string, std::string> kv;
};

RawConfig tokenize(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ParseError("line " + std::to_string(lineno) + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ParseError("line " + std::to_string(lineno) + ": empty key or value");
    if (section.empty())
      throw ParseError("line " + std::to_string(lineno) + ": key outside any [section]");
    raw.kv[section + "." + key] = value;
  }
  return raw;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ParseError("value of '" + key + "' is not a number: " + v);
  }
  if (used != v.size()) throw ParseError("value of '" + key + "' is not a number: " + v);
  return d;
}

int to_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  int i;
  try {
    i = std::stoi(v, &used);
  } catch (const std::exception&) {
    throw ParseError("value of '" + key + "' is not an integer: " + v);
  }
  if (used != v.size()) throw ParseError("value of '" + key + "' is not an integer: " + v);
  return i;
}

}  // namespace

RunConfig parse_config(const std::string& text,
                       const std::vector<std::pair<std::string, std::string>>& overrides) {
  RawConfig raw = tokenize(text);
  for (const auto& [key, value] : overrides) raw.kv[key] = value;

  RunConfig cfg;
  auto take = [&](const std::string& key) {
    const auto it = raw.kv.find(key);
    if (it == raw.kv.end()) return std::string();
    std::string v = it->second;
    raw.kv.erase(it);
    return v;
  };

  std::string v;
  if (!(v = take("domain.xmin")).empty()) cfg.domain.xmin = to_double("domain.xmin", v);
  if (!(v = take("domain.xmax")).empty()) cfg.domain.xmax = to_double("domain.xmax", v);
  if (!(v = take("domain.ymin")).empty()) cfg.domain.ymin = to_double("domain.ymin", v);
  if (!(v = take("domain.ymax")).empty()) cfg.domain.ymax = to_double("domain.ymax", v);

  if (!(v = take("interface.kind")).empty()) {
    if (v == "circle")
      cfg.kind = InterfaceDescriptor::Kind::circle;
    else if (v == "ellipse")
      cfg.kind = InterfaceDescriptor::Kind::ellipse;
    else if (v == "star")
      cfg.kind = InterfaceDescriptor::Kind::star;
    else
      throw ParseError("interface.kind must be circle, ellipse or star");
  }
  if (!(v = take("interface.cx")).empty()) cfg.cx = to_double("interface.cx", v);
  if (!(v = take("interface.cy")).empty()) cfg.cy = to_double("interface.cy", v);
  if (!(v = take("interface.radius")).empty()) cfg.radius = to_double("interface.radius", v);
  if (!(v = take("interface.a")).empty()) cfg.a = to_double("interface.a", v);
  if (!(v = take("interface.b")).empty()) cfg.b = to_double("interface.b", v);
  if (!(v = take("interface.r0")).empty()) cfg.r0 = to_double("interface.r0", v);
  if (!(v = take("interface.amplitude")).empty())
    cfg.amplitude = to_double("interface.amplitude", v);
  if (!(v = take("interface.lobes")).empty()) cfg.lobes = to_int("interface.lobes", v);

  if (!(v = take("discretization.k")).empty()) cfg.k = to_int("discretization.k", v);
  if (!(v = take("discretization.target_h")).empty())
    cfg.target_h = to_double("discretization.target_h", v);

  if (!(v = take("time.tau_rule")).empty()) {
    if (v == "fixed")
      cfg.tau_rule = TauRule::fixed;
    else if (v == "h_pow_k")
      cfg.tau_rule = TauRule::h_pow_k;
    else if (v == "h_pow_2")
      cfg.tau_rule = TauRule::h_pow_2;
    else
      throw ParseError("time.tau_rule must be fixed, h_pow_k or h_pow_2");
  }
  if (!(v = take("time.tau_c")).empty()) cfg.tau_c = to_double("time.tau_c", v);
  if (!(v = take("time.T")).empty()) cfg.final_time = to_double("time.T", v);

  if (!(v = take("physics.nu_minus")).empty()) cfg.nu_minus = to_double("physics.nu_minus", v);
  if (!(v = take("physics.nu_plus")).empty()) cfg.nu_plus = to_double("physics.nu_plus", v);

  if (!(v = take("output.dir")).empty()) cfg.output_dir = v;
  if (!(v = take("output.snapshot_every")).empty())
    cfg.snapshot_every = to_int("output.snapshot_every", v);

  if (!raw.kv.empty()) {
    std::string unknown;
    for (const auto& [key, val] : raw.kv) unknown += (unknown.empty() ? "" : ", ") + key;
    throw ParseError("unknown configuration keys: " + unknown);
  }

  // Validate everything and report the full list of violations at once.
  std::vector<std::string> bad;
  if (!(cfg.domain.xmax > cfg.domain.xmin)) bad.push_back("domain.xmax must exceed domain.xmin");
  if (!(cfg.domain.ymax > cfg.domain.ymin)) bad.push_back("domain.ymax must exceed domain.ymin");
  if (cfg.k < 2) bad.push_back("discretization.k must be >= 2 (inf-sup stable pair)");
  if (cfg.k > 6) bad.push_back("discretization.k above 6 is not supported");
  if (!(cfg.target_h > 0.0)) bad.push_back("discretization.target_h must be positive");
  if (!(cfg.tau_c > 0.0)) bad.push_back("time.tau_c must be positive");
  if (cfg.final_time < 0.0) bad.push_back("time.T must be >= 0");
  if (!(cfg.nu_minus > 0.0)) bad.push_back("physics.nu_minus must be positive");
  if (!(cfg.nu_plus > 0.0)) bad.push_back("physics.nu_plus must be positive");
  if (cfg.snapshot_every < 1) bad.push_back("output.snapshot_every must be >= 1");
  if (cfg.kind == InterfaceDescriptor::Kind::circle && !(cfg.radius > 0.0))
    bad.push_back("interface.radius must be positive");
  if (cfg.kind == InterfaceDescriptor::Kind::ellipse && !(cfg.a > 0.0 && cfg.b > 0.0))
    bad.push_back("interface.a and interface.b must be positive");
  if (cfg.kind == InterfaceDescriptor::Kind::star) {
    if (!(cfg.r0 > 0.0)) bad.push_back("interface.r0 must be positive");
    if (!(cfg.amplitude >= 0.0 && cfg.amplitude < 1.0))
      bad.push_back("interface.amplitude must lie in [0,1)");
    if (cfg.lobes < 1) bad.push_back("interface.lobes must be >= 1");
  }
  if (!bad.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& b : bad) msg += "\n  - " + b;
    throw ValidationError(msg);
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path,
                            const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), overrides);
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "[domain]\n";
  out << "xmin = " << format_double(cfg.domain.xmin) << "\n";
  out << "xmax = " << format_double(cfg.domain.xmax) << "\n";
  out << "ymin = " << format_double(cfg.domain.ymin) << "\n";
  out << "ymax = " << format_double(cfg.domain.ymax) << "\n\n";
  out << "[interface]\n";
  switch (cfg.kind) {
    case InterfaceDescriptor::Kind::circle:
      out << "kind = circle\n";
      out << "cx = " << format_double(cfg.cx) << "\n";
      out << "cy = " << format_double(cfg.cy) << "\n";
      out << "radius = " << format_double(cfg.radius) << "\n";
      break;
    case InterfaceDescriptor::Kind::ellipse:
      out << "kind = ellipse\n";
      out << "cx = " << format_double(cfg.cx) << "\n";
      out << "cy = " << format_double(cfg.cy) << "\n";
      out << "a = " << format_double(cfg.a) << "\n";
      out << "b = " << format_double(cfg.b) << "\n";
      break;
    case InterfaceDescriptor::Kind::star:
      out << "kind = star\n";
      out << "cx = " << format_double(cfg.cx) << "\n";
      out << "cy = " << format_double(cfg.cy) << "\n";
      out << "r0 = " << format_double(cfg.r0) << "\n";
      out << "amplitude = " << format_double(cfg.amplitude) << "\n";
      out << "lobes = " << cfg.lobes << "\n";
      break;
  }
  out << "\n[discretization]\n";
  out << "k = " << cfg.k << "\n";
  out << "target_h = " << format_double(cfg.target_h) << "\n";
  out << "\n[time]\n";
  switch (cfg.tau_rule) {
    case TauRule::fixed: out << "tau_rule = fixed\n"; break;
    case TauRule::h_pow_k: out << "tau_rule = h_pow_k\n"; break;
    case TauRule::h_pow_2: out << "tau_rule = h_pow_2\n"; break;
  }
  out << "tau_c = " << format_double(cfg.tau_c) << "\n";
  out << "T = " << format_double(cfg.final_time) << "\n";
  out << "\n[physics]\n";
  out << "nu_minus = " << format_double(cfg.nu_minus) << "\n";
  out << "nu_plus = " << format_double(cfg.nu_plus) << "\n";
  out << "\n[output]\n";
  out << "dir = " << cfg.output_dir << "\n";
  out << "snapshot_every = " << cfg.snapshot_every << "\n";
  return out.str();
}

}  // namespace stokes2p
