#include "vlcsim/scene_config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "vlcsim/errors.hpp"

namespace vlcsim {

namespace pt = boost::property_tree;

namespace {

constexpr std::string_view kFrontEndPrefix = "frontend:";
constexpr std::string_view kObstaclePrefix = "obstacle:";

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// A key that was present but malformed already has its own diagnostic.
void missing(std::vector<Diagnostic>& diags, const std::string& field) {
  for (const Diagnostic& d : diags)
    if (d.field == field) return;
  diags.push_back({field, "required"});
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) {
    std::string t = trim(cur);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

double to_double(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ValidationError(field, "expected a number, got '" + text + "'");
  return v;
}

long long to_int(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ValidationError(field, "expected an integer, got '" + text + "'");
  return v;
}

Vec3 to_vec3(const std::string& field, const std::string& text) {
  std::string spaced = text;
  for (char& c : spaced)
    if (c == ',') c = ' ';
  std::istringstream in(spaced);
  std::vector<std::string> parts;
  for (std::string p; in >> p;) parts.push_back(p);
  if (parts.size() != 3) throw ValidationError(field, "expected three numbers 'x y z'");
  return {to_double(field, parts[0]), to_double(field, parts[1]), to_double(field, parts[2])};
}

// Runs `fn`, turning a ValidationError into a diagnostic.
template <typename Fn>
void collect(std::vector<Diagnostic>& diags, Fn&& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    diags.push_back({e.field(), what.substr(std::min(what.size(), e.field().size() + 2))});
  }
}

void parse_front_end(const std::string& id, const pt::ptree& section, Scene& scene,
                     std::vector<Diagnostic>& diags) {
  FrontEnd fe;
  fe.id = id;
  const std::string base = "frontend." + id + ".";
  bool have_role = false, have_pos = false, have_bore = false;
  for (const auto& [key, node] : section) {
    const std::string field = base + key;
    const std::string value = node.data();
    collect(diags, [&] {
      if (key == "role") {
        const std::string r = trim(value);
        if (r == "tx" || r == "TX")
          fe.role = Role::kTx;
        else if (r == "rx" || r == "RX")
          fe.role = Role::kRx;
        else
          throw ValidationError(field, "must be 'tx' or 'rx'");
        have_role = true;
      } else if (key == "position") {
        fe.position = to_vec3(field, value);
        have_pos = true;
      } else if (key == "boresight") {
        fe.boresight = to_vec3(field, value);
        have_bore = true;
      } else if (key == "half_power_semi_angle") {
        fe.half_power_semi_angle_deg = to_double(field, value);
      } else if (key == "tx_electrical_power_dbm") {
        fe.tx_electrical_power_dbm = to_double(field, value);
      } else if (key == "fov_half_angle") {
        fe.fov_half_angle_deg = to_double(field, value);
      } else if (key == "active_area") {
        fe.active_area_m2 = to_double(field, value);
      } else if (key == "conversion_gain_db") {
        fe.conversion_gain_db = to_double(field, value);
      } else {
        throw ValidationError(field, "unknown key");
      }
    });
  }
  if (!have_role) missing(diags, base + "role");
  if (!have_pos) missing(diags, base + "position");
  if (!have_bore) missing(diags, base + "boresight");
  scene.front_ends.push_back(std::move(fe));
}

void parse_obstacle(const std::string& id, const pt::ptree& section, Scene& scene,
                    std::vector<Diagnostic>& diags) {
  Obstacle ob;
  ob.id = id;
  const std::string base = "obstacle." + id + ".";
  bool have_start = false, have_end = false;
  for (const auto& [key, node] : section) {
    const std::string field = base + key;
    const std::string value = node.data();
    collect(diags, [&] {
      if (key == "kind") {
        if (trim(value) != "full-path-block")
          throw ValidationError(field, "only 'full-path-block' is supported");
      } else if (key == "blocked_pairs") {
        for (const std::string& pair : split(value, ',')) {
          const auto colon = pair.find(':');
          if (colon == std::string::npos)
            throw ValidationError(field, "pairs are written TX:RX, got '" + pair + "'");
          ob.blocked_pairs.emplace_back(trim(pair.substr(0, colon)), trim(pair.substr(colon + 1)));
        }
      } else if (key == "start" || key == "end") {
        const long long v = to_int(field, value);
        if (v < 0) throw ValidationError(field, "frame index must be >= 0");
        (key == "start" ? ob.active.start : ob.active.end) = static_cast<std::uint64_t>(v);
        (key == "start" ? have_start : have_end) = true;
      } else {
        throw ValidationError(field, "unknown key");
      }
    });
  }
  if (!have_start) missing(diags, base + "start");
  if (!have_end) missing(diags, base + "end");
  scene.obstacles.push_back(std::move(ob));
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

std::string format_vec3(Vec3 v) {
  return format_double(v.x) + " " + format_double(v.y) + " " + format_double(v.z);
}

}  // namespace

std::string Params::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : trim(it->second);
}

double Params::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : to_double("scenario." + key, it->second);
}

long long Params::get_int(const std::string& key, long long fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : to_int("scenario." + key, it->second);
}

std::vector<int> Params::get_int_list(const std::string& key, const std::vector<int>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<int> out;
  for (const std::string& item : split(it->second, ','))
    out.push_back(static_cast<int>(to_int("scenario." + key, item)));
  return out;
}

std::vector<double> Params::get_double_list(const std::string& key,
                                            const std::vector<double>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  for (const std::string& item : split(it->second, ','))
    out.push_back(to_double("scenario." + key, item));
  return out;
}

std::optional<Vec3> Params::get_vec3(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return to_vec3("scenario." + key, it->second);
}

Vec3 parse_vec3(const std::string& text) { return to_vec3("vector", text); }

std::pair<std::string, std::string> parse_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || trim(text.substr(0, eq)).empty())
    throw ValidationError(text, "override must look like key=value");
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

SceneFile parse_scene_file(std::istream& in, const Overrides& overrides) {
  SceneFile out;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    out.diagnostics.push_back({"line " + std::to_string(e.line()), e.message()});
    return out;
  }

  // Keys may contain dots, so never go through ptree's dotted paths.
  for (const auto& [key, value] : overrides) {
    const auto dot = key.find('.');
    const std::string section = dot == std::string::npos ? "scenario" : key.substr(0, dot);
    const std::string name = dot == std::string::npos ? key : key.substr(dot + 1);
    auto it = tree.find(section);
    if (it == tree.not_found()) {
      if (section != "scenario" && section != "scene") {
        out.diagnostics.push_back({key, "override targets a missing section"});
        continue;
      }
      tree.push_back({section, pt::ptree()});
      it = tree.find(section);
    }
    pt::ptree& sec = it->second;
    auto child = sec.find(name);
    if (child == sec.not_found())
      sec.push_back({name, pt::ptree(value)});
    else
      child->second.put_value(value);
  }

  for (const auto& [name, section] : tree) {
    if (section.empty() && !section.data().empty()) {
      out.diagnostics.push_back({name, "key outside of any section"});
      continue;
    }
    if (name == "scene") {
      for (const auto& [key, node] : section) {
        collect(out.diagnostics, [&] {
          const std::string field = "scene." + key;
          if (key == "noise_floor_dbm")
            out.scene.noise_floor_dbm = to_double(field, node.data());
          else if (key == "carrier_hz")
            out.scene.carrier_hz = to_double(field, node.data());
          else
            throw ValidationError(field, "unknown key");
        });
      }
    } else if (name == "scenario") {
      std::map<std::string, std::string> values;
      for (const auto& [key, node] : section) values[key] = node.data();
      out.scenario = Params(std::move(values));
    } else if (name.starts_with(kFrontEndPrefix)) {
      parse_front_end(trim(name.substr(kFrontEndPrefix.size())), section, out.scene, out.diagnostics);
    } else if (name.starts_with(kObstaclePrefix)) {
      parse_obstacle(trim(name.substr(kObstaclePrefix.size())), section, out.scene, out.diagnostics);
    } else {
      out.diagnostics.push_back({name, "unknown section"});
    }
  }
  return out;
}

SceneFile read_scene_file(const std::filesystem::path& path, const Overrides& overrides) {
  std::error_code ec;
  std::ifstream in(path);
  if (!in || !std::filesystem::is_regular_file(path, ec)) throw IoError("cannot read scene file '" + path.string() + "'");
  return parse_scene_file(in, overrides);
}

std::vector<Diagnostic> validate_scene_file(const std::filesystem::path& path,
                                            const Overrides& overrides) {
  SceneFile file = read_scene_file(path, overrides);
  std::vector<Diagnostic> out = std::move(file.diagnostics);
  if (out.empty() || !file.scene.front_ends.empty()) {
    for (Diagnostic& d : validate(file.scene)) out.push_back(std::move(d));
  }
  return out;
}

SceneFile load_scene_file(const std::filesystem::path& path, const Overrides& overrides) {
  SceneFile file = read_scene_file(path, overrides);
  if (!file.diagnostics.empty())
    throw ValidationError(file.diagnostics.front().field, file.diagnostics.front().rule);
  require_valid(file.scene);
  return file;
}

void write_scene_file(std::ostream& os, const Scene& scene, const Params& scenario) {
  os << "[scene]\n"
     << "noise_floor_dbm = " << format_double(scene.noise_floor_dbm) << '\n'
     << "carrier_hz = " << format_double(scene.carrier_hz) << '\n';
  for (const FrontEnd& fe : scene.front_ends) {
    os << "\n[frontend:" << fe.id << "]\n"
       << "role = " << (fe.role == Role::kTx ? "tx" : "rx") << '\n'
       << "position = " << format_vec3(fe.position) << '\n'
       << "boresight = " << format_vec3(fe.boresight) << '\n';
    if (fe.role == Role::kTx) {
      os << "half_power_semi_angle = " << format_double(fe.half_power_semi_angle_deg) << '\n'
         << "tx_electrical_power_dbm = " << format_double(fe.tx_electrical_power_dbm) << '\n';
    } else {
      os << "fov_half_angle = " << format_double(fe.fov_half_angle_deg) << '\n'
         << "active_area = " << format_double(fe.active_area_m2) << '\n'
         << "conversion_gain_db = " << format_double(fe.conversion_gain_db) << '\n';
    }
  }
  for (const Obstacle& ob : scene.obstacles) {
    os << "\n[obstacle:" << ob.id << "]\nkind = full-path-block\nblocked_pairs = ";
    for (std::size_t i = 0; i < ob.blocked_pairs.size(); ++i)
      os << (i ? ", " : "") << ob.blocked_pairs[i].first << ':' << ob.blocked_pairs[i].second;
    os << "\nstart = " << ob.active.start << "\nend = " << ob.active.end << '\n';
  }
  if (!scenario.values().empty()) {
    os << "\n[scenario]\n";
    for (const auto& [k, v] : scenario.values()) os << k << " = " << v << '\n';
  }
}

}  // namespace vlcsim
