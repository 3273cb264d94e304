#pragma once

// Sectioned key-value scene files:
//
//   [scene]            noise_floor_dbm, carrier_hz
//   [frontend:<id>]    role = tx|rx, position = x y z, boresight = x y z, ...
//   [obstacle:<id>]    kind = full-path-block, blocked_pairs = TX:RX, ..., start, end
//   [scenario]         free-form parameters read by the scenario runners
//
// Units are SI (metres, degrees, dBm, dB, m^2, Hz). Front-ends keep file
// order, which fixes the matrix row and column order.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vlcsim/optical_channel.hpp"

namespace vlcsim {

// Typed view over the [scenario] section plus command-line overrides.
class Params {
 public:
  Params() = default;
  explicit Params(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  const std::map<std::string, std::string>& values() const { return values_; }

  // Each getter throws ValidationError("scenario.<key>", ...) on a bad value.
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback) const;
  std::vector<double> get_double_list(const std::string& key, const std::vector<double>& fallback) const;
  std::optional<Vec3> get_vec3(const std::string& key) const;

 private:
  std::map<std::string, std::string> values_;
};

// `--set` style overrides. "section.key" edits a key of that section
// ("frontend:RA.fov_half_angle", "scene.noise_floor_dbm"); a bare key goes
// to [scenario]. Applied before the file is interpreted.
using Overrides = std::vector<std::pair<std::string, std::string>>;

// Splits "key=value"; throws ValidationError if there is no '='.
std::pair<std::string, std::string> parse_override(const std::string& text);

struct SceneFile {
  Scene scene;
  Params scenario;
  std::vector<Diagnostic> diagnostics;  // problems found while parsing
};

SceneFile parse_scene_file(std::istream& in, const Overrides& overrides = {});
// Throws IoError if the file cannot be read.
SceneFile read_scene_file(const std::filesystem::path& path, const Overrides& overrides = {});

// Parse problems followed by invariant violations; empty iff the scene is
// usable. Throws IoError if the file cannot be read.
std::vector<Diagnostic> validate_scene_file(const std::filesystem::path& path,
                                            const Overrides& overrides = {});

// Parses and validates; throws ValidationError naming the first bad field.
SceneFile load_scene_file(const std::filesystem::path& path, const Overrides& overrides = {});

void write_scene_file(std::ostream& os, const Scene& scene, const Params& scenario = {});

Vec3 parse_vec3(const std::string& text);

}  // namespace vlcsim
