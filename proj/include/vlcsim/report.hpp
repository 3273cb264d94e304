#pragma once

// Named scenario runs and their CSV / JSON output. Column sets are part of
// the output contract; see README for the schemas.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "vlcsim/scenario.hpp"
#include "vlcsim/scene_config.hpp"

namespace vlcsim {

// Shortest round-trip text for a double; the no-signal sentinel is "-inf".
std::string format_number(double v);

void write_siso_csv(std::ostream& os, std::span<const SisoRow> rows);
void write_timeline_csv(std::ostream& os, std::span<const FrameTrace> traces);
void write_mrc_point_csv(std::ostream& os, std::span<const MrcBranch> rows);
void write_handover_csv(std::ostream& os, std::span<const HandoverRow> rows);
void write_area_grid_csv(std::ostream& os, std::span<const AreaRow> rows);
void write_oracle_csv(std::ostream& os, std::span<const OracleRow> rows);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data);

const std::vector<std::string>& scenario_names();
bool is_known_scenario(std::string_view name);

struct ScenarioRun {
  std::string name;
  std::string csv;
  nlohmann::ordered_json summary;
};

// Runs scenario `name` against the loaded scene file. Scenario knobs come
// from the file's [scenario] section. Throws ContractError for an unknown
// name and ValidationError for a bad knob.
ScenarioRun run_scenario(std::string_view name, const SceneFile& file, std::uint64_t seed);

}  // namespace vlcsim
