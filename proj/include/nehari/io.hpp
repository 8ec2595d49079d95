#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "nehari/diagnostics.hpp"
#include "nehari/nehari.hpp"
#include "nehari/solvers.hpp"

namespace nehari {

using Json = nlohmann::ordered_json;

/// Field CSV: header "r,u,v", one row per node, values at %.17g.
void write_field_csv(const std::filesystem::path& path, const StatePair& s);
std::string field_csv(const StatePair& s);

/// Reads a field CSV back onto grid; the radii must match the grid nodes to
/// 1e-12 relative (GridMismatchError otherwise, ConfigError on bad syntax).
StatePair read_field_csv(const std::filesystem::path& path, const GridPtr& grid);
StatePair parse_field_csv(const std::string& text, const GridPtr& grid);

/// History CSV: "iteration,energy,grad_norm".
void write_history_csv(const std::filesystem::path& path, const std::vector<HistoryEntry>& h);

Json to_json(const HProfile& h);
Json to_json(const Params& p);
Json to_json(const DescentConfig& c);
Json to_json(const MountainPassConfig& c);
Json to_json(const EnergyTerms& t);
Json to_json(const EnergyReport& r);
Json to_json(const ClassifyResult& r);
Json to_json(const ComponentLedger& l);
Json to_json(const MassLedger& l);
Json to_json(const PsThresholds& t);
Json to_json(const LevelPlacement& l);
/// Scalars and history of a solve; fields go to CSV.
Json to_json(const SolveResult& r);
Json to_json(const MountainPassResult& r);
Json to_json(const MountainPassSweep& s);
Json to_json(const GroundStateReport& r);

/// Parsers for the config sections. Unknown keys raise ConfigError.
HProfile hprofile_from_json(const Json& j);
Params params_from_json(const Json& j);
DescentConfig descent_from_json(const Json& j, DescentConfig base = {});
MountainPassConfig mountain_pass_from_json(const Json& j, MountainPassConfig base = {});

}  // namespace nehari
