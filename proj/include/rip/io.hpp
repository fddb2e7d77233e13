#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rip/net_model.hpp"
#include "rip/pipeline.hpp"

namespace rip {

// Net files carry the technology block alongside the geometry. Widths are
// stored in multiples of tech.u; lengths in micrometers; R/C in ohms/farads.
nlohmann::json net_to_json(const TechParams& tech, const Net& net);
std::pair<TechParams, Net> net_from_json(const nlohmann::json& j);
void save_net(const std::string& path, const TechParams& tech, const Net& net);
std::pair<TechParams, Net> load_net(const std::string& path);

nlohmann::json solution_to_json(const TechParams& tech, const RepeaterSolution& sol, bool feasible,
                                const std::vector<StageRecord>& stages, double runtime_s);

struct LoadedSolution {
  RepeaterSolution solution;
  bool feasible = false;
  double runtime_s = 0.0;
  std::vector<StageRecord> stages;
};
LoadedSolution solution_from_json(const TechParams& tech, const nlohmann::json& j);
void save_solution(const std::string& path, const TechParams& tech, const RepeaterSolution& sol,
                   bool feasible, const std::vector<StageRecord>& stages, double runtime_s);
LoadedSolution load_solution(const TechParams& tech, const std::string& path);

// One sweep result: a (net, delay-ratio, strategy) cell.
struct SweepRow {
  std::string net_id;
  double ratio = 0.0;
  std::string strategy;
  bool feasible = false;
  double total_width_u = 0.0;
  double delay_s = 0.0;
  double runtime_s = 0.0;
};

struct CsvContent {
  std::vector<std::string> comments;  // leading '#' lines, stored without the marker
  std::vector<SweepRow> rows;
};

void write_csv(std::ostream& os, const std::vector<std::string>& comments,
               const std::vector<SweepRow>& rows);
CsvContent read_csv(std::istream& is);
void save_csv(const std::string& path, const std::vector<std::string>& comments,
              const std::vector<SweepRow>& rows);
CsvContent load_csv(const std::string& path);

}  // namespace rip
