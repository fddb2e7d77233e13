#include "rip/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rip/errors.hpp"

namespace rip {

namespace {

void validate_tech(const TechParams& tech) {
  if (!(tech.r_s > 0.0)) throw validation_error("tech: r_s_ohm must be > 0");
  if (!(tech.c_o > 0.0)) throw validation_error("tech: c_o_f_per_u must be > 0");
  if (tech.c_p < 0.0) throw validation_error("tech: c_p_f_per_u must be >= 0");
  if (!(tech.u > 0.0)) throw validation_error("tech: u must be > 0");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

nlohmann::json net_to_json(const TechParams& tech, const Net& net) {
  nlohmann::json j;
  j["tech"] = {{"r_s_ohm", tech.r_s},
               {"c_o_f_per_u", tech.c_o},
               {"c_p_f_per_u", tech.c_p},
               {"u", tech.u}};
  j["segments"] = nlohmann::json::array();
  for (const Segment& s : net.segments)
    j["segments"].push_back(
        {{"length_um", s.length}, {"r_ohm_per_um", s.r}, {"c_f_per_um", s.c}});
  j["forbidden"] = nlohmann::json::array();
  for (const ForbiddenZone& z : net.zones)
    j["forbidden"].push_back({{"start_um", z.start}, {"end_um", z.end}});
  j["driver_width_u"] = net.driver_width / tech.u;
  j["receiver_width_u"] = net.receiver_width / tech.u;
  return j;
}

std::pair<TechParams, Net> net_from_json(const nlohmann::json& j) {
  TechParams tech;
  Net net;
  try {
    const auto& jt = j.at("tech");
    tech.r_s = jt.at("r_s_ohm").get<double>();
    tech.c_o = jt.at("c_o_f_per_u").get<double>();
    tech.c_p = jt.at("c_p_f_per_u").get<double>();
    tech.u = jt.value("u", 1.0);
    for (const auto& js : j.at("segments"))
      net.segments.push_back({js.at("length_um").get<double>(),
                              js.at("r_ohm_per_um").get<double>(),
                              js.at("c_f_per_um").get<double>()});
    if (j.contains("forbidden"))
      for (const auto& jz : j.at("forbidden"))
        net.zones.push_back({jz.at("start_um").get<double>(), jz.at("end_um").get<double>()});
    net.driver_width = j.at("driver_width_u").get<double>() * tech.u;
    net.receiver_width = j.at("receiver_width_u").get<double>() * tech.u;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("invalid net json: ") + e.what());
  }
  validate_tech(tech);
  normalize_zones(net);
  validate_net(net);
  return {tech, net};
}

void save_net(const std::string& path, const TechParams& tech, const Net& net) {
  std::ofstream os(path);
  if (!os) throw validation_error("cannot open for writing: " + path);
  os << net_to_json(tech, net).dump(2) << '\n';
}

std::pair<TechParams, Net> load_net(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw validation_error("cannot open net file: " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("invalid net json: ") + e.what());
  }
  return net_from_json(j);
}

nlohmann::json solution_to_json(const TechParams& tech, const RepeaterSolution& sol, bool feasible,
                                const std::vector<StageRecord>& stages, double runtime_s) {
  nlohmann::json j;
  j["repeaters"] = nlohmann::json::array();
  for (const Repeater& r : sol.repeaters)
    j["repeaters"].push_back({{"x_um", r.x}, {"width_u", r.width / tech.u}});
  j["delay_s"] = sol.delay;
  j["total_width_u"] = sol.total_width / tech.u;
  j["feasible"] = feasible;
  j["stage_trace"] = nlohmann::json::array();
  for (const StageRecord& s : stages)
    j["stage_trace"].push_back({{"stage", s.stage},
                                {"feasible", s.feasible},
                                {"delay_s", s.delay},
                                {"total_width_u", s.total_width / tech.u},
                                {"runtime_s", s.runtime_s},
                                {"note", s.note}});
  j["runtime_s"] = runtime_s;
  return j;
}

LoadedSolution solution_from_json(const TechParams& tech, const nlohmann::json& j) {
  LoadedSolution out;
  try {
    for (const auto& jr : j.at("repeaters"))
      out.solution.repeaters.push_back(
          {jr.at("x_um").get<double>(), jr.at("width_u").get<double>() * tech.u});
    out.solution.delay = j.at("delay_s").get<double>();
    out.solution.total_width = j.at("total_width_u").get<double>() * tech.u;
    out.feasible = j.at("feasible").get<bool>();
    out.runtime_s = j.value("runtime_s", 0.0);
    if (j.contains("stage_trace"))
      for (const auto& js : j.at("stage_trace")) {
        StageRecord rec;
        rec.stage = js.at("stage").get<std::string>();
        rec.feasible = js.at("feasible").get<bool>();
        rec.delay = js.at("delay_s").get<double>();
        rec.total_width = js.at("total_width_u").get<double>() * tech.u;
        rec.runtime_s = js.value("runtime_s", 0.0);
        rec.note = js.value("note", std::string{});
        out.stages.push_back(std::move(rec));
      }
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("invalid solution json: ") + e.what());
  }
  return out;
}

void save_solution(const std::string& path, const TechParams& tech, const RepeaterSolution& sol,
                   bool feasible, const std::vector<StageRecord>& stages, double runtime_s) {
  std::ofstream os(path);
  if (!os) throw validation_error("cannot open for writing: " + path);
  os << solution_to_json(tech, sol, feasible, stages, runtime_s).dump(2) << '\n';
}

LoadedSolution load_solution(const TechParams& tech, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw validation_error("cannot open solution file: " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("invalid solution json: ") + e.what());
  }
  return solution_from_json(tech, j);
}

static const char* kCsvHeader = "net_id,ratio,strategy,feasible,total_width_u,delay_s,runtime_s";

void write_csv(std::ostream& os, const std::vector<std::string>& comments,
               const std::vector<SweepRow>& rows) {
  for (const std::string& c : comments) os << "# " << c << '\n';
  os << kCsvHeader << '\n';
  for (const SweepRow& r : rows) {
    char ratio[32];
    std::snprintf(ratio, sizeof ratio, "%.6g", r.ratio);
    char runtime[32];
    std::snprintf(runtime, sizeof runtime, "%.6g", r.runtime_s);
    os << r.net_id << ',' << ratio << ',' << r.strategy << ',' << (r.feasible ? 1 : 0) << ','
       << fmt(r.total_width_u) << ',' << fmt(r.delay_s) << ',' << runtime << '\n';
  }
}

CsvContent read_csv(std::istream& is) {
  CsvContent out;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string c = line.substr(1);
      if (!c.empty() && c[0] == ' ') c.erase(0, 1);
      out.comments.push_back(c);
      continue;
    }
    if (!header_seen) {
      if (line != kCsvHeader) throw validation_error("unexpected csv header: " + line);
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 7) throw validation_error("malformed csv row: " + line);
    SweepRow row;
    row.net_id = fields[0];
    try {
      row.ratio = std::stod(fields[1]);
      row.strategy = fields[2];
      row.feasible = std::stoi(fields[3]) != 0;
      row.total_width_u = std::stod(fields[4]);
      row.delay_s = std::stod(fields[5]);
      row.runtime_s = std::stod(fields[6]);
    } catch (const std::exception&) {
      throw validation_error("malformed csv row: " + line);
    }
    out.rows.push_back(std::move(row));
  }
  if (!header_seen) throw validation_error("csv has no header row");
  return out;
}

void save_csv(const std::string& path, const std::vector<std::string>& comments,
              const std::vector<SweepRow>& rows) {
  std::ofstream os(path);
  if (!os) throw validation_error("cannot open for writing: " + path);
  write_csv(os, comments, rows);
}

CsvContent load_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw validation_error("cannot open csv file: " + path);
  return read_csv(is);
}

}  // namespace rip
