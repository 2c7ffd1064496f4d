#pragma once

#include "fsnlab/dynamics.hpp"
#include "fsnlab/graph.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace fsnlab {

struct NetworkFile {
  Network net;
  std::optional<SemiAutonomousConfig> cfg;  // present iff the file lists leaders
  std::optional<Matrix> x0;                 // n x d
};

// Throws invalid_input; messages carry the origin, a JSON path, and for
// syntax errors the line and column.
NetworkFile parse_network_file(const std::string& text, const std::string& origin = "<input>");
NetworkFile load_network_file(const std::string& path);
std::string serialize_network_file(const NetworkFile& f);

// Header "t,agent,dim,value", time-major then agent then dimension, 17 significant digits.
std::string emit_trajectory_csv(const Trajectory& traj);
Trajectory parse_trajectory_csv(const std::string& text);

// {"n": .., "arcs": [{"follower": i, "followed": j, "w": w}, ...]}
nlohmann::ordered_json arcs_to_json(const DirectedNetwork& dnet);
DirectedNetwork parse_arc_file(const std::string& text, const std::string& origin = "<input>");

// A reported number together with the tolerance it was computed or checked under.
nlohmann::ordered_json measured(double value, double tol);

std::string read_file(const std::string& path);

}  // namespace fsnlab
