#include "fsnlab/io.hpp"

#include "fsnlab/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace fsnlab {

using json = nlohmann::json;

namespace {

struct Ctx {
  std::string origin;

  [[noreturn]] void bad(const std::string& path, const std::string& msg) const {
    fail(ErrorKind::invalid_input, origin + ": " + path + ": " + msg);
  }

  void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) const {
    if (!obj.is_object()) bad(path, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool ok = false;
      for (const char* k : allowed) ok |= it.key() == k;
      if (!ok) bad(path, "unknown key \"" + it.key() + "\"");
    }
  }

  int integer(const json& v, const std::string& path) const {
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_number_float()) {
      double d = v.get<double>();
      if (std::floor(d) == d && std::abs(d) < 1e9) return static_cast<int>(d);
    }
    bad(path, "malformed number: expected an integer, got " + v.dump());
  }

  double real(const json& v, const std::string& path) const {
    if (!v.is_number()) bad(path, "malformed number: expected a real, got " + v.dump());
    double d = v.get<double>();
    if (!std::isfinite(d)) bad(path, "malformed number: not finite");
    return d;
  }

  std::vector<double> real_row(const json& v, const std::string& path) const {
    std::vector<double> out;
    if (v.is_number()) {
      out.push_back(real(v, path));
      return out;
    }
    if (!v.is_array() || v.empty()) bad(path, "expected a number or a non-empty array of numbers");
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(real(v[k], path + "[" + std::to_string(k) + "]"));
    return out;
  }
};

std::string line_context(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::invalid_input, path + ": cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

NetworkFile parse_network_file(const std::string& text, const std::string& origin) {
  Ctx c{origin};
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::invalid_input, origin + ": " + line_context(text, e.byte) + ": syntax error: " + e.what());
  }
  c.only_keys(doc, "$", {"n", "directed", "edges", "leaders", "inputs", "x0", "name"});
  if (!doc.contains("n")) c.bad("$", "missing key \"n\"");
  const int n = c.integer(doc["n"], "$.n");
  if (n < 1) c.bad("$.n", "node count must be positive");
  if (doc.contains("directed")) {
    if (!doc["directed"].is_boolean()) c.bad("$.directed", "expected a boolean");
    if (doc["directed"].get<bool>()) c.bad("$.directed", "directed input graphs are not supported");
  }
  std::string name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) c.bad("$.name", "expected a string");
    name = doc["name"].get<std::string>();
  }

  std::vector<Edge> edges;
  if (!doc.contains("edges") || !doc["edges"].is_array()) c.bad("$.edges", "expected an array of edges");
  std::set<std::pair<int, int>> seen;
  for (std::size_t k = 0; k < doc["edges"].size(); ++k) {
    const json& e = doc["edges"][k];
    std::string p = "$.edges[" + std::to_string(k) + "]";
    c.only_keys(e, p, {"i", "j", "w"});
    if (!e.contains("i") || !e.contains("j")) c.bad(p, "edge needs both \"i\" and \"j\"");
    Edge ed{c.integer(e["i"], p + ".i"), c.integer(e["j"], p + ".j"), 1.0};
    if (e.contains("w")) ed.w = c.real(e["w"], p + ".w");
    if (ed.i < 1 || ed.i > n || ed.j < 1 || ed.j > n) c.bad(p, "node id out of range 1.." + std::to_string(n));
    if (ed.i == ed.j) c.bad(p, "self-loop on node " + std::to_string(ed.i));
    if (ed.w == 0.0) c.bad(p + ".w", "edge weight must be nonzero");
    if (!seen.emplace(std::min(ed.i, ed.j), std::max(ed.i, ed.j)).second)
      c.bad(p, "duplicate edge {" + std::to_string(ed.i) + "," + std::to_string(ed.j) + "}");
    edges.push_back(ed);
  }

  NetworkFile f;
  f.net = Network(n, std::move(edges), name);

  std::optional<std::vector<std::vector<double>>> inputs;
  if (doc.contains("inputs")) {
    const json& in = doc["inputs"];
    if (!in.is_array()) c.bad("$.inputs", "expected an array of input vectors");
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < in.size(); ++k) {
      rows.push_back(c.real_row(in[k], "$.inputs[" + std::to_string(k) + "]"));
      if (rows.back().size() != rows.front().size())
        c.bad("$.inputs[" + std::to_string(k) + "]", "input vectors must share one dimension");
    }
    inputs = std::move(rows);
  }

  if (doc.contains("leaders")) {
    const json& ls = doc["leaders"];
    if (!ls.is_array()) c.bad("$.leaders", "expected an array of leader links");
    SemiAutonomousConfig cfg;
    std::set<int> nodes;
    int max_input = 0;
    for (std::size_t k = 0; k < ls.size(); ++k) {
      std::string p = "$.leaders[" + std::to_string(k) + "]";
      c.only_keys(ls[k], p, {"node", "input", "sign"});
      if (!ls[k].contains("node")) c.bad(p, "missing key \"node\"");
      LeaderLink l{c.integer(ls[k]["node"], p + ".node"), 1, 1};
      if (ls[k].contains("input")) l.input = c.integer(ls[k]["input"], p + ".input");
      if (ls[k].contains("sign")) l.sign = c.integer(ls[k]["sign"], p + ".sign");
      if (l.node < 1 || l.node > n) c.bad(p + ".node", "node id out of range 1.." + std::to_string(n));
      if (l.input < 1) c.bad(p + ".input", "input index must be at least 1");
      if (l.sign != 1 && l.sign != -1) c.bad(p + ".sign", "sign must be 1 or -1");
      if (!nodes.insert(l.node).second) c.bad(p, "leader node " + std::to_string(l.node) + " repeated");
      max_input = std::max(max_input, l.input);
      cfg.links.push_back(l);
    }
    cfg.m = max_input;
    if (inputs) {
      if (static_cast<int>(inputs->size()) < max_input)
        c.bad("$.inputs", "leaders reference input " + std::to_string(max_input) + " but only " +
                              std::to_string(inputs->size()) + " inputs are given");
      cfg.m = static_cast<int>(inputs->size());
      cfg.inputs = *inputs;
    }
    cfg.validate(n);
    f.cfg = std::move(cfg);
  } else if (inputs && !inputs->empty()) {
    c.bad("$.inputs", "inputs given without leaders");
  }

  if (doc.contains("x0")) {
    const json& x = doc["x0"];
    if (!x.is_array() || static_cast<int>(x.size()) != n) c.bad("$.x0", "expected " + std::to_string(n) + " rows");
    std::vector<std::vector<double>> rows;
    for (int k = 0; k < n; ++k) {
      rows.push_back(c.real_row(x[k], "$.x0[" + std::to_string(k) + "]"));
      if (rows.back().size() != rows.front().size())
        c.bad("$.x0[" + std::to_string(k) + "]", "rows must share one dimension");
    }
    Matrix X(n, static_cast<int>(rows.front().size()));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < X.cols(); ++b) X(a, b) = rows[a][b];
    if (f.cfg && f.cfg->dimension() > 0 && f.cfg->dimension() != X.cols())
      c.bad("$.x0", "state dimension differs from input dimension");
    f.x0 = std::move(X);
  }
  return f;
}

NetworkFile load_network_file(const std::string& path) { return parse_network_file(read_file(path), path); }

std::string serialize_network_file(const NetworkFile& f) {
  nlohmann::ordered_json doc;
  if (!f.net.name().empty()) doc["name"] = f.net.name();
  doc["n"] = f.net.size();
  doc["directed"] = false;
  doc["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : f.net.edges()) doc["edges"].push_back({{"i", e.i}, {"j", e.j}, {"w", e.w}});
  if (f.cfg) {
    doc["leaders"] = nlohmann::ordered_json::array();
    for (const auto& l : f.cfg->links)
      doc["leaders"].push_back({{"node", l.node}, {"input", l.input}, {"sign", l.sign}});
    if (!f.cfg->inputs.empty()) doc["inputs"] = f.cfg->inputs;
  }
  if (f.x0) {
    doc["x0"] = nlohmann::ordered_json::array();
    for (int a = 0; a < f.x0->rows(); ++a) {
      std::vector<double> row(f.x0->cols());
      for (int b = 0; b < f.x0->cols(); ++b) row[b] = (*f.x0)(a, b);
      doc["x0"].push_back(row);
    }
  }
  return doc.dump(2) + "\n";
}

std::string emit_trajectory_csv(const Trajectory& traj) {
  std::string out = "t,agent,dim,value\n";
  char buf[96];
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Matrix& X = traj.states[k];
    for (int a = 0; a < X.rows(); ++a)
      for (int b = 0; b < X.cols(); ++b) {
        std::snprintf(buf, sizeof buf, "%.17g,%d,%d,%.17g\n", traj.times[k], a + 1, b + 1, X(a, b));
        out += buf;
      }
  }
  return out;
}

Trajectory parse_trajectory_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "t,agent,dim,value")
    fail(ErrorKind::invalid_input, "trajectory csv: line 1: expected header t,agent,dim,value");
  struct Row {
    double t;
    int a, d;
    double v;
  };
  std::vector<Row> rows;
  int n = 0, dim = 0;
  for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    Row r{};
    if (std::sscanf(line.c_str(), "%lf,%d,%d,%lf", &r.t, &r.a, &r.d, &r.v) != 4 || r.a < 1 || r.d < 1)
      fail(ErrorKind::invalid_input, "trajectory csv: line " + std::to_string(lineno) + ": malformed row");
    n = std::max(n, r.a);
    dim = std::max(dim, r.d);
    rows.push_back(r);
  }
  Trajectory traj;
  if (rows.empty()) return traj;
  const std::size_t per = static_cast<std::size_t>(n) * dim;
  if (rows.size() % per != 0) fail(ErrorKind::invalid_input, "trajectory csv: incomplete time sample");
  for (std::size_t k = 0; k < rows.size(); k += per) {
    Matrix X(n, dim);
    for (std::size_t q = 0; q < per; ++q) {
      const Row& r = rows[k + q];
      if (r.t != rows[k].t) fail(ErrorKind::invalid_input, "trajectory csv: rows out of time-major order");
      X(r.a - 1, r.d - 1) = r.v;
    }
    traj.times.push_back(rows[k].t);
    traj.states.push_back(std::move(X));
  }
  return traj;
}

nlohmann::ordered_json arcs_to_json(const DirectedNetwork& dnet) {
  nlohmann::ordered_json j;
  j["n"] = dnet.size();
  j["arcs"] = nlohmann::ordered_json::array();
  for (const auto& a : dnet.arcs()) j["arcs"].push_back({{"follower", a.follower}, {"followed", a.followed}, {"w", a.w}});
  return j;
}

DirectedNetwork parse_arc_file(const std::string& text, const std::string& origin) {
  Ctx c{origin};
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::invalid_input, origin + ": " + line_context(text, e.byte) + ": syntax error: " + e.what());
  }
  c.only_keys(doc, "$", {"n", "arcs"});
  if (!doc.contains("n")) c.bad("$", "missing key \"n\"");
  int n = c.integer(doc["n"], "$.n");
  if (!doc.contains("arcs") || !doc["arcs"].is_array()) c.bad("$.arcs", "expected an array");
  std::vector<Arc> arcs;
  for (std::size_t k = 0; k < doc["arcs"].size(); ++k) {
    const json& a = doc["arcs"][k];
    std::string p = "$.arcs[" + std::to_string(k) + "]";
    c.only_keys(a, p, {"follower", "followed", "w"});
    if (!a.contains("follower") || !a.contains("followed")) c.bad(p, "arc needs \"follower\" and \"followed\"");
    Arc arc{c.integer(a["follower"], p + ".follower"), c.integer(a["followed"], p + ".followed"), 1.0};
    if (a.contains("w")) arc.w = c.real(a["w"], p + ".w");
    arcs.push_back(arc);
  }
  try {
    return DirectedNetwork(n, std::move(arcs));
  } catch (const Error& e) {
    fail(ErrorKind::invalid_input, origin + ": " + e.what());
  }
}

nlohmann::ordered_json measured(double value, double tol) {
  nlohmann::ordered_json j;
  j["value"] = value;
  j["tol"] = tol;
  return j;
}

}  // namespace fsnlab
