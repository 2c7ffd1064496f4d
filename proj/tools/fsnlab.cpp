// fsnlab command-line front end.
//
// Exit codes: 0 ok, 1 a requested verification failed, 2 usage error,
// 3 invalid input, 4 numerical precondition violated, 5 non-termination.

#include "fsnlab/blocks.hpp"
#include "fsnlab/error.hpp"
#include "fsnlab/io.hpp"
#include "fsnlab/report.hpp"
#include "fsnlab/selection.hpp"
#include "fsnlab/tempo.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace fsnlab;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::invalid_input, path + ": cannot write file");
  out << text;
}

void print(const ojson& j) { std::cout << j.dump(2) << "\n"; }

std::vector<std::pair<int, int>> parse_pairs(const std::string& spec) {
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int i = 0, j = 0;
    char colon = 0;
    std::istringstream is(item);
    if (!(is >> i >> colon >> j) || colon != ':' || !(is >> std::ws).eof())
      throw CLI::ValidationError("--pairs", "expected i:j[,i:j...], got \"" + item + "\"");
    out.emplace_back(i, j);
  }
  if (out.empty()) throw CLI::ValidationError("--pairs", "no pairs given");
  return out;
}

Method parse_method(const std::string& m) { return m == "euler" ? Method::euler : Method::rk4; }

Model model_of(NetworkKind k) {
  switch (k) {
    case NetworkKind::san: return Model::san;
    case NetworkKind::signed_san: return Model::signed_san;
    case NetworkKind::signed_fan: return Model::signed_fan;
    default: return Model::fan;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neighbour selection for consensus networks from Laplacian eigenvectors"};
  app.require_subcommand(1);

  std::string file;
  auto add_file = [&](CLI::App* sub) { sub->add_option("file", file, "network file (JSON)")->required(); };

  auto* analyze = app.add_subcommand("analyze", "spectrum, block-cut tree, Fiedler classification, balance");
  add_file(analyze);

  auto* select = app.add_subcommand("select", "build a reduced network and report its guarantees");
  add_file(select);
  std::string mode;
  std::string arc_out;
  select->add_option("--mode", mode, "selection rule")
      ->check(CLI::IsMember({"san-fsn", "san-ffn", "fan-fsn", "signed-san-fsn"}));
  select->add_option("--arcs-out", arc_out, "write the arc list to this file");

  auto* sim = app.add_subcommand("simulate", "integrate the network dynamics and write a CSV trajectory");
  add_file(sim);
  std::string reduced_file, traj_out, method = "rk4";
  double dt = 0.01, horizon = 60.0;
  sim->add_option("--reduced", reduced_file, "arc file of a reduced network to simulate instead");
  sim->add_option("--dt", dt, "step size")->check(CLI::PositiveNumber);
  sim->add_option("--horizon", horizon, "simulated time")->check(CLI::PositiveNumber);
  sim->add_option("--method", method, "integrator")->check(CLI::IsMember({"euler", "rk4"}));
  sim->add_option("--out", traj_out, "trajectory CSV path (default stdout)");

  auto* tempo = app.add_subcommand("tempo", "relative tempo series against eigenvector ratios");
  add_file(tempo);
  std::string pairs_spec, series_out;
  bool first_component = false;
  tempo->add_option("--pairs", pairs_spec, "ordered pairs i:j,...")->required();
  tempo->add_flag("--first-component", first_component, "signed first-coordinate ratio instead of norms");
  tempo->add_option("--dt", dt, "step size")->check(CLI::PositiveNumber);
  tempo->add_option("--horizon", horizon, "simulated time")->check(CLI::PositiveNumber);
  tempo->add_option("--out", series_out, "write the ratio series as CSV");

  auto* dist = app.add_subcommand("distributed-select", "run the round-based distributed selection");
  add_file(dist);
  double delta = 0.01, eps = 1e-4, tie_band = 1e-3;
  int patience = 100;
  long cap = 100000;
  bool fan_tree = false;
  dist->add_option("--delta", delta, "sampling step")->check(CLI::PositiveNumber);
  dist->add_option("--eps", eps, "termination threshold")->check(CLI::PositiveNumber);
  dist->add_option("--patience", patience, "consecutive settled rounds before an agent stops")
      ->check(CLI::PositiveNumber);
  dist->add_option("--tie-band", tie_band, "ratios within this of 1 count as ties")->check(CLI::NonNegativeNumber);
  dist->add_option("--round-cap", cap, "give up after this many rounds")->check(CLI::PositiveNumber);
  dist->add_flag("--fan-tree", fan_tree, "tree FAN variant using first-component ratios");

  auto* cmp = app.add_subcommand("compare", "original vs reduced network, end to end");
  add_file(cmp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    const std::uint64_t seed = seed_from_env();
    NetworkFile f = load_network_file(file);

    if (*analyze) {
      print(analyze_report(f));
      return 0;
    }

    if (*select) {
      auto s = select_network(f, mode.empty() ? default_mode(f) : mode);
      if (!arc_out.empty()) write_out(arc_out, arcs_to_json(s.dnet).dump(2) + "\n");
      print(s.report);
      return s.verified ? 0 : kVerifyFailed;
    }

    if (*sim) {
      std::optional<DirectedNetwork> red;
      if (!reduced_file.empty()) {
        red = parse_arc_file(read_file(reduced_file), reduced_file);
        if (red->size() != f.net.size()) fail(ErrorKind::invalid_input, reduced_file + ": node count differs");
        for (const auto& a : red->arcs()) {
          auto w = f.net.weight(a.follower, a.followed);
          if (!w || *w != a.w)
            fail(ErrorKind::invalid_input, reduced_file + ": arc " + std::to_string(a.follower) + "<-" +
                                               std::to_string(a.followed) + " is not an edge of the network");
        }
      }
      Matrix x0 = initial_state(f, seed);
      SimulationConfig sc{dt, horizon, parse_method(method)};
      const DirectedNetwork* rp = red ? &*red : nullptr;
      auto traj = simulate(generator_of(f, rp), drive_of(f, static_cast<int>(x0.cols())), x0, sc,
                           red ? Model::reduced_directed : model_of(kind_of(f)));
      write_out(traj_out, emit_trajectory_csv(traj));
      if (!traj_out.empty()) {
        Matrix lim = limit_state(f, rp, x0);
        ojson j{{"model", to_string(traj.model)},
                {"samples", traj.size()},
                {"final_error", measured((traj.states.back() - lim).cwiseAbs().maxCoeff(), 0.0)}};
        try {
          auto e = empirical_rate(traj, lim);
          j["empirical_rate"] = measured(e.rate, 0.1 * std::abs(e.rate));
          j["monotone"] = e.monotone;
          j["converging"] = e.converging;
        } catch (const Error& e) {
          j["empirical_rate_error"] = e.what();
        }
        print(j);
      }
      return 0;
    }

    if (*tempo) {
      auto pairs = parse_pairs(pairs_spec);
      Matrix x0 = initial_state(f, seed);
      auto traj = simulate(generator_of(f), drive_of(f, static_cast<int>(x0.cols())), x0,
                           SimulationConfig{dt, horizon, Method::rk4}, model_of(kind_of(f)));
      auto p = ordering_vector(f);
      ojson rows = ojson::array();
      std::vector<RatioSeries> series;
      for (auto [i, j] : pairs) {
        if (i < 1 || i > f.net.size() || j < 1 || j > f.net.size())
          fail(ErrorKind::invalid_input, "pair " + std::to_string(i) + ":" + std::to_string(j) + " out of range");
        auto s = first_component ? first_component_ratio(traj, i, j) : g_ratio_series(traj, i, j);
        auto a = assess_ratio(s);
        double expect = first_component ? entry_ratio(p.vector, i, j) : tempo_limit_from_eigvec(p.vector, {i}, {j});
        rows.push_back({{"i", i},
                        {"j", j},
                        {"eigvec_ratio", expect},
                        {"at_t10", s.at(10.0)},
                        {"final", a.limit},
                        {"settled", a.settled},
                        {"divergent", a.divergent}});
        series.push_back(std::move(s));
      }
      if (!series_out.empty()) {
        std::string csv = "t";
        for (auto [i, j] : pairs) csv += "," + std::to_string(i) + ":" + std::to_string(j);
        csv += "\n";
        char buf[64];
        for (std::size_t k = 0; k < series.front().times.size(); ++k) {
          std::snprintf(buf, sizeof buf, "%.17g", series.front().times[k]);
          csv += buf;
          for (const auto& s : series) {
            std::snprintf(buf, sizeof buf, ",%.17g", s.values[k]);
            csv += buf;
          }
          csv += "\n";
        }
        write_out(series_out, csv);
      }
      print({{"network", f.net.name()}, {"pairs", rows}});
      return 0;
    }

    if (*dist) {
      TempoOptions opt;
      opt.delta = delta;
      opt.eps = eps;
      opt.patience = patience;
      opt.round_cap = cap;
      opt.tie_band = tie_band;
      Matrix x0 = initial_state(f, seed);
      DistributedSelection d;
      Selection central;
      if (fan_tree) {
        if (kind_of(f) != NetworkKind::fan) fail(ErrorKind::invalid_input, "--fan-tree needs a network without leaders");
        d = run_distributed_fan_tree(f.net, x0, opt);
        central = select_network(f, "fan-fsn");
      } else {
        if (kind_of(f) != NetworkKind::san) fail(ErrorKind::invalid_input, "distributed selection needs an unsigned SAN");
        d = run_algorithm1(f.net, *f.cfg, x0, opt);
        central = select_network(f, "san-fsn");
      }
      bool same = d.dnet.same_arcs(central.dnet);
      ojson pairs = ojson::array();
      for (const auto& p : d.report.pairs)
        pairs.push_back({{"i", p.i}, {"j", p.j}, {"g", p.g}, {"rounds", p.rounds}, {"retained", p.retained}});
      ojson j{{"network", f.net.name()},
              {"variant", fan_tree ? "fan-tree" : "san"},
              {"delta", delta},
              {"eps", eps},
              {"patience", patience},
              {"tie_band", tie_band},
              {"rounds", d.report.rounds},
              {"agent_rounds", d.report.agent_rounds},
              {"pairs", pairs},
              {"arcs", arcs_to_json(d.dnet)},
              {"matches_centralized", same}};
      print(j);
      return same ? 0 : kVerifyFailed;
    }

    if (*cmp) {
      auto c = compare_report(f, seed);
      print(c.report);
      return c.verified ? 0 : kVerifyFailed;
    }
  } catch (const Error& e) {
    std::cerr << "fsnlab: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const CLI::ValidationError& e) {
    std::cerr << "fsnlab: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
