#include "fsnlab/report.hpp"

#include "fsnlab/blocks.hpp"
#include "fsnlab/error.hpp"
#include "fsnlab/selection.hpp"
#include "fsnlab/tempo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>

namespace fsnlab {

using ojson = nlohmann::ordered_json;

const char* to_string(NetworkKind k) {
  switch (k) {
    case NetworkKind::fan: return "fan";
    case NetworkKind::san: return "san";
    case NetworkKind::signed_fan: return "signed-fan";
    default: return "signed-san";
  }
}

NetworkKind kind_of(const NetworkFile& f) {
  bool leaders = f.cfg && !f.cfg->links.empty();
  bool sign = f.net.is_signed() || (f.cfg && f.cfg->is_signed());
  if (leaders) return sign ? NetworkKind::signed_san : NetworkKind::san;
  return sign ? NetworkKind::signed_fan : NetworkKind::fan;
}

std::uint64_t seed_from_env() {
  const char* s = std::getenv("FSNLAB_SEED");
  if (!s || !*s) return 1;
  char* end = nullptr;
  unsigned long long v = std::strtoull(s, &end, 10);
  if (*end != '\0') fail(ErrorKind::invalid_input, "FSNLAB_SEED must be a non-negative integer");
  return v;
}

Matrix generator_of(const NetworkFile& f, const DirectedNetwork* reduced) {
  const int n = f.net.size();
  switch (kind_of(f)) {
    case NetworkKind::san: {
      if (!reduced) return perturbed_laplacian(f.net, *f.cfg);
      Matrix G = reduced_laplacian(*reduced);
      G.diagonal() += f.cfg->leader_diagonal(n);
      return G;
    }
    case NetworkKind::signed_san: {
      if (!reduced) return signed_perturbed_laplacian(f.net, *f.cfg);
      Matrix G = signed_reduced_laplacian(*reduced);
      G.diagonal() += f.cfg->leader_diagonal(n);
      return G;
    }
    case NetworkKind::fan: return reduced ? reduced_laplacian(*reduced) : laplacian(f.net);
    default: return reduced ? signed_reduced_laplacian(*reduced) : signed_laplacian(f.net);
  }
}

std::optional<Drive> drive_of(const NetworkFile& f, int dims) {
  if (!f.cfg || f.cfg->links.empty()) return std::nullopt;
  Drive d;
  d.B = f.cfg->input_matrix(f.net.size());
  if (f.cfg->inputs.empty()) {
    d.U = Matrix::Zero(f.cfg->m, dims);
  } else {
    d.U = f.cfg->input_values();
    if (d.U.cols() != dims) fail(ErrorKind::invalid_input, "input dimension differs from state dimension");
  }
  return d;
}

Matrix limit_state(const NetworkFile& f, const DirectedNetwork* reduced, const Matrix& x0) {
  Matrix G = generator_of(f, reduced);
  auto drive = drive_of(f, static_cast<int>(x0.cols()));
  Eigen::FullPivLU<Matrix> lu(G);
  if (drive) {
    if (!lu.isInvertible()) fail(ErrorKind::precondition, "generator is singular; no unique steady state");
    return lu.solve(drive->B * drive->U);
  }
  // lim x = r w^T x0 / (w^T r) with r, w the right and left null vectors
  Matrix right = lu.kernel();
  Matrix left = Eigen::FullPivLU<Matrix>(G.transpose()).kernel();
  if (right.cols() != 1 || left.cols() != 1)
    fail(ErrorKind::precondition, "generator has a repeated zero eigenvalue; the limit depends on more than one mode");
  Vector r = right.col(0), w = left.col(0);
  return r * (w.transpose() * x0) / w.dot(r);
}

EigenPair ordering_vector(const NetworkFile& f, const Tolerances& tol) {
  switch (kind_of(f)) {
    case NetworkKind::san: return principal_pair_perturbed(perturbed_laplacian(f.net, *f.cfg), tol);
    case NetworkKind::signed_san: {
      auto part = augmented_balance_partition(f.net, *f.cfg);
      if (!part) fail(ErrorKind::precondition, "signed network with its inputs is not structurally balanced");
      return principal_pair_signed(signed_perturbed_laplacian(f.net, *f.cfg),
                                   gauge_signature(*part, f.net.size()), tol);
    }
    case NetworkKind::fan: return fiedler_pair(laplacian(f.net), tol);
    default: fail(ErrorKind::precondition, "no neighbour ordering is defined for signed networks without inputs");
  }
}

Matrix initial_state(const NetworkFile& f, std::uint64_t seed) {
  if (f.x0) return *f.x0;
  const int n = f.net.size();
  const int d = f.cfg && f.cfg->dimension() > 0 ? f.cfg->dimension() : 1;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::optional<Vector> v;
  try {
    v = ordering_vector(f).vector;
  } catch (const Error&) {
  }
  for (int attempt = 0; attempt < 100; ++attempt) {
    Matrix X(n, d);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < d; ++b) X(a, b) = unif(rng);
    if (!v) return X;
    Matrix off = X - limit_state(f, nullptr, X);
    if ((v->transpose() * off).cwiseAbs().minCoeff() > 1e-6) return X;
  }
  fail(ErrorKind::precondition, "could not draw a generic initial state");
}

namespace {

ojson arc_report(const Network& net, const DirectedNetwork& d) {
  ojson j = arcs_to_json(d);
  ojson influence = ojson::array();
  for (const auto& a : d.arcs()) influence.push_back(std::to_string(a.followed) + "->" + std::to_string(a.follower));
  j["influence"] = influence;
  ojson removed = ojson::array();
  for (const auto& e : net.edges()) {
    if (!d.has_arc(e.i, e.j)) removed.push_back({{"follower", e.i}, {"followed", e.j}});
    if (!d.has_arc(e.j, e.i)) removed.push_back({{"follower", e.j}, {"followed", e.i}});
  }
  j["removed"] = removed;
  return j;
}

ojson reach_report(const std::vector<bool>& r) {
  std::vector<int> bad;
  for (std::size_t k = 0; k < r.size(); ++k)
    if (!r[k]) bad.push_back(static_cast<int>(k) + 1);
  return {{"all_reachable", bad.empty()}, {"unreachable", bad}};
}

ojson vec(const Vector& v) { return ojson(std::vector<double>(v.data(), v.data() + v.size())); }

bool unit_weights(const Network& net) {
  return std::all_of(net.edges().begin(), net.edges().end(), [](const Edge& e) { return std::abs(e.w) == 1.0; });
}

double signed_reduced_lambda1(const NetworkFile& f, const DirectedNetwork& d) {
  return reduced_spectrum(generator_of(f, &d))(0);
}

}  // namespace

std::string default_mode(const NetworkFile& f) {
  switch (kind_of(f)) {
    case NetworkKind::san: return "san-fsn";
    case NetworkKind::signed_san: return "signed-san-fsn";
    case NetworkKind::fan: return "fan-fsn";
    default: fail(ErrorKind::precondition, "no selection mode applies to signed networks without inputs");
  }
}

Selection select_network(const NetworkFile& f, const std::string& mode) {
  const Tolerances tol;
  Selection s;
  s.report["mode"] = mode;
  s.report["network"] = f.net.name();
  const NetworkKind kind = kind_of(f);
  const double gap = tol.gap;

  if (mode == "san-fsn" || mode == "san-ffn") {
    if (kind != NetworkKind::san) fail(ErrorKind::invalid_input, mode + " needs an unsigned network with leaders");
    auto p = ordering_vector(f);
    bool fsn = mode == "san-fsn";
    s.dnet = fsn ? fsn_san(f.net, *f.cfg, p.vector) : ffn_san(f.net, *f.cfg, p.vector);
    double red = reduced_san_lambda1(s.dnet, *f.cfg);
    auto reach = reachable_from_inputs(s.dnet, *f.cfg);
    s.report["lambda1_original"] = measured(p.value, gap);
    s.report["lambda1_reduced"] = measured(red, gap);
    s.report["reachability"] = reach_report(reach);
    if (fsn) {
      bool all = std::all_of(reach.begin(), reach.end(), [](bool b) { return b; });
      s.verified = all && red >= p.value - gap && !has_directed_cycle(s.dnet);
    }
  } else if (mode == "signed-san-fsn") {
    if (kind != NetworkKind::signed_san && kind != NetworkKind::san)
      fail(ErrorKind::invalid_input, mode + " needs a network with leaders");
    auto part = augmented_balance_partition(f.net, *f.cfg);
    if (!part) fail(ErrorKind::precondition, "signed network with its inputs is not structurally balanced");
    auto p = ordering_vector(f);
    s.dnet = fsn_signed_san(f.net, *f.cfg, p.vector);
    double red = signed_reduced_lambda1(f, s.dnet);
    auto reach = reachable_from_inputs(s.dnet, *f.cfg);
    s.report["partition"] = {{"V1", part->first}, {"V2", part->second}};
    s.report["lambda1_original"] = measured(p.value, gap);
    s.report["lambda1_reduced"] = measured(red, gap);
    s.report["reachability"] = reach_report(reach);
    bool all = std::all_of(reach.begin(), reach.end(), [](bool b) { return b; });
    s.verified = all && red >= p.value - gap;
  } else if (mode == "fan-fsn") {
    if (kind != NetworkKind::fan) fail(ErrorKind::invalid_input, mode + " needs an unsigned network without leaders");
    auto p = fiedler_pair(laplacian(f.net));
    if (!p.simple) fail(ErrorKind::precondition, "lambda2 is repeated; the Fiedler vector is not unique");
    auto decomp = block_cut_tree(f.net);
    auto cls = classify_fiedler(decomp, p.vector);
    s.dnet = fsn_fan(f.net, p.vector, decomp, cls);
    auto sources = fan_core_sources(decomp, cls);
    auto reach = reachable_from(s.dnet, sources);
    double red = reduced_fan_lambda2(s.dnet);
    auto sym = symmetrized_connectivity(s.dnet);
    double bound = fiedler_lower_bound(laplacian(f.net), s.dnet, sym.vector);
    s.report["lambda2_original"] = measured(p.value, gap);
    s.report["lambda2_reduced"] = measured(red, gap);
    s.report["core"] = cls.which == FiedlerClassification::Case::core_block
                           ? ojson{{"case", 1}, {"block", decomp.blocks[cls.core_block]}}
                           : ojson{{"case", 2}, {"node", cls.core_node}};
    s.report["reachability_from_core"] = reach_report(reach);
    s.report["symmetrized_connectivity"] = measured(sym.value, gap);
    s.report["lower_bound"] = measured(bound, gap);
    bool all = std::all_of(reach.begin(), reach.end(), [](bool b) { return b; });
    s.verified = all && bound <= sym.value + 1e-9;
  } else {
    fail(ErrorKind::invalid_input, "unknown selection mode \"" + mode + "\"");
  }
  s.report["reduced"] = arc_report(f.net, s.dnet);
  s.report["verified"] = s.verified;
  return s;
}

ojson analyze_report(const NetworkFile& f) {
  const Tolerances tol;
  ojson r;
  r["network"] = f.net.name();
  r["kind"] = to_string(kind_of(f));
  r["n"] = f.net.size();
  r["edges"] = f.net.edges().size();
  const bool connected = is_connected(f.net);
  r["connected"] = connected;
  const bool sign = f.net.is_signed();
  Matrix L = sign ? signed_laplacian(f.net) : laplacian(f.net);
  auto ed = jacobi_eigen(L);
  r["laplacian"] = sign ? "signed" : "unsigned";
  r["spectrum"] = vec(ed.values);
  if (!connected) return r;

  if (auto part = structural_balance_partition(f.net))
    r["structural_balance"] = {{"balanced", true}, {"V1", part->first}, {"V2", part->second}};
  else
    r["structural_balance"] = {{"balanced", false}};

  auto decomp = block_cut_tree(f.net);
  ojson blocks = ojson::array();
  for (const auto& b : decomp.blocks) blocks.push_back(b);
  ojson links = ojson::array();
  for (auto [b, c] : decomp.tree_links) links.push_back({b, c});
  r["block_cut_tree"] = {{"blocks", blocks}, {"cut_nodes", decomp.cut_nodes}, {"tree_links", links}};

  if (!sign) {
    auto p = fiedler_pair(L, tol);
    r["lambda2"] = measured(p.value, tol.gap);
    r["lambda2_simple"] = p.simple;
    r["fiedler_vector"] = vec(p.vector);
    if (p.simple) {
      auto cls = classify_fiedler(decomp, p.vector, tol);
      ojson labels = ojson::array();
      for (auto b : cls.block_label) labels.push_back(to_string(b));
      ojson c{{"case", static_cast<int>(cls.which)}, {"block_labels", labels}};
      if (cls.which == FiedlerClassification::Case::core_block)
        c["core_block"] = decomp.blocks[cls.core_block];
      else
        c["core_node"] = cls.core_node;
      c["warnings"] = cls.warnings;
      r["fiedler_classification"] = c;
    }
  }
  if (kind_of(f) == NetworkKind::san || kind_of(f) == NetworkKind::signed_san) {
    try {
      auto p = ordering_vector(f, tol);
      r["lambda1_perturbed"] = measured(p.value, tol.gap);
      r["v1_perturbed"] = vec(p.vector);
    } catch (const Error& e) {
      r["lambda1_perturbed_error"] = e.what();
    }
  }
  return r;
}

Comparison compare_report(const NetworkFile& f, std::uint64_t seed) {
  const Tolerances tol;
  Comparison c;
  ojson& r = c.report;
  const NetworkKind kind = kind_of(f);
  r["network"] = f.net.name();
  r["kind"] = to_string(kind);

  auto sel = select_network(f, default_mode(f));
  c.verified = sel.verified;
  r["selection"] = sel.report;

  Matrix x0 = initial_state(f, seed);
  r["x0_source"] = f.x0 ? "file" : "seed " + std::to_string(seed);
  SimulationConfig sc;
  Matrix G0 = generator_of(f, nullptr), G1 = generator_of(f, &sel.dnet);
  auto drive = drive_of(f, static_cast<int>(x0.cols()));
  auto orig = simulate(G0, drive, x0, sc);
  auto red = simulate(G1, drive, x0, sc, Model::reduced_directed);
  Matrix lim0 = limit_state(f, nullptr, x0), lim1 = limit_state(f, &sel.dnet, x0);
  auto rate0 = empirical_rate(orig, lim0), rate1 = empirical_rate(red, lim1);
  auto rate_json = [](const RateEstimate& e) {
    return ojson{{"rate", measured(e.rate, 0.1 * std::abs(e.rate))},
                 {"fit_window", {e.fit_start, e.fit_end}},
                 {"monotone", e.monotone},
                 {"converging", e.converging}};
  };
  r["simulation"] = {{"dt", sc.dt}, {"horizon", sc.horizon}, {"method", to_string(sc.method)}};
  r["rate_original"] = rate_json(rate0);
  r["rate_reduced"] = rate_json(rate1);
  double err1 = (red.states.back() - lim1).cwiseAbs().maxCoeff();
  r["reduced_final_error"] = measured(err1, 1e-3);
  c.verified = c.verified && err1 < 1e-3;

  auto p = ordering_vector(f, tol);
  r["ordering_vector"] = vec(p.vector);

  if (kind == NetworkKind::san || kind == NetworkKind::signed_san) {
    double l1 = p.value;
    double l1r = sel.report["lambda1_reduced"]["value"].get<double>();
    r["lambda1_original"] = measured(l1, tol.gap);
    r["lambda1_reduced"] = measured(l1r, tol.gap);
    bool all_leaders = static_cast<int>(f.cfg->links.size()) == f.net.size();
    if (unit_weights(f.net) && !all_leaders) {
      r["lambda1_reduced_is_one"] = std::abs(l1r - 1.0) < 1e-9;
      c.verified = c.verified && std::abs(l1r - 1.0) < 1e-9;
    }
    ojson ss = ojson::array();
    for (int a = 0; a < lim1.rows(); ++a) {
      std::vector<double> row;
      for (int b = 0; b < lim1.cols(); ++b) row.push_back(lim1(a, b));
      ss.push_back(row);
    }
    r["steady_state"] = ss;
  } else {
    auto decomp = block_cut_tree(f.net);
    auto cls = classify_fiedler(decomp, p.vector, tol);
    Vector analytic = fan_fsn_consensus_value(x0, decomp, cls);
    Vector simulated = red.states.back().colwise().mean().transpose();
    r["lambda2_original"] = measured(p.value, tol.gap);
    r["lambda2_reduced"] = sel.report["lambda2_reduced"];
    r["consensus_analytic"] = vec(analytic);
    r["consensus_simulated"] = measured(simulated(0), 1e-3);
    bool match = (analytic - simulated).cwiseAbs().maxCoeff() < 1e-3;
    r["consensus_match"] = match;
    c.verified = c.verified && match;
    if (is_tree(f.net)) {
      int diam = tree_diameter(f.net);
      double b = tree_diameter_bound(diam);
      r["tree"] = {{"diameter", diam}, {"diameter_bound", b}, {"lambda2_within_bound", p.value <= b + tol.gap}};
      c.verified = c.verified && p.value <= b + tol.gap;
    }
  }

  // relative tempo on every edge, both directions
  ojson tempo = ojson::array();
  for (const auto& e : f.net.edges()) {
    for (auto [i, j] : {std::pair{e.i, e.j}, std::pair{e.j, e.i}}) {
      double lim = tempo_limit_from_eigvec(p.vector, {i}, {j}, tol);
      auto g = g_ratio_series(orig, i, j, tol.still);
      tempo.push_back({{"i", i}, {"j", j}, {"eigvec_ratio", lim}, {"g_at_10", g.at(10.0)},
                       {"g_final", assess_ratio(g).limit}});
    }
  }
  r["tempo"] = tempo;
  r["verified"] = c.verified;
  return c;
}

}  // namespace fsnlab
