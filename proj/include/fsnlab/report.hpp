#pragma once

// End-to-end reports shared by the CLI and the acceptance suite.

#include "fsnlab/dynamics.hpp"
#include "fsnlab/io.hpp"
#include "fsnlab/spectral.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace fsnlab {

enum class NetworkKind { fan, san, signed_fan, signed_san };
const char* to_string(NetworkKind k);
NetworkKind kind_of(const NetworkFile& f);

// FSNLAB_SEED, or 1 when unset.
std::uint64_t seed_from_env();

// x0 from the file, else uniform [0,1) entries drawn from the seed, redrawn
// until the projection on the relevant eigenvector exceeds 1e-6.
Matrix initial_state(const NetworkFile& f, std::uint64_t seed);

// -G for the dynamics of the file, optionally restricted to a reduced network.
Matrix generator_of(const NetworkFile& f, const DirectedNetwork* reduced = nullptr);
std::optional<Drive> drive_of(const NetworkFile& f, int dims);
// Limit of the simulated dynamics from x0.
Matrix limit_state(const NetworkFile& f, const DirectedNetwork* reduced, const Matrix& x0);

// Eigenvector that orders the agents for this kind of network: v1(L_B),
// v1(L_B^s), or v2(L).
EigenPair ordering_vector(const NetworkFile& f, const Tolerances& tol = {});

struct Selection {
  DirectedNetwork dnet;
  nlohmann::ordered_json report;
  bool verified = true;
};

// mode: san-fsn, san-ffn, fan-fsn, signed-san-fsn
Selection select_network(const NetworkFile& f, const std::string& mode);
// The default selection mode for the file's network kind.
std::string default_mode(const NetworkFile& f);

nlohmann::ordered_json analyze_report(const NetworkFile& f);

struct Comparison {
  nlohmann::ordered_json report;
  bool verified = true;
};
Comparison compare_report(const NetworkFile& f, std::uint64_t seed);

}  // namespace fsnlab
