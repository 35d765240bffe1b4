#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dnizk/coloring.hpp"
#include "dnizk/engine.hpp"
#include "dnizk/graph.hpp"
#include "dnizk/triangle.hpp"
#include "dnizk/universal.hpp"

namespace dnizk::experiment {

// Invalid experiment description; the command line maps this to exit 2.
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Spec {
  std::string command;
  std::string protocol = "coloring";
  std::string graph = "planted";  // generator name, or file:<path>
  size_t n = 8;
  uint64_t colors = 3;
  uint64_t alpha = 3;
  std::optional<double> soundness;
  std::optional<size_t> equality_t;
  uint64_t trials = 1;
  uint64_t seed = 1;
  bool exact = false;
  std::string id_mode = "ids";
  bool private_randomness = false;
  bool improved = false;
  std::optional<uint64_t> q_override;
  std::string strategy = "honest";
  // sweep grids; empty falls back to the scalar field
  std::vector<size_t> n_list;
  std::vector<uint64_t> alpha_list;
  std::vector<uint64_t> colors_list;
  std::vector<double> soundness_list;
};

struct Instance {
  graph::Configuration config;
  std::optional<std::vector<uint64_t>> coloring;  // witness when the generator has one
};

Instance build_instance(const Spec& spec);

// Each returns the report text (JSON; sweep returns CSV).
std::string cmd_run(const Spec& spec);
std::string cmd_zk_test(const Spec& spec);
std::string cmd_sweep(const Spec& spec);
std::string cmd_gen_graph(const Spec& spec);

// ------------------------------------------------------------------
// distribution comparison of real versus simulated views

// A low-dimensional slice of the received tuple: the listed
// (port, word) coordinates, histogrammed jointly.
struct Projection {
  std::string name;
  std::vector<std::pair<size_t, size_t>> coords;
};

struct DistributionReport {
  uint64_t violations = 0;        // simulated views failing the verifier identities
  double min_uniform_p = 1.0;     // per-coordinate uniformity, real and simulated
  double min_two_sample_p = 1.0;  // real against simulated, per coordinate
  std::vector<std::pair<std::string, double>> tv;  // projection -> estimated distance

  double max_tv() const;
};

DistributionReport zk_coloring(const coloring::ColoringParams& pr,
                               const graph::Configuration& g,
                               const std::vector<uint64_t>& witness, size_t target,
                               uint64_t chi2_samples, uint64_t tv_samples,
                               const std::vector<Projection>& projections,
                               uint64_t seed);

DistributionReport zk_triangle(const triangle::TriangleParams& pr,
                               const graph::Configuration& g, size_t target,
                               uint64_t chi2_samples, uint64_t tv_samples,
                               const std::vector<Projection>& projections,
                               uint64_t seed);

// Per-port pairs plus cross-port pairs, kept small enough that the
// histogram noise floor stays well under the distance threshold.
std::vector<Projection> default_projections(size_t ports, size_t words_per_port,
                                            uint64_t q);

// ------------------------------------------------------------------
// coalition structure checks for the compiled protocol

struct CoalitionCheck {
  std::vector<size_t> members;  // node indices
  bool views_pass = false;
  bool openings_match = false;
  bool log_clean = false;
  bool ok() const { return views_pass && openings_match && log_clean; }
};

std::vector<CoalitionCheck> universal_coalition_checks(
    const graph::Configuration& g, const universal::UniversalParams& pr,
    const universal::GraphProperty& property,
    const std::vector<std::vector<size_t>>& coalitions, uint64_t seed);

}  // namespace dnizk::experiment
