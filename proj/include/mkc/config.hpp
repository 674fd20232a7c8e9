#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mkc/boundary.hpp"
#include "mkc/lattice.hpp"

namespace mkc {

struct RunConfig {
  // [model]
  std::string model = "parent";  // parent | mkc-parallel | mkc-perpendicular
  ParentParams p1;
  ParentParams p2;

  // [lattice]
  int L = 80;
  int Lx = 20;
  int Ly = 50;
  std::string bc = "open";
  std::string bcx = "open";
  std::string bcy = "open";

  // [task]
  std::string task;
  int R = 1001;
  int samples = 4096;
  double zero_tol = 1e-8;  // times the spectral range
  std::uint64_t seed = 42;
  int threads = 0;
  std::vector<double> mu_grid;   // sweep-mu, disorder; empty means the model's own mu
  std::string mu_link = "equal"; // equal | opposite | fixed
  std::vector<double> mu2_grid;  // wannier: second axis of a (mu1, mu2) grid
  std::vector<int> lengths;      // sweep-length
  int n_modes = 6;
  int N = 6;                     // quantization chain length
  int quant_grid = 2001;
  std::string edge = "low";      // classify
  std::string channels = "all";  // disorder
  std::vector<double> W{0.2};
  int realizations = 50;
  int k_points = 64;             // symmetry-check
  std::vector<double> kx{0.01};  // dirac (perpendicular velocity probes)
  std::vector<double> ky{0.02};

  // [output]
  std::string out_path;
  std::string format = "csv";

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Every field written explicitly, defaults included; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& c);

// (section, key, value) triples in serialization order.
struct ConfigEntry {
  std::string section;
  std::string key;
  std::string value;
};
std::vector<ConfigEntry> config_entries(const RunConfig& c);

ChainModel model_of(const RunConfig& c);
BoundaryCondition parse_bc(const std::string& s, const std::string& key);
MuLink parse_link(const std::string& s);
Edge parse_edge(const std::string& s);

std::string format_double(double v);  // shortest round-trip form

}  // namespace mkc
