#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mkc/lattice.hpp"

namespace mkc {

// tau^a sigma^b for the child; a parent channel uses a alone and b = 0.
struct Channel {
  char a = '0';
  char b = 0;
  bool parent() const { return b == 0; }
  std::string label() const;
};

Channel parse_channel(const std::string& s);
std::vector<Channel> all_channels(bool parent);

Eigen::MatrixXcd channel_matrix(const Channel& c);
bool channel_is_real(const Channel& c);

struct DisorderSpec {
  Channel channel;
  double W = 0.0;
  int realizations = 1;
  std::uint64_t seed = 42;
};

// Uniform on [-1, 1), a pure function of the key.
double disorder_draw(std::uint64_t seed, std::uint64_t realization, std::uint64_t site);

// H + sum_s V_s Gamma at site s, V_s = W * disorder_draw(seed, realization, s).  A real input
// accepts only real channels.
template <class Scalar>
RealSpaceHamiltonian<Scalar> apply_onsite_disorder(const RealSpaceHamiltonian<Scalar>& h, const DisorderSpec& spec,
                                                   int realization);

struct RobustnessEntry {
  std::string channel;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double W = 0.0;
  int nominal_zero_modes = 0;
  double displacement = 0.0;  // max over realizations of the largest |E| among nominal zero modes
  double threshold = 0.0;
  bool robust = false;
};

struct RobustnessReport {
  std::vector<RobustnessEntry> entries;
  const RobustnessEntry* find(const std::string& channel, double W) const;
};

struct RobustnessSweep {
  std::vector<Channel> channels;
  std::vector<double> amplitudes{0.2};
  int realizations = 50;
  std::uint64_t seed = 42;
  std::vector<double> mu_grid;  // empty: the model's own chemical potentials
  MuLink link = MuLink::Equal;
  int L = 80;
  double threshold = 1e-6;  // relative to clean bandwidth
};

RobustnessReport robustness_sweep(const ChainModel& model, const RobustnessSweep& sweep, unsigned threads = 1);

}  // namespace mkc
