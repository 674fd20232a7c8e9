#include "mkc/disorder.hpp"

#include <algorithm>
#include <cmath>

#include "mkc/parallel.hpp"
#include "mkc/pauli.hpp"

namespace mkc {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool valid(char c) { return c == '0' || c == 'x' || c == 'y' || c == 'z'; }

}  // namespace

std::string Channel::label() const {
  if (parent()) return std::string("sigma^") + a;
  return std::string("tau^") + a + "sigma^" + b;
}

Channel parse_channel(const std::string& s) {
  if (s.size() == 1 && valid(s[0])) return {s[0], 0};
  if (s.size() == 2 && valid(s[0]) && valid(s[1])) return {s[0], s[1]};
  throw config_error("invalid disorder channel '" + s + "'");
}

std::vector<Channel> all_channels(bool parent) {
  const char labels[4] = {'0', 'x', 'y', 'z'};
  std::vector<Channel> out;
  if (parent) {
    for (char c : {'x', 'y', 'z'}) out.push_back({c, 0});
    return out;
  }
  for (char a : labels)
    for (char b : labels) out.push_back({a, b});
  return out;
}

Eigen::MatrixXcd channel_matrix(const Channel& c) {
  if (c.parent()) return pauli::by_label(c.a);
  return pauli::gamma(c.a, c.b);
}

bool channel_is_real(const Channel& c) { return (int(c.a == 'y') + int(c.b == 'y')) % 2 == 0; }

double disorder_draw(std::uint64_t seed, std::uint64_t realization, std::uint64_t site) {
  std::uint64_t x = mix(seed);
  x = mix(x ^ realization);
  x = mix(x ^ (site * 0xd1342543de82ef95ULL));
  return 2.0 * (static_cast<double>(x >> 11) * 0x1.0p-53) - 1.0;
}

template <class Scalar>
RealSpaceHamiltonian<Scalar> apply_onsite_disorder(const RealSpaceHamiltonian<Scalar>& h, const DisorderSpec& spec,
                                                   int realization) {
  Eigen::MatrixXcd g = channel_matrix(spec.channel);
  if (g.rows() != h.internal_dim)
    throw precondition_error("disorder channel " + spec.channel.label() + " does not match internal dimension " +
                             std::to_string(h.internal_dim));
  if (spec.W < 0) throw precondition_error("disorder amplitude must be non-negative");
  RealSpaceHamiltonian<Scalar> out = h;
  out.frame.reset();
  MatX<Scalar> gs;
  if constexpr (std::is_same_v<Scalar, double>) {
    if (!channel_is_real(spec.channel))
      throw precondition_error("channel " + spec.channel.label() + " is complex; use a complex Hamiltonian");
    gs = g.real();
  } else {
    gs = g;
  }
  if (spec.W == 0.0) return out;
  const int d = h.internal_dim;
  for (int s = 0; s < h.sites(); ++s) {
    double v = spec.W * disorder_draw(spec.seed, static_cast<std::uint64_t>(realization), static_cast<std::uint64_t>(s));
    out.matrix.block(s * d, s * d, d, d) += v * gs;
  }
  return out;
}

template RealSpaceHamiltonian<double> apply_onsite_disorder(const RealSpaceHamiltonian<double>&, const DisorderSpec&, int);
template RealSpaceHamiltonian<cd> apply_onsite_disorder(const RealSpaceHamiltonian<cd>&, const DisorderSpec&, int);

const RobustnessEntry* RobustnessReport::find(const std::string& channel, double W) const {
  for (const auto& e : entries)
    if (e.channel == channel && e.W == W) return &e;
  return nullptr;
}

namespace {

// largest |E| among the n smallest-|E| eigenvalues
double displaced(const Eigen::VectorXd& e, int n) {
  std::vector<double> a(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) a[i] = std::abs(e(i));
  std::nth_element(a.begin(), a.begin() + (n - 1), a.end());
  return *std::max_element(a.begin(), a.begin() + n);
}

}  // namespace

RobustnessReport robustness_sweep(const ChainModel& model, const RobustnessSweep& sweep, unsigned threads) {
  if (sweep.realizations < 1) throw precondition_error("robustness_sweep needs at least one realization");
  const bool parent = std::holds_alternative<ParentParams>(model);
  std::vector<ChainModel> points;
  if (sweep.mu_grid.empty()) points.push_back(model);
  for (double m : sweep.mu_grid) points.push_back(with_mu(model, m, sweep.link));

  RobustnessReport report;
  for (const auto& pt : points) {
    RealHamiltonian clean = build_lattice(pt, SlabLattice{sweep.L, 1, BoundaryCondition::Open, BoundaryCondition::Open});
    Eigen::VectorXd e0 = diagonalize(clean, false).eigenvalues;
    const double band = e0(e0.size() - 1) - e0(0);
    const double ztol = default_zero_tol(band);
    int n0 = 0;
    for (Eigen::Index i = 0; i < e0.size(); ++i)
      if (std::abs(e0(i)) < ztol) ++n0;
    double mu1, mu2;
    if (parent) mu1 = mu2 = std::get<ParentParams>(pt).mu;
    else {
      mu1 = std::get<ChildSpec>(pt).p1.mu;
      mu2 = std::get<ChildSpec>(pt).p2.mu;
    }
    ComplexHamiltonian clean_c{clean.matrix.cast<cd>(), clean.internal_dim, clean.Lx, clean.Ly, std::nullopt};
    for (const auto& ch : sweep.channels) {
      if (ch.parent() != parent) throw precondition_error("channel " + ch.label() + " does not fit the model");
      for (double W : sweep.amplitudes) {
        RobustnessEntry entry{ch.label(), mu1, mu2, W, n0, 0.0, sweep.threshold * band, false};
        if (n0 > 0) {
          DisorderSpec ds{ch, W, sweep.realizations, sweep.seed};
          auto shifts = parallel_map(static_cast<std::size_t>(sweep.realizations), threads, [&](std::size_t r) {
            int ri = static_cast<int>(r);
            Eigen::VectorXd e = channel_is_real(ch)
                                    ? diagonalize(apply_onsite_disorder(clean, ds, ri), false).eigenvalues
                                    : diagonalize(apply_onsite_disorder(clean_c, ds, ri), false).eigenvalues;
            return displaced(e, n0);
          });
          entry.displacement = *std::max_element(shifts.begin(), shifts.end());
          entry.robust = entry.displacement < entry.threshold;
        }
        report.entries.push_back(entry);
      }
    }
  }
  return report;
}

}  // namespace mkc
