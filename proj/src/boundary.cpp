#include "mkc/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace mkc {

namespace {

constexpr double pi = std::numbers::pi;

double sgn(double x) { return x < 0 ? -1.0 : 1.0; }

double majorana_scale(double t, double delta) {
  double disc = t * t - delta * delta;
  if (disc < -1e-14 * std::max(1.0, t * t)) throw precondition_error("Majorana points need |t| >= |delta|");
  return 2.0 * std::sqrt(std::max(0.0, disc));
}

// Root of the sgn(t delta) branch with non-negative imaginary part.
cd upper_root(const ParentParams& p) {
  DecayRoots r = decay_roots(p, p.t * p.delta < 0 ? -1 : +1);
  return r.roots[0].imag() >= r.roots[1].imag() ? r.roots[0] : r.roots[1];
}

}  // namespace

DecayRoots decay_roots(const ParentParams& p, int branch) {
  if (branch != 1 && branch != -1) throw precondition_error("decay root branch must be +1 or -1");
  const double a = p.t + branch * p.delta, b = p.mu, c = p.t - branch * p.delta;
  if (std::abs(a) < 1e-14 * std::max({1.0, std::abs(p.t), std::abs(p.delta)}))
    throw numerical_error("decay_roots: vanishing leading coefficient t " + std::string(branch > 0 ? "+" : "-") +
                          " delta");
  DecayRoots r;
  r.branch = branch;
  cd s = std::sqrt(cd(b * b - 4.0 * a * c, 0.0));
  // stable pairing: q = -(b + sign(b) s) / 2
  cd q = -0.5 * (b + (b >= 0 ? s : -s));
  if (std::abs(q) == 0.0) {
    r.roots = {cd(0.0), cd(0.0)};
  } else {
    r.roots = {q / a, c / q};
  }
  r.complex_pair = b * b - 4.0 * a * c < 0.0;
  for (int i = 0; i < 2; ++i) {
    r.modulus[i] = std::abs(r.roots[i]);
    r.angle[i] = std::arg(r.roots[i]);
  }
  return r;
}

int localized_branch(const ParentParams& p) {
  for (int b : {+1, -1}) {
    try {
      DecayRoots r = decay_roots(p, b);
      if (r.modulus[0] < 1.0 && r.modulus[1] < 1.0) return b;
    } catch (const numerical_error&) {
    }
  }
  return 0;
}

MajoranaPointSet kc_majorana_points(const ParentParams& p, int L) {
  if (L < 1) throw precondition_error("kc_majorana_points needs L >= 1");
  const double a = majorana_scale(p.t, p.delta);
  MajoranaPointSet s;
  for (int n = L; n >= 1; --n) {
    s.mu_values.push_back(a * std::cos(n * pi / (L + 1)));
    s.degeneracies.push_back(1);
    s.nullities.push_back(2);
    s.provenance.push_back("n=" + std::to_string(n) + "/(L+1)");
  }
  return s;
}

ChildSpec opposite_hopping_child(double t, double delta, double mu) {
  return ChildSpec{{-t, delta, mu}, {t, delta, mu}, Orientation::Parallel};
}

MajoranaPointSet mkc_parallel_majorana_points(double t, double delta, int L) {
  if (L < 3) throw precondition_error("mkc_parallel_majorana_points needs L >= 3");
  const double a = majorana_scale(t, delta);
  struct Entry {
    double mu;
    std::string tag;
  };
  std::vector<Entry> all;
  // theta = n pi / D with D = L + 2 (even L) or D = L + 1, L + 3 (odd L); theta = pi / 2 is excluded
  auto family = [&](int D) {
    for (int n = 1; n < D; ++n) {
      if (2 * n == D) continue;
      all.push_back({a * std::cos(n * pi / D), "n=" + std::to_string(n) + "/" + std::to_string(D)});
    }
  };
  if (L % 2 == 0) family(L + 2);
  else {
    family(L + 1);
    family(L + 3);
  }
  std::stable_sort(all.begin(), all.end(), [](const Entry& x, const Entry& y) { return x.mu < y.mu; });
  MajoranaPointSet s;
  for (const auto& e : all) {
    s.mu_values.push_back(e.mu);
    s.degeneracies.push_back(L % 2 == 0 ? 2 : 1);
    s.nullities.push_back(L % 2 == 0 ? 4 : 2);
    s.provenance.push_back(e.tag);
  }
  return s;
}

double quantization_residual(double R1, double R2, double theta1, double theta2, int N) {
  const int p = N + 2;
  auto side = [&](double th) {
    double den = R1 * R1 + R2 * R2 - 2.0 * R1 * R2 * std::cos(2.0 * th);
    if (std::abs(den) < 1e-14) throw numerical_error("quantization_residual: singular configuration");
    double num = std::pow(R1, 2 * p) + std::pow(R2, 2 * p) - 2.0 * std::pow(R1, p) * std::pow(R2, p) * std::cos(2.0 * p * th);
    return num / den;
  };
  return side(0.5 * (theta1 + theta2)) - side(0.5 * (theta1 - theta2));
}

double quantization_residual_at(const ChildSpec& spec, double mu, int N) {
  ParentParams a = spec.p1, b = spec.p2;
  a.mu = b.mu = mu;
  cd x1 = upper_root(a), x2 = upper_root(b);
  // with a real root pair both sides coincide identically and the condition carries no information
  if (x1.imag() <= 1e-12 * std::abs(x1) || x2.imag() <= 1e-12 * std::abs(x2))
    throw numerical_error("quantization_residual_at: real decay roots at mu = " + std::to_string(mu));
  return quantization_residual(std::abs(x1), std::abs(x2), std::arg(x1), std::arg(x2), N);
}

std::vector<QuantizationRoot> quantization_roots(const ChildSpec& spec, int N, double mu_lo, double mu_hi, int grid,
                                                 double xtol) {
  if (grid < 3 || !(mu_hi > mu_lo)) throw precondition_error("quantization_roots needs grid >= 3 and mu_hi > mu_lo");
  auto f = [&](double mu) {
    try {
      return quantization_residual_at(spec, mu, N);
    } catch (const numerical_error&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  std::vector<double> mu(grid), r(grid);
  double scale = 0.0;
  for (int i = 0; i < grid; ++i) {
    mu[i] = mu_lo + (mu_hi - mu_lo) * i / (grid - 1);
    r[i] = f(mu[i]);
    if (std::isfinite(r[i])) scale = std::max(scale, std::abs(r[i]));
  }
  std::vector<QuantizationRoot> out;
  auto push = [&](double m, bool tangential) {
    for (const auto& q : out)
      if (std::abs(q.mu - m) < 1e-9) return;
    out.push_back({m, f(m), tangential});
  };
  for (int i = 0; i + 1 < grid; ++i) {
    if (!std::isfinite(r[i]) || !std::isfinite(r[i + 1])) continue;
    if (r[i] == 0.0) {
      push(mu[i], false);
      continue;
    }
    if (r[i] * r[i + 1] < 0.0) {
      double a = mu[i], b = mu[i + 1], fa = r[i];
      while (b - a > xtol) {
        double m = 0.5 * (a + b), fm = f(m);
        if (!std::isfinite(fm)) break;
        if ((fm < 0) == (fa < 0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      push(0.5 * (a + b), false);
    }
  }
  // Touching roots: the residual has the form of a square near a root, so it does not
  // change sign there.  Bracket grid minima of |r| and refine by golden section.
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 1; i + 1 < grid; ++i) {
    if (!std::isfinite(r[i - 1]) || !std::isfinite(r[i]) || !std::isfinite(r[i + 1])) continue;
    double a0 = std::abs(r[i - 1]), a1 = std::abs(r[i]), a2 = std::abs(r[i + 1]);
    if (!(a1 <= a0 && a1 < a2)) continue;
    if (r[i - 1] * r[i] < 0.0 || r[i] * r[i + 1] < 0.0) continue;
    double a = mu[i - 1], b = mu[i + 1];
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = std::abs(f(c)), fd = std::abs(f(d));
    while (b - a > xtol) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = std::abs(f(c));
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = std::abs(f(d));
      }
    }
    double m = 0.5 * (a + b);
    double fm = std::abs(f(m));
    if (std::isfinite(fm) && fm <= 1e-9 * scale) push(m, true);
  }
  std::sort(out.begin(), out.end(), [](const QuantizationRoot& x, const QuantizationRoot& y) { return x.mu < y.mu; });
  return out;
}

AnalyticMode analytic_mmzm_wavefunction(double t, double delta, int N, int n, int which, Edge edge) {
  if (N < 3) throw precondition_error("analytic_mmzm_wavefunction needs N >= 3");
  if (which != 1 && which != 2) throw precondition_error("mode index must be 1 or 2");
  const int D = N % 2 == 0 ? N + 2 : (which == 1 ? N + 1 : N + 3);
  if (n < 1 || n >= D || 2 * n == D)
    throw precondition_error("mode number n = " + std::to_string(n) + " out of range for N = " + std::to_string(N));
  const double at = std::abs(t), ad = std::abs(delta);
  if (!(at > ad)) throw precondition_error("analytic modes need |t| > |delta|");
  AnalyticMode m;
  m.which = which;
  m.edge = edge;
  m.theta = n * pi / D;
  m.R = std::sqrt((at - ad) / (at + ad));
  m.mu = majorana_scale(t, delta) * std::cos(m.theta);
  m.branch = t * delta < 0 ? -1 : +1;
  m.profile.resize(N);
  const int shift = which == 1 ? 0 : 1;
  for (int l = 1; l <= N; ++l) {
    int j = l + shift;
    double v = (j % 2 == 0) ? 2.0 * std::pow(m.R, j) * std::sin(j * m.theta) : 0.0;
    m.profile(l - 1) = v;
  }
  if (edge == Edge::High) m.profile.reverseInPlace();
  m.profile.normalize();
  // chirality of the second component for t1 = -t, t2 = t, equal pairings
  const double tp = -t * t - delta * delta, dp = 2.0 * t * delta;
  const double eps = sgn(tp / dp);
  Eigen::Matrix4d v = bell_basis();
  const double side = edge == Edge::Low ? -1.0 : 1.0;
  m.internal = ((v.col(2) + side * eps * v.col(3)) / std::sqrt(2.0)).cast<cd>();
  return m;
}

Eigen::VectorXcd embed_mode(const AnalyticMode& m) {
  const Eigen::Index N = m.profile.size();
  Eigen::VectorXcd out(4 * N);
  for (Eigen::Index l = 0; l < N; ++l) out.segment<4>(4 * l) = m.profile(l) * m.internal;
  return out;
}

Eigen::VectorXd analytic_zero_density(double t, double delta, int N, int n, int which) {
  std::vector<int> kinds = N % 2 == 0 ? std::vector<int>{1, 2} : std::vector<int>{which};
  Eigen::VectorXd d = Eigen::VectorXd::Zero(N);
  int count = 0;
  for (int k : kinds)
    for (Edge e : {Edge::Low, Edge::High}) {
      d += analytic_mmzm_wavefunction(t, delta, N, n, k, e).profile.cwiseAbs2();
      ++count;
    }
  return d / count;
}

AnalyticMode semi_infinite_edge_profile(const ChildSpec& spec, int parent, Edge edge, int sites) {
  if (parent != 1 && parent != 2) throw precondition_error("parent index must be 1 or 2");
  if (sites < 1) throw precondition_error("semi_infinite_edge_profile needs sites >= 1");
  const ParentParams& p = parent == 1 ? spec.p1 : spec.p2;
  if (!is_topological(p)) throw precondition_error("edge profile requested for a non-topological parent");
  int b = localized_branch(p);
  if (b == 0) throw numerical_error("no localized decay-root branch");
  DecayRoots r = decay_roots(p, b);
  AnalyticMode m;
  m.branch = b;
  m.edge = edge;
  m.which = parent;
  m.direction = spec.orientation == Orientation::Perpendicular && parent == 2 ? 'y' : 'x';
  m.uniform_transverse = spec.orientation == Orientation::Perpendicular;
  m.R = std::max(r.modulus[0], r.modulus[1]);
  m.theta = std::abs(r.angle[0]);
  m.mu = p.mu;
  m.profile.resize(sites);
  const cd z1 = r.roots[0], z2 = r.roots[1];
  const bool repeated = std::abs(z1 - z2) < 1e-12;
  for (int x = 1; x <= sites; ++x) {
    cd v;
    if (repeated) v = x == 1 ? cd(1.0) : double(x) * std::pow(z1, x - 1);
    else v = std::pow(z1, x) - std::pow(z2, x);
    // a conjugate pair gives a purely imaginary difference
    m.profile(x - 1) = r.complex_pair ? v.imag() : v.real();
  }
  if (edge == Edge::High) m.profile.reverseInPlace();
  double nrm = m.profile.norm();
  if (nrm > 0) m.profile /= nrm;
  return m;
}

std::string to_string(EdgeSet e) {
  switch (e) {
    case EdgeSet::XEdges: return "x-edges";
    case EdgeSet::YEdges: return "y-edges";
    case EdgeSet::Perimeter: return "perimeter";
    case EdgeSet::None: return "none";
    case EdgeSet::Critical: return "critical";
  }
  return "none";
}

EdgeSet perp_edge_prediction(const ChildSpec& spec) {
  if (is_critical(spec.p1) || is_critical(spec.p2)) return EdgeSet::Critical;
  bool a = is_topological(spec.p1), b = is_topological(spec.p2);
  if (a && b) return EdgeSet::Perimeter;
  if (a) return EdgeSet::XEdges;
  if (b) return EdgeSet::YEdges;
  return EdgeSet::None;
}

double edge_weight(const ModeDensity& d, EdgeSet where) {
  if (d.empty()) return 0.0;
  double acc = 0.0;
  for (int y = 0; y < d.Ly; ++y)
    for (int x = 0; x < d.Lx; ++x) {
      bool xe = x == 0 || x == d.Lx - 1, ye = y == 0 || y == d.Ly - 1;
      bool in = where == EdgeSet::XEdges ? xe : where == EdgeSet::YEdges ? ye : where == EdgeSet::Perimeter && (xe || ye);
      if (in) acc += d.weight(x + d.Lx * y);
    }
  return acc / d.dimension;
}

MajoranaPointSet perp_obc_gapless_points(const ChildSpec& spec, int Lx, int Ly) {
  if (spec.orientation != Orientation::Perpendicular)
    throw precondition_error("perp_obc_gapless_points needs a perpendicular child");
  MajoranaPointSet s;
  auto family = [&](const ParentParams& p, int L, int other, const char* tag) {
    const double a = majorana_scale(p.t, p.delta);
    for (int n = L; n >= 1; --n) {
      s.mu_values.push_back(a * std::cos(n * pi / (L + 1)));
      s.degeneracies.push_back(other);
      s.nullities.push_back(4 * other);
      s.provenance.push_back(std::string(tag) + " n=" + std::to_string(n) + "/" + std::to_string(L + 1));
    }
  };
  family(spec.p1, Lx, Ly, "x");
  family(spec.p2, Ly, Lx, "y");
  std::vector<std::size_t> order(s.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s.mu_values[a] < s.mu_values[b]; });
  MajoranaPointSet sorted;
  for (auto i : order) {
    sorted.mu_values.push_back(s.mu_values[i]);
    sorted.degeneracies.push_back(s.degeneracies[i]);
    sorted.nullities.push_back(s.nullities[i]);
    sorted.provenance.push_back(s.provenance[i]);
  }
  return sorted;
}

ScalingFit energy_scaling_near_critical(ScalingClass cls, const std::vector<double>& delta_mu, double t, double delta) {
  ScalingFit fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (double dm : delta_mu) {
    if (std::abs(dm) > 0.1 * std::abs(t) * (1.0 + 1e-12))
      throw precondition_error("energy scaling grid must satisfy |delta_mu| <= 0.1 |t|");
    ChildSpec spec{{t, delta, -2.0 * t + dm}, {t, delta, -2.0 * t + dm}, Orientation::Parallel};
    if (cls == ScalingClass::OppositeParents) spec.p2.mu = 2.0 * t - dm;
    Eigen::SelfAdjointEigenSolver<Mat4> es(child_bloch(spec, 0.0), Eigen::EigenvaluesOnly);
    double e = es.eigenvalues().cwiseAbs().minCoeff();
    fit.delta_mu.push_back(dm);
    fit.energy.push_back(e);
    if (dm != 0.0 && e > 0.0) {
      double x = std::log(std::abs(dm)), y = std::log(e);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
  }
  if (n >= 2) fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return fit;
}

}  // namespace mkc
