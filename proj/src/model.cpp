#include "mkc/model.hpp"

#include <cmath>
#include <numbers>

#include "mkc/pauli.hpp"

namespace mkc {

namespace {

constexpr double pi = std::numbers::pi;

double opnorm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

Momentum as_pair(double k) { return Momentum(k, k); }

}  // namespace

double DVector::norm() const { return std::hypot(dy, dz); }

double reduce_momentum(double k) {
  double r = std::fmod(k + pi, 2.0 * pi);
  if (r < 0) r += 2.0 * pi;
  r -= pi;
  return r >= pi ? r - 2.0 * pi : r;
}

Mat2 d_matrix(const DVector& d) { return d.dy * pauli::sy() + d.dz * pauli::sz(); }

DVector parent_dvector(const ParentParams& p, double k) {
  k = reduce_momentum(k);
  return {2.0 * p.delta * std::sin(k), -(2.0 * p.t * std::cos(k) + p.mu)};
}

Mat2 parent_bloch(const ParentParams& p, double k) { return d_matrix(parent_dvector(p, k)); }

bool is_critical(const ParentParams& p, double tol) {
  double scale = std::max({1.0, std::abs(p.t), std::abs(p.mu)});
  return std::abs(std::abs(p.mu) - 2.0 * std::abs(p.t)) <= tol * scale || std::abs(p.delta) <= tol;
}

bool is_topological(const ParentParams& p, double tol) {
  return !is_critical(p, tol) && std::abs(p.mu) < 2.0 * std::abs(p.t);
}

Mat2 first_factor(const ParentParams& p, double k) { return parent_bloch(p, k); }

Mat2 second_factor(const ParentParams& p, double k) {
  k = reduce_momentum(k);
  return (2.0 * p.t * std::cos(k) + p.mu) * pauli::sz() + 2.0 * p.delta * std::sin(k) * pauli::sy();
}

Mat4 child_bloch(const ChildSpec& spec, const Momentum& k) {
  double kb = spec.orientation == Orientation::Parallel ? k[0] : k[1];
  return Eigen::kroneckerProduct(first_factor(spec.p1, k[0]), second_factor(spec.p2, kb)).eval();
}

Mat4 child_bloch(const ChildSpec& spec, double k) { return child_bloch(spec, as_pair(k)); }

DispersionPair dispersion_parallel(const ChildSpec& spec, double k) {
  if (spec.orientation != Orientation::Parallel)
    throw precondition_error("dispersion_parallel requires a parallel child");
  double e = parent_dvector(spec.p1, k).norm() * parent_dvector(spec.p2, k).norm();
  return {e, -e};
}

DispersionPair dispersion_perp(const ChildSpec& spec, double kx, double ky) {
  if (spec.orientation != Orientation::Perpendicular)
    throw precondition_error("dispersion_perp requires a perpendicular child");
  double e = parent_dvector(spec.p1, kx).norm() * parent_dvector(spec.p2, ky).norm();
  return {e, -e};
}

std::vector<GapClosure> gap_closures(const ChildSpec& spec, double tol) {
  std::vector<GapClosure> out;
  const ParentParams* ps[2] = {&spec.p1, &spec.p2};
  for (int i = 0; i < 2; ++i) {
    const ParentParams& p = *ps[i];
    std::string idx = std::to_string(i + 1);
    double scale = std::max({1.0, std::abs(p.t), std::abs(p.mu)});
    if (std::abs(p.mu + 2.0 * p.t) <= tol * scale)
      out.push_back({i + 1, 0.0, false, "mu" + idx + " = -2 t" + idx + " at k = 0"});
    if (std::abs(p.mu - 2.0 * p.t) <= tol * scale)
      out.push_back({i + 1, pi, false, "mu" + idx + " = +2 t" + idx + " at k = pi"});
    if (std::abs(p.delta) <= tol && p.t != 0.0 && std::abs(p.mu) <= 2.0 * std::abs(p.t) * (1.0 + tol))
      out.push_back({i + 1, std::acos(std::clamp(-p.mu / (2.0 * p.t), -1.0, 1.0)), true,
                     "delta" + idx + " = 0 with mu" + idx + " = -2 t" + idx + " cos k"});
  }
  return out;
}

SymmetryReport symmetry_check(const ChildSpec& spec, const std::vector<Momentum>& grid, double tol) {
  if (grid.empty()) throw precondition_error("symmetry_check needs a nonempty grid");
  using pauli::gamma;
  const Mat4 c1 = gamma('0', 'x');
  const Mat4 c2 = gamma('x', '0');
  const Mat4 u = gamma('x', 'x');
  SymmetryReport r;
  r.tol = tol;
  double scale = 0.0;
  for (const auto& k : grid) {
    Mat4 h = child_bloch(spec, k);
    Mat4 hm = child_bloch(spec, Momentum(-k));
    Mat4 hc = h.conjugate();
    scale = std::max(scale, opnorm(h));
    r.T = std::max(r.T, opnorm(hc - hm));
    r.P1 = std::max(r.P1, opnorm(c1 * hc * c1 + hm));
    r.C1 = std::max(r.C1, opnorm(c1 * h * c1 + h));
    r.P2 = std::max(r.P2, opnorm(c2 * hc * c2 + hm));
    r.C2 = std::max(r.C2, opnorm(c2 * h * c2 + h));
    r.U = std::max(r.U, opnorm(u * h - h * u));
  }
  if (scale > 0) {
    for (double* v : {&r.T, &r.P1, &r.C1, &r.P2, &r.C2, &r.U}) *v /= scale;
  }
  r.T_ok = r.T < tol;
  r.P1_ok = r.P1 < tol;
  r.C1_ok = r.C1 < tol;
  r.P2_ok = r.P2 < tol;
  r.C2_ok = r.C2 < tol;
  r.U_ok = r.U < tol;
  return r;
}

ComponentBloch component_bloch(const ChildSpec& spec, const Momentum& k, int which) {
  if (which != 1 && which != 2) throw precondition_error("component index must be 1 or 2");
  const double t1 = spec.p1.t, d1 = spec.p1.delta, m1 = spec.p1.mu;
  const double t2 = spec.p2.t, d2 = spec.p2.delta, m2 = spec.p2.mu;
  const double s = which == 1 ? 1.0 : -1.0;
  DVector d;
  if (spec.orientation == Orientation::Parallel) {
    double q = reduce_momentum(k[0]);
    d.dz = -(2.0 * (m1 * t2 + m2 * t1) * std::cos(q) + 2.0 * (t1 * t2 + s * d1 * d2) * std::cos(2.0 * q) +
             m1 * m2 + 2.0 * t1 * t2 - s * 2.0 * d1 * d2);
    d.dy = 2.0 * (m2 * d1 + s * m1 * d2) * std::sin(q) + 2.0 * (t2 * d1 + s * t1 * d2) * std::sin(2.0 * q);
  } else {
    double kx = reduce_momentum(k[0]);
    // component 2 is component 1 at (kx, -ky)
    double ky = s * reduce_momentum(k[1]);
    d.dz = -(2.0 * m2 * t1 * std::cos(kx) + 2.0 * m1 * t2 * std::cos(ky) + 2.0 * (t1 * t2 + d1 * d2) * std::cos(kx + ky) +
             2.0 * (t1 * t2 - d1 * d2) * std::cos(kx - ky) + m1 * m2);
    d.dy = 2.0 * m2 * d1 * std::sin(kx) + 2.0 * m1 * d2 * std::sin(ky) + 2.0 * (t2 * d1 + t1 * d2) * std::sin(kx + ky) +
           2.0 * (t2 * d1 - t1 * d2) * std::sin(kx - ky);
  }
  return {d, d_matrix(d)};
}

ComponentBloch component_bloch(const ChildSpec& spec, double k, int which) {
  return component_bloch(spec, as_pair(k), which);
}

Eigen::Matrix4d bell_basis() {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix4d v;
  v << r, 0, r, 0,
       0, -r, 0, r,
       0, r, 0, r,
       -r, 0, r, 0;
  return v;
}

Vec4 to_table_basis(const Vec4& psi) {
  Vec4 w = bell_basis().transpose().cast<cd>() * psi;
  return Vec4(w[0], w[2], w[3], w[1]);
}

Vec4 from_table_basis(const Vec4& c) {
  Vec4 w(c[0], c[3], c[1], c[2]);
  return bell_basis().cast<cd>() * w;
}

BlockDecomposition block_diagonalize(const ChildSpec& spec, const Momentum& k) {
  BlockDecomposition b;
  b.basis = bell_basis();
  Mat4 h = child_bloch(spec, k);
  Mat4 m = b.basis.transpose().cast<cd>() * h * b.basis.cast<cd>();
  b.block1 = m.topLeftCorner<2, 2>();
  b.block2 = m.bottomRightCorner<2, 2>();
  b.off_block = std::max(m.topRightCorner<2, 2>().norm(), m.bottomLeftCorner<2, 2>().norm());
  if (b.off_block > 1e-9 * std::max(1.0, h.norm()))
    throw numerical_error("block_diagonalize: off-block residual " + std::to_string(b.off_block));
  return b;
}

DiracExpansion dirac_expansion_parallel(const ChildSpec& spec, double tol) {
  if (spec.orientation != Orientation::Parallel)
    throw precondition_error("dirac_expansion_parallel requires a parallel child");
  DiracExpansion e;
  e.m1 = 2.0 * spec.p1.t + spec.p1.mu;
  e.m2 = 2.0 * spec.p2.t + spec.p2.mu;
  e.M = spec.p1.t * e.m2 + spec.p2.t * e.m1;
  e.velocity1 = 2.0 * std::abs(spec.p1.delta * e.m2);
  e.velocity2 = 2.0 * std::abs(spec.p2.delta * e.m1);
  // 2|d1 k| * 2|d2 k| from the two linear parent branches
  e.quadratic = 4.0 * std::abs(spec.p1.delta * spec.p2.delta);
  bool z1 = std::abs(e.m1) <= tol, z2 = std::abs(e.m2) <= tol;
  if (z1 && z2) e.regime = DiracRegime::Quadratic;
  else if (z1) e.regime = DiracRegime::LinearFirst;
  else if (z2) e.regime = DiracRegime::LinearSecond;
  return e;
}

double perp_expansion_energy(const ChildSpec& spec, double kx, double ky) {
  double m1 = 2.0 * spec.p1.t + spec.p1.mu, m2 = 2.0 * spec.p2.t + spec.p2.mu;
  double a = 2.0 * spec.p1.delta * kx, b = 2.0 * spec.p2.delta * ky;
  return std::sqrt(a * a + m1 * m1) * std::sqrt(b * b + m2 * m2);
}

Velocity group_velocity_perp(const ChildSpec& spec, double kx, double ky, double tol) {
  if (spec.orientation != Orientation::Perpendicular)
    throw precondition_error("group_velocity_perp requires a perpendicular child");
  double m1 = 2.0 * spec.p1.t + spec.p1.mu, m2 = 2.0 * spec.p2.t + spec.p2.mu;
  double d1 = spec.p1.delta, d2 = spec.p2.delta;
  double f1 = std::sqrt(4.0 * d1 * d1 * kx * kx + m1 * m1);
  double f2 = std::sqrt(4.0 * d2 * d2 * ky * ky + m2 * m2);
  Velocity out;
  // a vanishing factor is a kink; take the forward derivative there
  auto slope = [&](double d, double k, double f, bool& kink) {
    if (f <= tol) {
      kink = true;
      return 2.0 * std::abs(d);
    }
    return 4.0 * d * d * k / f;
  };
  bool kink_x = false, kink_y = false;
  out.v[0] = slope(d1, kx, f1, kink_x) * f2;
  out.v[1] = f1 * slope(d2, ky, f2, kink_y);
  out.one_sided = (kink_x && f2 > tol) || (kink_y && f1 > tol);
  return out;
}

std::string to_string(Orientation o) { return o == Orientation::Parallel ? "parallel" : "perpendicular"; }

}  // namespace mkc
