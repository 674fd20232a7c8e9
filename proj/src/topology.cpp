#include "mkc/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mkc/parallel.hpp"

namespace mkc {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(10);
  o << v;
  return o.str();
}

}  // namespace

std::vector<OccupiedFrame> occupied_path(const BlochFunction& bloch, int R, double gap_tol) {
  if (R < 2) throw precondition_error("occupied_path needs R >= 2");
  std::vector<OccupiedFrame> path;
  path.reserve(static_cast<std::size_t>(R));
  for (int i = 0; i < R; ++i) {
    double k = two_pi * i / R;
    Eigen::MatrixXcd h = bloch(k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const int n = static_cast<int>(h.rows()), m = n / 2;
    const auto& e = es.eigenvalues();
    double scale = std::max(1.0, e.cwiseAbs().maxCoeff());
    if (e(m) - e(m - 1) < gap_tol * scale)
      throw numerical_error("gap closes on the Wilson-loop path at k = " + fmt(k));
    path.push_back({k, es.eigenvectors().leftCols(m)});
  }
  return path;
}

Eigen::MatrixXcd wilson_loop(const std::vector<OccupiedFrame>& path, double rank_tol) {
  if (path.empty()) throw precondition_error("wilson_loop needs a nonempty path");
  const std::size_t R = path.size();
  const Eigen::Index m = path[0].states.cols();
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Identity(m, m);
  // <u(k0)| P(k_{R-1}) ... P(k_1) |u(k0)>, assembled from neighbour overlaps
  for (std::size_t i = R; i-- > 0;) {
    const auto& next = path[(i + 1) % R].states;
    Eigen::MatrixXcd ov = next.adjoint() * path[i].states;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(ov);
    if (svd.singularValues()(m - 1) < rank_tol)
      throw numerical_error("rank-deficient projector on the Wilson-loop path at k = " + fmt(path[i].k));
    w = w * ov;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> polar(w, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return polar.matrixU() * polar.matrixV().adjoint();
}

std::vector<double> wannier_from_wilson(const Eigen::MatrixXcd& w) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(w, false);
  std::vector<double> nu;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double v = std::arg(es.eigenvalues()(i)) / two_pi;
    v -= std::floor(v);
    if (v >= 1.0) v = 0.0;
    nu.push_back(v);
  }
  std::sort(nu.begin(), nu.end());
  return nu;
}

double wannier_distance(double a, double b) {
  double d = std::abs(a - b);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

namespace {

WannierSpectrum centers(const BlochFunction& f, int R, std::string path) {
  WannierSpectrum s;
  s.centers = wannier_from_wilson(wilson_loop(occupied_path(f, R)));
  s.filling = static_cast<int>(s.centers.size());
  s.path = std::move(path);
  return s;
}

}  // namespace

WannierSpectrum wannier_centers_parent(const ParentParams& p, int R) {
  return centers([&](double k) -> Eigen::MatrixXcd { return parent_bloch(p, k); }, R, "k");
}

WannierSpectrum wannier_centers_parallel(const ChildSpec& spec, int R) {
  if (spec.orientation != Orientation::Parallel) throw precondition_error("wannier_centers_parallel needs a parallel child");
  return centers([&](double k) -> Eigen::MatrixXcd { return child_bloch(spec, k); }, R, "k");
}

WannierSpectrum wannier_centers_perp(const ChildSpec& spec, char direction, double fixed, int R) {
  if (spec.orientation != Orientation::Perpendicular)
    throw precondition_error("wannier_centers_perp needs a perpendicular child");
  if (direction == 'x')
    return centers([&](double k) -> Eigen::MatrixXcd { return child_bloch(spec, Momentum(k, fixed)); }, R,
                   "kx at ky = " + fmt(fixed));
  if (direction == 'y')
    return centers([&](double k) -> Eigen::MatrixXcd { return child_bloch(spec, Momentum(fixed, k)); }, R,
                   "ky at kx = " + fmt(fixed));
  throw precondition_error("loop direction must be 'x' or 'y'");
}

WindingCurve sample_curve(const std::function<DVector(double)>& d, int samples) {
  if (samples < 4) throw precondition_error("winding curve needs at least 4 samples");
  WindingCurve c;
  c.samples.reserve(static_cast<std::size_t>(samples) + 1);
  for (int i = 0; i <= samples; ++i) c.samples.push_back(d(two_pi * i / samples));
  double scale = 0.0;
  for (const auto& s : c.samples) scale = std::max(scale, s.norm());
  const auto& a = c.samples.front();
  const auto& b = c.samples.back();
  c.closed = std::hypot(a.dy - b.dy, a.dz - b.dz) <= 1e-9 * std::max(1.0, scale);
  return c;
}

WindingResult winding_number(const WindingCurve& curve, double critical_tol) {
  if (curve.samples.size() < 2 || !curve.closed) throw precondition_error("winding curve is not closed");
  WindingResult r;
  double dmin = curve.samples[0].norm(), dmax = dmin;
  for (const auto& s : curve.samples) {
    dmin = std::min(dmin, s.norm());
    dmax = std::max(dmax, s.norm());
  }
  r.origin_distance = dmin;
  if (dmax == 0.0 || dmin < critical_tol * dmax)
    throw numerical_error("critical winding curve: origin distance " + fmt(dmin));
  double acc = 0.0;
  double prev = std::atan2(curve.samples[0].dz, curve.samples[0].dy);
  for (std::size_t i = 1; i < curve.samples.size(); ++i) {
    double cur = std::atan2(curve.samples[i].dz, curve.samples[i].dy);
    double step = cur - prev;
    step -= two_pi * std::ceil((step - std::numbers::pi) / two_pi);
    acc += step;
    prev = cur;
  }
  r.raw = acc / two_pi;
  r.w = static_cast<int>(std::lround(r.raw));
  if (std::abs(r.raw - r.w) >= 0.01) throw numerical_error("winding not resolved: raw value " + fmt(r.raw));
  return r;
}

ComponentWindings component_winding_parallel(const ChildSpec& spec, int samples) {
  if (spec.orientation != Orientation::Parallel)
    throw precondition_error("component_winding_parallel needs a parallel child");
  ComponentWindings out;
  out.w1 = winding_number(sample_curve([&](double k) { return component_bloch(spec, k, 1).d; }, samples));
  out.w2 = winding_number(sample_curve([&](double k) { return component_bloch(spec, k, 2).d; }, samples));
  return out;
}

bool PerpWindingFamily::components_agree() const {
  for (std::size_t i = 0; i < row_w1.size(); ++i)
    if (row_w1[i] != row_w2[i]) return false;
  for (std::size_t i = 0; i < col_w1.size(); ++i)
    if (std::abs(col_w1[i]) != std::abs(col_w2[i])) return false;
  return true;
}

PerpWindingFamily component_winding_perp(const ChildSpec& spec, int Lx, int Ly, int samples, unsigned threads) {
  if (spec.orientation != Orientation::Perpendicular)
    throw precondition_error("component_winding_perp needs a perpendicular child");
  if (Lx < 1 || Ly < 1) throw precondition_error("component_winding_perp needs positive sizes");
  struct Job {
    bool row;
    double fixed;
  };
  std::vector<Job> jobs;
  for (int m = 0; m < Ly; ++m) jobs.push_back({true, two_pi * m / Ly});
  for (int m = 0; m < Lx; ++m) jobs.push_back({false, two_pi * m / Lx});
  auto res = parallel_map(jobs.size(), threads, [&](std::size_t i) {
    const Job& j = jobs[i];
    auto curve = [&](int which) {
      auto c = sample_curve(
          [&](double k) {
            Momentum q = j.row ? Momentum(k, j.fixed) : Momentum(j.fixed, k);
            return component_bloch(spec, q, which).d;
          },
          samples);
      try {
        return winding_number(c);
      } catch (const numerical_error& e) {
        throw numerical_error(std::string(e.what()) + (j.row ? " (row, ky = " : " (column, kx = ") + fmt(j.fixed) +
                              ", component " + std::to_string(which) + ")");
      }
    };
    return ComponentWindings{curve(1), curve(2)};
  });
  PerpWindingFamily f;
  f.min_origin_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    f.min_origin_distance = std::min({f.min_origin_distance, res[i].w1.origin_distance, res[i].w2.origin_distance});
    if (jobs[i].row) {
      f.row_ky.push_back(jobs[i].fixed);
      f.row_w1.push_back(res[i].w1.w);
      f.row_w2.push_back(res[i].w2.w);
    } else {
      f.col_kx.push_back(jobs[i].fixed);
      f.col_w1.push_back(res[i].w1.w);
      f.col_w2.push_back(res[i].w2.w);
    }
  }
  return f;
}

double winding_locus_check(const ChildSpec& spec, double ky, int samples) {
  if (spec.orientation != Orientation::Perpendicular)
    throw precondition_error("winding_locus_check needs a perpendicular child");
  const double t1 = spec.p1.t, mu1 = spec.p1.mu;
  if (std::abs(t1 - spec.p1.delta) > 1e-12 * std::max(1.0, std::abs(t1)))
    throw precondition_error("winding_locus_check requires t1 = delta1");
  const double M2 = spec.p2.mu + 2.0 * spec.p2.t * std::cos(ky);
  const double R2 = 2.0 * spec.p2.delta * std::sin(ky);
  const double amp = std::hypot(M2, R2);
  if (amp < 1e-12) throw numerical_error("winding_locus_check: M2 = R2 = 0, modulation angle undefined");
  const double th = std::atan2(R2, M2), c = std::cos(th), s = std::sin(th);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    DVector d = component_bloch(spec, Momentum(two_pi * i / samples, ky), 1).d;
    double a = c * d.dy + s * d.dz;
    double b = c * d.dz - s * d.dy + mu1 * amp;
    double rhs = 2.0 * t1 * amp;
    worst = std::max(worst, std::abs(a * a + b * b - rhs * rhs));
  }
  return worst;
}

}  // namespace mkc
