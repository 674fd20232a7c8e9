#include <algorithm>
#include <cmath>
#include <numbers>

#include <functional>

#include <unsupported/Eigen/Polynomials>

#include "mkc/boundary.hpp"
#include "mkc/pauli.hpp"

namespace mkc {

namespace {

constexpr double ln2 = std::numbers::ln2;

Eigen::MatrixXcd orthonormal_columns(const Eigen::MatrixXcd& a, double rel_tol = 1e-8) {
  if (a.cols() == 0) return Eigen::MatrixXcd(a.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > rel_tol * std::max(1.0, s(0))) ++r;
  return svd.matrixU().leftCols(r);
}

Eigen::MatrixXcd null_space(const Eigen::MatrixXcd& a, double rel_tol = 1e-8) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0.0;
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > rel_tol * std::max(1.0, smax)) ++r;
  return svd.matrixV().rightCols(a.cols() - r);
}

// z-scaled factor matrix: sum_r h_r z^{1-r} (low edge) or sum_r h_r z^{1+r} (high edge).
Eigen::Matrix2cd scaled_factor(const std::vector<HoppingTerm>& terms, cd z, Edge edge) {
  Eigen::Matrix2cd f = Eigen::Matrix2cd::Zero();
  for (const auto& h : terms) f += h.block * std::pow(z, edge == Edge::Low ? 1 - h.rx : 1 + h.rx);
  return f;
}

// Roots inside the unit disk of det of the z-scaled factor.
std::vector<cd> inside_roots(const std::vector<HoppingTerm>& terms, Edge edge) {
  const int n = 8;
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n);
  for (int j = 0; j < n; ++j) {
    cd z = std::polar(1.0, 2.0 * std::numbers::pi * j / n);
    cd d = scaled_factor(terms, z, edge).determinant();
    for (int m = 0; m < n; ++m) c(m) += d * std::pow(z, -m) / double(n);
  }
  double cmax = c.cwiseAbs().maxCoeff();
  if (cmax == 0.0) throw numerical_error("factor determinant vanishes identically");
  int hi = n - 1;
  while (hi > 0 && std::abs(c(hi)) < 1e-12 * cmax) --hi;
  int lo = 0;
  while (lo < hi && std::abs(c(lo)) < 1e-12 * cmax) ++lo;
  std::vector<cd> roots(static_cast<std::size_t>(lo), cd(0.0));
  if (hi > lo) {
    Eigen::PolynomialSolver<cd, Eigen::Dynamic> ps(c.segment(lo, hi - lo + 1));
    for (Eigen::Index i = 0; i < ps.roots().size(); ++i) roots.push_back(ps.roots()(i));
  }
  std::vector<cd> inside;
  for (cd z : roots)
    if (std::abs(z) < 1.0 - 1e-9) inside.push_back(z);
  return inside;
}

Eigen::MatrixXcd factor_null(const std::function<Mat2(double)>& factor, Edge edge) {
  auto terms = hopping_terms([&](double k, double) -> Eigen::MatrixXcd { return factor(k); }, 1, 0);
  auto roots = inside_roots(terms, edge);
  if (roots.empty()) throw numerical_error("no localized decay roots for a topological factor");
  Eigen::MatrixXcd stacked(2 * roots.size(), 2);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    Eigen::Matrix2cd f = scaled_factor(terms, roots[i], edge);
    double s = f.norm();
    stacked.middleRows<2>(2 * i) = s > 0 ? Eigen::Matrix2cd(f / s) : f;
  }
  Eigen::MatrixXcd n = null_space(stacked);
  if (n.cols() == 0) throw numerical_error("decay roots admit no common null vector");
  return n;
}

const StateLabel bell_labels[4] = {StateLabel::BellMinus00, StateLabel::BellMinus01, StateLabel::BellPlus00,
                             StateLabel::BellPlus01};
const StateLabel product_labels[4] = {StateLabel::Product00, StateLabel::Product01, StateLabel::Product10,
                                StateLabel::Product11};

Eigen::MatrixXcd project_out(const Eigen::MatrixXcd& basis, const Vec4& v) {
  Eigen::MatrixXcd p = basis * basis.adjoint() - v * v.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(p);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 0.5) keep.push_back(i);
  Eigen::MatrixXcd out(4, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(keep[c]);
  return out;
}

double objective(const Eigen::MatrixXcd& b) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < b.cols(); ++i) s += std::abs(entanglement_entropy(b.col(i)) - 0.5 * ln2);
  return s;
}

// Greedy pairwise rotations pushing each state's entropy toward 0 or ln 2.
Eigen::MatrixXcd extremal_rotation(Eigen::MatrixXcd b) {
  const int steps = 48;
  for (int sweep = 0; sweep < 20; ++sweep) {
    bool improved = false;
    for (Eigen::Index i = 0; i < b.cols(); ++i)
      for (Eigen::Index j = i + 1; j < b.cols(); ++j) {
        double best = objective(b);
        Eigen::MatrixXcd best_b = b;
        for (int a = 0; a <= steps; ++a)
          for (int p = 0; p < steps; ++p) {
            double th = 0.5 * std::numbers::pi * a / steps, ph = 2.0 * std::numbers::pi * p / steps;
            Eigen::MatrixXcd c = b;
            cd e = std::polar(1.0, ph);
            c.col(i) = std::cos(th) * b.col(i) + e * std::sin(th) * b.col(j);
            c.col(j) = -std::conj(e) * std::sin(th) * b.col(i) + std::cos(th) * b.col(j);
            double o = objective(c);
            if (o > best + 1e-12) {
              best = o;
              best_b = c;
            }
          }
        if (!best_b.isApprox(b)) {
          b = best_b;
          improved = true;
        }
      }
    if (!improved) break;
  }
  return b;
}

}  // namespace

std::string to_string(StateLabel l) {
  switch (l) {
    case StateLabel::BellPlus00: return "(|00>+|11>)/sqrt2";
    case StateLabel::BellPlus01: return "(|01>+|10>)/sqrt2";
    case StateLabel::BellMinus00: return "(|00>-|11>)/sqrt2";
    case StateLabel::BellMinus01: return "(|01>-|10>)/sqrt2";
    case StateLabel::Product00: return "|00>";
    case StateLabel::Product01: return "|01>";
    case StateLabel::Product10: return "|10>";
    case StateLabel::Product11: return "|11>";
    case StateLabel::ProductOther: return "product";
    case StateLabel::EntangledOther: return "maximally-entangled";
    case StateLabel::Unclassified: return "unclassified";
  }
  return "unclassified";
}

bool is_bell(StateLabel l) {
  return l == StateLabel::BellPlus00 || l == StateLabel::BellPlus01 || l == StateLabel::BellMinus00 ||
         l == StateLabel::BellMinus01;
}

bool is_product(StateLabel l) {
  return l == StateLabel::Product00 || l == StateLabel::Product01 || l == StateLabel::Product10 ||
         l == StateLabel::Product11;
}

Vec4 label_vector(StateLabel l) {
  const double r = 1.0 / std::sqrt(2.0);
  Vec4 v = Vec4::Zero();
  switch (l) {
    case StateLabel::BellPlus00: v << r, 0, 0, r; break;
    case StateLabel::BellPlus01: v << 0, r, r, 0; break;
    case StateLabel::BellMinus00: v << r, 0, 0, -r; break;
    case StateLabel::BellMinus01: v << 0, r, -r, 0; break;
    case StateLabel::Product00: v(0) = 1; break;
    case StateLabel::Product01: v(1) = 1; break;
    case StateLabel::Product10: v(2) = 1; break;
    case StateLabel::Product11: v(3) = 1; break;
    default: throw precondition_error("label has no fixed vector");
  }
  return v;
}

double entanglement_entropy(const Vec4& c) {
  double n = c.norm();
  if (n == 0.0) return 0.0;
  Eigen::Matrix2cd m;
  m << c(0), c(1), c(2), c(3);
  m /= n;
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m);
  double s = 0.0;
  for (int i = 0; i < 2; ++i) {
    double p = svd.singularValues()(i) * svd.singularValues()(i);
    if (p > 1e-300) s -= p * std::log(p);
  }
  return std::max(0.0, s);
}

MmzmContext mmzm_context(const ChildSpec& spec, BoundaryCondition bcx, BoundaryCondition bcy, Edge edge) {
  MmzmContext c;
  c.orientation = spec.orientation;
  c.topo1 = is_topological(spec.p1);
  c.topo2 = is_topological(spec.p2);
  auto sg = [](double x) { return x < 0 ? -1 : 1; };
  c.e1 = sg(spec.p1.t) * sg(spec.p1.delta);
  c.e2 = sg(spec.p2.t) * sg(spec.p2.delta);
  auto ratio = [](double a, double b) { return b == 0.0 ? std::numeric_limits<double>::infinity() : std::abs(a / b); };
  auto close = [](double a, double b) {
    if (std::isinf(a) || std::isinf(b)) return std::isinf(a) && std::isinf(b);
    return std::abs(a - b) <= 1e-9 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
  };
  c.proportional = close(ratio(spec.p1.mu, spec.p1.t), ratio(spec.p2.mu, spec.p2.t)) &&
                   close(ratio(spec.p1.t, spec.p1.delta), ratio(spec.p2.t, spec.p2.delta));
  c.bcx = bcx;
  c.bcy = bcy;
  c.edge = edge;
  return c;
}

std::vector<StateLabel> expected_table_states(const MmzmContext& ctx) {
  using L = StateLabel;
  // the far edge carries the opposite chirality
  const int e1 = ctx.edge == Edge::Low ? ctx.e1 : -ctx.e1;
  const int e2 = ctx.edge == Edge::Low ? ctx.e2 : -ctx.e2;
  const bool a = ctx.contributes1(), b = ctx.contributes2();
  std::vector<L> out;
  if (a && b) {
    if (ctx.proportional) {
      if (e1 > 0 && e2 > 0) out = {L::BellMinus00, L::Product01, L::Product10};
      else if (e1 > 0) out = {L::BellMinus01, L::Product00, L::Product11};
      else if (e2 > 0) out = {L::BellPlus01, L::Product00, L::Product11};
      else out = {L::BellPlus00, L::Product01, L::Product10};
    } else {
      if (e1 > 0 && e2 > 0) out = {L::BellMinus00, L::BellMinus01};
      else if (e1 > 0) out = {L::BellMinus01, L::BellPlus00};
      else if (e2 > 0) out = {L::BellPlus01, L::BellMinus00};
      else out = {L::BellPlus00, L::BellPlus01};
    }
  } else if (a) {
    out = e1 > 0 ? std::vector<L>{L::BellMinus00, L::BellMinus01} : std::vector<L>{L::BellPlus00, L::BellPlus01};
  } else if (b) {
    out = e2 > 0 ? std::vector<L>{L::BellMinus00, L::BellPlus01} : std::vector<L>{L::BellPlus00, L::BellMinus01};
  }
  std::sort(out.begin(), out.end());
  return out;
}

Eigen::MatrixXcd localized_null_vectors(const ChildSpec& spec, BoundaryCondition bcx, BoundaryCondition bcy,
                                        Edge edge) {
  MmzmContext ctx = mmzm_context(spec, bcx, bcy, edge);
  std::vector<Eigen::MatrixXcd> parts;
  if (ctx.contributes1()) {
    Eigen::MatrixXcd n = factor_null([&](double k) { return first_factor(spec.p1, k); }, edge);
    parts.push_back(Eigen::kroneckerProduct(n, Eigen::Matrix2cd::Identity()).eval());
  }
  if (ctx.contributes2()) {
    Eigen::MatrixXcd n = factor_null([&](double k) { return second_factor(spec.p2, k); }, edge);
    parts.push_back(Eigen::kroneckerProduct(Eigen::Matrix2cd::Identity(), n).eval());
  }
  Eigen::Index cols = 0;
  for (const auto& p : parts) cols += p.cols();
  Eigen::MatrixXcd all(4, cols);
  Eigen::Index c = 0;
  for (const auto& p : parts) {
    all.middleCols(c, p.cols()) = p;
    c += p.cols();
  }
  return orthonormal_columns(all);
}

template <class Scalar>
Eigen::MatrixXcd edge_internal_vectors(const SpectrumResult<Scalar>& s, char axis, Edge edge, double tol) {
  if (axis != 'x' && axis != 'y') throw precondition_error("edge axis must be 'x' or 'y'");
  Eigen::MatrixXcd z = zero_subspace(s, tol).template cast<cd>();
  const int d = s.internal_dim, ns = s.Lx * s.Ly;
  if (z.cols() == 0) return Eigen::MatrixXcd(d, 0);
  auto on_edge = [&](int site) {
    int x = site % s.Lx, y = site / s.Lx;
    int coord = axis == 'x' ? x : y, len = axis == 'x' ? s.Lx : s.Ly;
    return edge == Edge::Low ? 2 * coord < len : 2 * coord >= len;
  };
  Eigen::VectorXd mask(z.rows());
  for (int site = 0; site < ns; ++site) mask.segment(site * d, d).setConstant(on_edge(site) ? 1.0 : 0.0);
  Eigen::MatrixXcd m = z.adjoint() * mask.asDiagonal() * z;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 0.5) keep.push_back(i);
  Eigen::MatrixXcd local(z.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) local.col(static_cast<Eigen::Index>(c)) = z * es.eigenvectors().col(keep[c]);
  if (local.cols() == 0) return Eigen::MatrixXcd(d, 0);
  int best = 0;
  double wmax = -1.0;
  for (int site = 0; site < ns; ++site) {
    double w = local.middleRows(site * d, d).squaredNorm();
    if (w > wmax + 1e-12) {
      wmax = w;
      best = site;
    }
  }
  return orthonormal_columns(local.middleRows(best * d, d), 1e-6);
}

template Eigen::MatrixXcd edge_internal_vectors(const SpectrumResult<double>&, char, Edge, double);
template Eigen::MatrixXcd edge_internal_vectors(const SpectrumResult<cd>&, char, Edge, double);

MmzmClass mmzm_classify(const Eigen::MatrixXcd& subspace, const MmzmContext& ctx) {
  if (subspace.rows() != 4) throw precondition_error("mmzm_classify expects internal 4-vectors");
  Eigen::MatrixXcd basis = orthonormal_columns(subspace);
  if (basis.cols() == 0) throw precondition_error("mmzm_classify needs a nonempty subspace");
  for (Eigen::Index i = 0; i < basis.cols(); ++i) basis.col(i) = to_table_basis(basis.col(i));

  MmzmClass out;
  auto take = [&](const StateLabel* labels) {
    for (int i = 0; i < 4 && basis.cols() > 0; ++i) {
      Vec4 v = label_vector(labels[i]);
      double ov = (basis.adjoint() * v).squaredNorm();
      if (ov > 0.999) {
        out.states.push_back({labels[i], v, entanglement_entropy(v), ov});
        basis = project_out(basis, v);
      }
    }
  };
  // computational states first: a span containing them is written with them
  take(product_labels);
  take(bell_labels);
  if (basis.cols() > 0) {
    basis = extremal_rotation(basis);
    for (Eigen::Index i = 0; i < basis.cols(); ++i) {
      Vec4 v = basis.col(i);
      double s = entanglement_entropy(v);
      StateLabel l = s < 1e-6 ? StateLabel::ProductOther
                     : s > ln2 - 1e-6 ? StateLabel::EntangledOther
                                      : StateLabel::Unclassified;
      out.states.push_back({l, v, s, 1.0});
    }
  }
  out.expected = expected_table_states(ctx);
  std::vector<StateLabel> got;
  for (const auto& s : out.states) got.push_back(s.label);
  std::sort(got.begin(), got.end());
  out.matches_table = got == out.expected;
  out.dichotomy = std::all_of(out.states.begin(), out.states.end(), [](const ClassifiedState& s) {
    return s.entropy < 1e-6 || std::abs(s.entropy - ln2) < 1e-6;
  });
  return out;
}

double subspace_excess(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd qa = orthonormal_columns(a), qb = orthonormal_columns(b);
  if (qa.cols() == 0) return 0.0;
  Eigen::MatrixXcd rest = qa - qb * (qb.adjoint() * qa);
  return rest.cols() ? Eigen::JacobiSVD<Eigen::MatrixXcd>(rest).singularValues()(0) : 0.0;
}

}  // namespace mkc
