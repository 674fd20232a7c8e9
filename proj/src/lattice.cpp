#include "mkc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "mkc/parallel.hpp"

namespace mkc {

namespace {

constexpr double pi = std::numbers::pi;

int wrap(int i, int n) { return ((i % n) + n) % n; }

RealHamiltonian assemble(const std::vector<HoppingTerm>& terms, int d, int Lx, int Ly, BoundaryCondition bcx,
                         BoundaryCondition bcy) {
  RealHamiltonian h;
  h.internal_dim = d;
  h.Lx = Lx;
  h.Ly = Ly;
  const int n = Lx * Ly * d;
  h.matrix = Eigen::MatrixXd::Zero(n, n);
  for (const auto& term : terms) {
    if (term.block.imag().cwiseAbs().maxCoeff() > 1e-12)
      throw numerical_error("hopping block has an imaginary part; real-space model is not real");
    Eigen::MatrixXd blk = term.block.real();
    for (int y = 0; y < Ly; ++y) {
      for (int x = 0; x < Lx; ++x) {
        int tx = x + term.rx, ty = y + term.ry;
        if (bcx == BoundaryCondition::Open && (tx < 0 || tx >= Lx)) continue;
        if (bcy == BoundaryCondition::Open && (ty < 0 || ty >= Ly)) continue;
        tx = wrap(tx, Lx);
        ty = wrap(ty, Ly);
        int src = x + Lx * y, dst = tx + Lx * ty;
        h.matrix.block(dst * d, src * d, d, d) += blk;
      }
    }
  }
  return h;
}

Eigen::Matrix2d chiral_pair() {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2d c;
  c << r, r, r, -r;
  return c;
}

ChiralFrame parent_frame() { return {chiral_pair()}; }

ChiralFrame child_frame() {
  Eigen::Matrix4d q = Eigen::Matrix4d::Zero();
  q.topLeftCorner<2, 2>() = chiral_pair();
  q.bottomRightCorner<2, 2>() = chiral_pair();
  return {bell_basis() * q};
}

struct Pair {
  double e;
  int sector;
  int index;
  int sign;
};

template <class Scalar>
SpectrumResult<Scalar> dense_solve(const MatX<Scalar>& m, bool vectors, int d, int Lx, int Ly) {
  if (hermiticity_residual(m) > 1e-10) throw precondition_error("diagonalize: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<MatX<Scalar>> es(m, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw numerical_error("diagonalize: eigensolver did not converge");
  SpectrumResult<Scalar> r;
  r.eigenvalues = es.eigenvalues();
  if (vectors) r.eigenvectors = es.eigenvectors();
  r.internal_dim = d;
  r.Lx = Lx;
  r.Ly = Ly;
  return r;
}

std::optional<SpectrumResult<double>> chiral_solve(const RealHamiltonian& h, bool vectors) {
  const Eigen::MatrixXd& q = h.frame->site_rotation;
  const int d = h.internal_dim, ns = h.sites(), nsec = d / 2;
  const double total = h.matrix.squaredNorm();
  if (total == 0.0) return std::nullopt;

  std::vector<Eigen::MatrixXd> blocks(nsec, Eigen::MatrixXd::Zero(ns, ns));
  double leak = 0.0;
  Eigen::MatrixXd rot(d, d);
  for (int j = 0; j < ns; ++j) {
    for (int i = 0; i < ns; ++i) {
      auto b = h.matrix.block(i * d, j * d, d, d);
      if (b.cwiseAbs().maxCoeff() == 0.0) continue;
      rot.noalias() = q.transpose() * b * q;
      for (int s = 0; s < nsec; ++s) {
        blocks[s](i, j) = rot(2 * s, 2 * s + 1);
        rot(2 * s, 2 * s + 1) = 0.0;
        rot(2 * s + 1, 2 * s) = 0.0;
      }
      leak += rot.squaredNorm();
    }
  }
  if (std::sqrt(leak) > 1e-12 * std::sqrt(total)) return std::nullopt;

  std::vector<Eigen::BDCSVD<Eigen::MatrixXd>> svds;
  svds.reserve(nsec);
  for (auto& b : blocks)
    svds.emplace_back(b, vectors ? (Eigen::ComputeFullU | Eigen::ComputeFullV) : 0);

  std::vector<Pair> pairs;
  pairs.reserve(static_cast<std::size_t>(2 * ns * nsec));
  for (int s = 0; s < nsec; ++s) {
    const auto& sv = svds[s].singularValues();
    for (int i = 0; i < ns; ++i) {
      pairs.push_back({sv(i), s, i, +1});
      pairs.push_back({-sv(i), s, i, -1});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.e < b.e; });

  SpectrumResult<double> r;
  r.internal_dim = d;
  r.Lx = h.Lx;
  r.Ly = h.Ly;
  const Eigen::Index n = h.dim();
  r.eigenvalues.resize(n);
  for (Eigen::Index c = 0; c < n; ++c) r.eigenvalues(c) = pairs[c].e;
  if (!vectors) return r;

  r.eigenvectors.resize(n, n);
  const double w = 1.0 / std::sqrt(2.0);
  Eigen::VectorXd local(d);
  for (Eigen::Index c = 0; c < n; ++c) {
    const Pair& p = pairs[c];
    const auto& u = svds[p.sector].matrixU();
    const auto& v = svds[p.sector].matrixV();
    for (int site = 0; site < ns; ++site) {
      local.setZero();
      local(2 * p.sector) = w * u(site, p.index);
      local(2 * p.sector + 1) = p.sign * w * v(site, p.index);
      r.eigenvectors.col(c).segment(site * d, d) = q * local;
    }
  }
  return r;
}

Eigen::VectorXd eigenvalues_of(const RealHamiltonian& h) { return diagonalize(h, false).eigenvalues; }

}  // namespace

std::vector<HoppingTerm> hopping_terms(const std::function<Eigen::MatrixXcd(double, double)>& bloch, int range_x,
                                       int range_y, double drop_tol) {
  const int nx = std::max(1, 2 * range_x + 2), ny = std::max(1, 2 * range_y + 2);
  std::vector<Eigen::MatrixXcd> samples;
  samples.reserve(static_cast<std::size_t>(nx * ny));
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) samples.push_back(bloch(2.0 * pi * i / nx, 2.0 * pi * j / ny));
  std::vector<HoppingTerm> out;
  for (int ry = -range_y; ry <= range_y; ++ry) {
    for (int rx = -range_x; rx <= range_x; ++rx) {
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(samples[0].rows(), samples[0].cols());
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          double phase = -(2.0 * pi * i / nx) * rx - (2.0 * pi * j / ny) * ry;
          acc += samples[static_cast<std::size_t>(i + nx * j)] * std::polar(1.0, phase);
        }
      acc /= static_cast<double>(nx * ny);
      if (acc.cwiseAbs().maxCoeff() > drop_tol) out.push_back({rx, ry, acc});
    }
  }
  return out;
}

RealHamiltonian build_chain(const ParentParams& p, const ChainLattice& lat) {
  if (lat.L < 1) throw precondition_error("chain length must be positive");
  auto terms = hopping_terms([&](double k, double) -> Eigen::MatrixXcd { return parent_bloch(p, k); }, 1, 0);
  auto h = assemble(terms, 2, lat.L, 1, lat.bc, BoundaryCondition::Open);
  h.frame = parent_frame();
  return h;
}

RealHamiltonian build_chain(const ChildSpec& spec, const ChainLattice& lat) {
  if (spec.orientation != Orientation::Parallel) throw precondition_error("build_chain needs a parallel child");
  if (lat.L < 3) throw precondition_error("parallel child chain needs L >= 3 for next-nearest-neighbour bonds");
  auto terms = hopping_terms([&](double k, double) -> Eigen::MatrixXcd { return child_bloch(spec, k); }, 2, 0);
  auto h = assemble(terms, 4, lat.L, 1, lat.bc, BoundaryCondition::Open);
  h.frame = child_frame();
  return h;
}

RealHamiltonian build_slab(const ChildSpec& spec, const SlabLattice& lat) {
  if (spec.orientation != Orientation::Perpendicular) throw precondition_error("build_slab needs a perpendicular child");
  if (lat.Lx < 3 || lat.Ly < 3) throw precondition_error("slab needs Lx, Ly >= 3");
  auto terms = hopping_terms(
      [&](double kx, double ky) -> Eigen::MatrixXcd { return child_bloch(spec, Momentum(kx, ky)); }, 1, 1);
  auto h = assemble(terms, 4, lat.Lx, lat.Ly, lat.bcx, lat.bcy);
  h.frame = child_frame();
  return h;
}

template <class Scalar>
SpectrumResult<Scalar> diagonalize(const RealSpaceHamiltonian<Scalar>& h, bool vectors) {
  if constexpr (std::is_same_v<Scalar, double>) {
    if (h.frame) {
      if (auto r = chiral_solve(h, vectors)) return *r;
    }
  }
  return dense_solve<Scalar>(h.matrix, vectors, h.internal_dim, h.Lx, h.Ly);
}

template SpectrumResult<double> diagonalize(const RealSpaceHamiltonian<double>&, bool);
template SpectrumResult<cd> diagonalize(const RealSpaceHamiltonian<cd>&, bool);

SpectrumResult<double> diagonalize(const Eigen::MatrixXd& m) {
  return dense_solve<double>(m, true, 1, static_cast<int>(m.rows()), 1);
}

SpectrumResult<cd> diagonalize(const Eigen::MatrixXcd& m) {
  return dense_solve<cd>(m, true, 1, static_cast<int>(m.rows()), 1);
}

double default_zero_tol(double spectral_range) { return 1e-8 * spectral_range; }

template <class Scalar>
MatX<Scalar> zero_subspace(const SpectrumResult<Scalar>& s, double tol) {
  if (tol <= 0) tol = default_zero_tol(s.range());
  if (s.eigenvectors.cols() != s.eigenvalues.size()) throw precondition_error("zero_subspace needs eigenvectors");
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
    if (std::abs(s.eigenvalues(i)) < tol) idx.push_back(i);
  MatX<Scalar> z(s.eigenvectors.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) z.col(static_cast<Eigen::Index>(c)) = s.eigenvectors.col(idx[c]);
  return z;
}

template <class Scalar>
ModeDensity zero_mode_density(const SpectrumResult<Scalar>& s, double tol) {
  MatX<Scalar> z = zero_subspace(s, tol);
  ModeDensity m;
  m.Lx = s.Lx;
  m.Ly = s.Ly;
  m.dimension = static_cast<int>(z.cols());
  const int d = s.internal_dim, ns = s.Lx * s.Ly;
  m.weight = Eigen::VectorXd::Zero(ns);
  for (int site = 0; site < ns; ++site) m.weight(site) = z.middleRows(site * d, d).squaredNorm();
  return m;
}

template MatX<double> zero_subspace(const SpectrumResult<double>&, double);
template MatX<cd> zero_subspace(const SpectrumResult<cd>&, double);
template ModeDensity zero_mode_density(const SpectrumResult<double>&, double);
template ModeDensity zero_mode_density(const SpectrumResult<cd>&, double);

RealHamiltonian build_lattice(const ChainModel& model, const SlabLattice& lat) {
  if (const auto* p = std::get_if<ParentParams>(&model)) return build_chain(*p, ChainLattice{lat.Lx, lat.bcx});
  const auto& spec = std::get<ChildSpec>(model);
  if (spec.orientation == Orientation::Parallel) return build_chain(spec, ChainLattice{lat.Lx, lat.bcx});
  return build_slab(spec, lat);
}

std::vector<LengthRow> low_energy_vs_length(const ChainModel& model, const std::vector<int>& lengths,
                                            BoundaryCondition bc, int n_modes, unsigned threads) {
  return parallel_map(lengths.size(), threads, [&](std::size_t i) {
    LengthRow row;
    row.L = lengths[i];
    Eigen::VectorXd e = eigenvalues_of(build_lattice(model, SlabLattice{row.L, 1, bc, BoundaryCondition::Open}));
    const Eigen::Index n = e.size();
    std::vector<double> v(e.data(), e.data() + n);
    std::vector<double> by_abs = v;
    std::stable_sort(by_abs.begin(), by_abs.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    by_abs.resize(std::min<std::size_t>(by_abs.size(), static_cast<std::size_t>(std::max(0, n_modes))));
    std::sort(by_abs.begin(), by_abs.end());
    row.energies = by_abs;
    row.splitting = n >= 2 ? e(n / 2) - e(n / 2 - 1) : 0.0;
    return row;
  });
}

ChainModel with_mu(const ChainModel& model, double mu, MuLink link) {
  if (const auto* p = std::get_if<ParentParams>(&model)) {
    ParentParams q = *p;
    q.mu = mu;
    return q;
  }
  ChildSpec s = std::get<ChildSpec>(model);
  s.p1.mu = mu;
  if (link == MuLink::Equal) s.p2.mu = mu;
  else if (link == MuLink::Opposite) s.p2.mu = -mu;
  return s;
}

std::vector<MuPoint> spectrum_vs_mu(const ChainModel& model, const std::vector<double>& grid, MuLink link, int Lx,
                                    int Ly, bool with_periodic, unsigned threads) {
  if (grid.empty()) throw precondition_error("spectrum_vs_mu needs a nonempty grid");
  return parallel_map(grid.size(), threads, [&](std::size_t i) {
    ChainModel m = with_mu(model, grid[i], link);
    MuPoint pt;
    if (const auto* s = std::get_if<ChildSpec>(&m)) {
      pt.mu1 = s->p1.mu;
      pt.mu2 = s->p2.mu;
    } else {
      pt.mu1 = pt.mu2 = std::get<ParentParams>(m).mu;
    }
    pt.open = eigenvalues_of(build_lattice(m, SlabLattice{Lx, Ly, BoundaryCondition::Open, BoundaryCondition::Open}));
    if (with_periodic)
      pt.periodic = eigenvalues_of(
          build_lattice(m, SlabLattice{Lx, Ly, BoundaryCondition::Periodic, BoundaryCondition::Periodic}));
    return pt;
  });
}

std::string model_name(const ChainModel& model) {
  if (std::holds_alternative<ParentParams>(model)) return "parent";
  return std::get<ChildSpec>(model).orientation == Orientation::Parallel ? "mkc-parallel" : "mkc-perpendicular";
}

std::string to_string(BoundaryCondition bc) { return bc == BoundaryCondition::Open ? "open" : "periodic"; }

}  // namespace mkc
