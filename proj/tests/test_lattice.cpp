#include <doctest.h>

#include <algorithm>

#include "mkc/lattice.hpp"
#include "oracle.hpp"

using namespace mkc;
using oracle::pi;

namespace {

const auto O = BoundaryCondition::Open;
const auto P = BoundaryCondition::Periodic;

Eigen::VectorXd sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

TEST_CASE("parent chain matches the term-by-term Kitaev chain") {
  for (int L : {1, 2, 5, 12}) {
    ParentParams p{0.8, -0.6, 0.4};
    auto h = build_chain(p, ChainLattice{L, O});
    CHECK(hermiticity_residual(h.matrix) < 1e-14);
    Eigen::VectorXd ref = oracle::sorted_eigenvalues(oracle::kitaev_chain(0.8, -0.6, 0.4, L).cast<oracle::cd>());
    CHECK(oracle::max_abs_diff(diagonalize(h, false).eigenvalues, ref) < 1e-12);
  }
}

TEST_CASE("periodic spectra are the sampled Bloch bands") {
  const int L = 9;
  ParentParams p{1.1, 0.7, -0.5};
  std::vector<double> ref;
  for (int n = 0; n < L; ++n) {
    double e = oracle::parent_energy(p.t, p.delta, p.mu, 2 * pi * n / L);
    ref.push_back(e);
    ref.push_back(-e);
  }
  CHECK(oracle::max_abs_diff(diagonalize(build_chain(p, ChainLattice{L, P}), false).eigenvalues, sorted(ref)) < 1e-12);
  CHECK(oracle::max_abs_diff(oracle::sorted_eigenvalues(oracle::kitaev_chain(1.1, 0.7, -0.5, L, true).cast<oracle::cd>()),
                             sorted(ref)) < 1e-12);

  ChildSpec c{{1.1, 0.7, -0.5}, {-0.6, 1.2, 0.9}, Orientation::Parallel};
  std::vector<double> cref;
  for (int n = 0; n < L; ++n) {
    double k = 2 * pi * n / L;
    double e = oracle::parent_energy(1.1, 0.7, -0.5, k) * oracle::parent_energy(-0.6, 1.2, 0.9, k);
    for (double s : {1.0, 1.0, -1.0, -1.0}) cref.push_back(s * e);
  }
  CHECK(oracle::max_abs_diff(diagonalize(build_chain(c, ChainLattice{L, P}), false).eigenvalues, sorted(cref)) < 1e-11);

  ChildSpec q{{1.1, 0.7, -0.5}, {-0.6, 1.2, 0.9}, Orientation::Perpendicular};
  std::vector<double> sref;
  const int Lx = 4, Ly = 5;
  for (int nx = 0; nx < Lx; ++nx)
    for (int ny = 0; ny < Ly; ++ny) {
      double e = oracle::parent_energy(1.1, 0.7, -0.5, 2 * pi * nx / Lx) *
                 oracle::parent_energy(-0.6, 1.2, 0.9, 2 * pi * ny / Ly);
      for (double s : {1.0, 1.0, -1.0, -1.0}) sref.push_back(s * e);
    }
  CHECK(oracle::max_abs_diff(diagonalize(build_slab(q, SlabLattice{Lx, Ly, P, P}), false).eigenvalues, sorted(sref)) <
        1e-11);
}

TEST_CASE("open child chain matches the Fourier-convolution construction") {
  for (int L : {3, 4, 7, 10}) {
    ChildSpec c{{1.1, 0.7, -0.5}, {-0.6, 1.2, 0.9}, Orientation::Parallel};
    Eigen::VectorXd ref = oracle::sorted_eigenvalues(oracle::child_chain(1.1, 0.7, -0.5, -0.6, 1.2, 0.9, L));
    CHECK(oracle::max_abs_diff(diagonalize(build_chain(c, ChainLattice{L, O}), false).eigenvalues, ref) < 1e-11);
  }
}

TEST_CASE("structured solver agrees with the dense Hermitian solver") {
  ChildSpec c{{1.0, 1.0, 0.3}, {0.8, -0.5, -0.4}, Orientation::Parallel};
  auto h = build_chain(c, ChainLattice{30, O});
  REQUIRE(h.frame.has_value());
  auto fast = diagonalize(h, true);
  auto dense = diagonalize(Eigen::MatrixXd(h.matrix));
  CHECK(oracle::max_abs_diff(fast.eigenvalues, dense.eigenvalues) < 1e-11);
  Eigen::MatrixXd recon = fast.eigenvectors * fast.eigenvalues.asDiagonal() * fast.eigenvectors.transpose();
  CHECK((recon - h.matrix).norm() < 1e-10);
  CHECK((fast.eigenvectors.transpose() * fast.eigenvectors - Eigen::MatrixXd::Identity(h.dim(), h.dim())).norm() < 1e-10);

  ChildSpec q{{1.0, 1.0, 0.0}, {1.0, 1.0, 3.0}, Orientation::Perpendicular};
  auto hs = build_slab(q, SlabLattice{5, 6, O, O});
  CHECK(oracle::max_abs_diff(diagonalize(hs, false).eigenvalues, diagonalize(Eigen::MatrixXd(hs.matrix)).eigenvalues) <
        1e-11);
}

TEST_CASE("zero-mode density of the ideal child chain") {
  ChildSpec c{{1, 1, 0}, {1, 1, 0}, Orientation::Parallel};
  auto s = diagonalize(build_chain(c, ChainLattice{20, O}));
  auto d = zero_mode_density(s);
  CHECK(d.dimension == 4);
  CHECK(d.weight.sum() == doctest::Approx(4.0));
  CHECK(d.weight(0) + d.weight(1) + d.weight(18) + d.weight(19) == doctest::Approx(4.0));
  CHECK(zero_subspace(s).cols() == 4);
  CHECK(degeneracy_count(s, 0.0, 1e-8 * s.range()) == 4);
}

TEST_CASE("builders reject degenerate lattices") {
  CHECK_THROWS_AS(build_chain(ParentParams{1, 1, 0}, ChainLattice{0, O}), precondition_error);
  CHECK_THROWS_AS(build_chain(ChildSpec{{1, 1, 0}, {1, 1, 0}, Orientation::Parallel}, ChainLattice{2, O}),
                  precondition_error);
  CHECK_THROWS_AS(build_slab(ChildSpec{{1, 1, 0}, {1, 1, 0}, Orientation::Perpendicular}, SlabLattice{2, 5, O, O}),
                  precondition_error);
}

TEST_CASE("sweeps keep grid order independent of thread count") {
  ChainModel m = ChildSpec{{1, 0.5, 0}, {-1, 0.5, 0}, Orientation::Parallel};
  std::vector<double> grid;
  for (int i = 0; i < 9; ++i) grid.push_back(-2 + 0.5 * i);
  auto a = spectrum_vs_mu(m, grid, MuLink::Equal, 6, 1, true, 1);
  auto b = spectrum_vs_mu(m, grid, MuLink::Equal, 6, 1, true, 3);
  REQUIRE(a.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(a[i].mu1 == grid[i]);
    CHECK(a[i].open == b[i].open);
    CHECK(a[i].periodic == b[i].periodic);
  }
  auto opp = spectrum_vs_mu(m, {0.7}, MuLink::Opposite, 6, 1, false, 1);
  CHECK(opp[0].mu2 == -0.7);
  CHECK(opp[0].periodic.size() == 0);
}

TEST_CASE("end-mode splitting falls with length in the topological phase") {
  ChainModel m = ParentParams{1.0, 0.6, 0.0};  // no Majorana point at even L
  auto rows = low_energy_vs_length(m, {6, 10, 14, 18}, O, 4, 2);
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].splitting < rows[i - 1].splitting);
  CHECK(rows.back().energies.size() == 4);
  CHECK(std::is_sorted(rows.back().energies.begin(), rows.back().energies.end()));
}
