#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mkc/model.hpp"

namespace mkc {

enum class BoundaryCondition { Open, Periodic };

struct ChainLattice {
  int L = 10;
  BoundaryCondition bc = BoundaryCondition::Open;
};

struct SlabLattice {
  int Lx = 10;
  int Ly = 10;
  BoundaryCondition bcx = BoundaryCondition::Open;
  BoundaryCondition bcy = BoundaryCondition::Open;
};

// Per-site orthogonal frame in which the clean Hamiltonian is chiral-block off-diagonal:
// internal index 2s is the A sublattice of sector s, 2s+1 its B partner.
struct ChiralFrame {
  Eigen::MatrixXd site_rotation;
};

// Site-major, internal-index minor.  Slab site index is x + Lx*y.
template <class Scalar>
struct RealSpaceHamiltonian {
  MatX<Scalar> matrix;
  int internal_dim = 2;
  int Lx = 0;
  int Ly = 1;
  std::optional<ChiralFrame> frame;

  int sites() const { return Lx * Ly; }
  Eigen::Index dim() const { return matrix.rows(); }
};

using RealHamiltonian = RealSpaceHamiltonian<double>;
using ComplexHamiltonian = RealSpaceHamiltonian<cd>;

template <class Scalar>
struct SpectrumResult {
  Eigen::VectorXd eigenvalues;
  MatX<Scalar> eigenvectors;
  double degeneracy_tol = 1e-9;
  int internal_dim = 2;
  int Lx = 0;
  int Ly = 1;

  double range() const {
    return eigenvalues.size() ? eigenvalues(eigenvalues.size() - 1) - eigenvalues(0) : 0.0;
  }
};

// Hopping blocks h_r of a translation-invariant model, H(k) = sum_r h_r e^{i k.r}.
struct HoppingTerm {
  int rx = 0;
  int ry = 0;
  Eigen::MatrixXcd block;
};

std::vector<HoppingTerm> hopping_terms(const std::function<Eigen::MatrixXcd(double, double)>& bloch, int range_x,
                                       int range_y, double drop_tol = 1e-14);

RealHamiltonian build_chain(const ParentParams& p, const ChainLattice& lat);
RealHamiltonian build_chain(const ChildSpec& spec, const ChainLattice& lat);
RealHamiltonian build_slab(const ChildSpec& spec, const SlabLattice& lat);

template <class Scalar>
double hermiticity_residual(const MatX<Scalar>& m) {
  double n = m.norm();
  return n > 0 ? (m - m.adjoint()).norm() / n : 0.0;
}

// Full self-adjoint eigendecomposition, ascending.  A clean Hamiltonian carrying a chiral frame is
// solved through singular value decompositions of its off-diagonal sector blocks; the frame is
// verified first and the dense solver is used if it does not hold.
template <class Scalar>
SpectrumResult<Scalar> diagonalize(const RealSpaceHamiltonian<Scalar>& h, bool eigenvectors = true);

SpectrumResult<double> diagonalize(const Eigen::MatrixXd& m);
SpectrumResult<cd> diagonalize(const Eigen::MatrixXcd& m);

template <class Scalar>
int degeneracy_count(const SpectrumResult<Scalar>& s, double e0, double tol) {
  if (!(tol > 0)) throw precondition_error("degeneracy_count needs tol > 0");
  int n = 0;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
    if (std::abs(s.eigenvalues(i) - e0) < tol) ++n;
  return n;
}

struct ModeDensity {
  // weight(site) with site = x + Lx*y, 0-based; sums to dimension
  Eigen::VectorXd weight;
  int dimension = 0;
  int Lx = 0;
  int Ly = 1;
  bool empty() const { return dimension == 0; }
};

double default_zero_tol(double spectral_range);

// tol <= 0 selects the default 1e-8 x spectral range
template <class Scalar>
ModeDensity zero_mode_density(const SpectrumResult<Scalar>& s, double tol = 0.0);

// Columns of the zero subspace (|E| < tol).
template <class Scalar>
MatX<Scalar> zero_subspace(const SpectrumResult<Scalar>& s, double tol = 0.0);

struct LengthRow {
  int L = 0;
  std::vector<double> energies;  // n_modes smallest |E|, ascending
  double splitting = 0.0;        // E_{dim/2+1} - E_{dim/2}
};

using ChainModel = std::variant<ParentParams, ChildSpec>;

// n_modes eigenvalues nearest zero, in ascending order.
std::vector<LengthRow> low_energy_vs_length(const ChainModel& model, const std::vector<int>& lengths,
                                            BoundaryCondition bc, int n_modes, unsigned threads = 1);

enum class MuLink { Equal, Opposite, FixedSecond };

struct MuPoint {
  double mu1 = 0.0;
  double mu2 = 0.0;
  Eigen::VectorXd open;
  Eigen::VectorXd periodic;
};

// Parent templates are the first parent of spec; with MuLink::FixedSecond mu2 stays at spec.p2.mu.
// A perpendicular child is swept on an Lx x Ly slab; chains ignore Ly.
std::vector<MuPoint> spectrum_vs_mu(const ChainModel& model, const std::vector<double>& grid, MuLink link, int Lx,
                                    int Ly = 1, bool with_periodic = true, unsigned threads = 1);

ChainModel with_mu(const ChainModel& model, double mu, MuLink link);

// Dispatches to build_chain or build_slab.
RealHamiltonian build_lattice(const ChainModel& model, const SlabLattice& lat);

std::string model_name(const ChainModel& model);

std::string to_string(BoundaryCondition bc);

}  // namespace mkc
