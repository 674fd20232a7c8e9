#pragma once

#include <string>
#include <vector>

#include "mkc/types.hpp"

namespace mkc {

struct ParentParams {
  double t = 1.0;
  double delta = 1.0;
  double mu = 0.0;

  bool operator==(const ParentParams&) const = default;
};

enum class Orientation { Parallel, Perpendicular };

struct ChildSpec {
  ParentParams p1;
  ParentParams p2;
  Orientation orientation = Orientation::Parallel;
};

using Momentum = Eigen::Vector2d;

struct DVector {
  double dy = 0.0;
  double dz = 0.0;
  double norm() const;
};

// Reduces k into [-pi, pi).
double reduce_momentum(double k);

Mat2 d_matrix(const DVector& d);

DVector parent_dvector(const ParentParams& p, double k);
Mat2 parent_bloch(const ParentParams& p, double k);

// An open chain of this parent hosts Majorana end modes; |mu| = 2|t| or delta = 0 is critical.
bool is_topological(const ParentParams& p, double tol = 1e-9);
bool is_critical(const ParentParams& p, double tol = 1e-9);

// The two tensor factors of the child: first carries -(2t1 cos k + mu1), second +(2t2 cos k + mu2).
Mat2 first_factor(const ParentParams& p, double k);
Mat2 second_factor(const ParentParams& p, double k);

// For Parallel only k[0] is read.
Mat4 child_bloch(const ChildSpec& spec, const Momentum& k);
Mat4 child_bloch(const ChildSpec& spec, double k);

struct DispersionPair {
  double plus = 0.0;
  double minus = 0.0;
};

DispersionPair dispersion_parallel(const ChildSpec& spec, double k);

// Perpendicular bands: +-|d1(kx)| |d2(ky)|, each twofold.
DispersionPair dispersion_perp(const ChildSpec& spec, double kx, double ky);

struct GapClosure {
  int parent = 1;
  double k = 0.0;
  bool continuum = false;  // delta = 0 closes the gap at k = acos(-mu/2t)
  std::string condition;
};

std::vector<GapClosure> gap_closures(const ChildSpec& spec, double tol = 1e-9);

struct SymmetryReport {
  double T = 0.0, P1 = 0.0, C1 = 0.0, P2 = 0.0, C2 = 0.0, U = 0.0;
  bool T_ok = false, P1_ok = false, C1_ok = false, P2_ok = false, C2_ok = false, U_ok = false;
  double tol = 1e-12;
  bool all_ok() const { return T_ok && P1_ok && C1_ok && P2_ok && C2_ok && U_ok; }
};

// Residuals are relative to max ||H(k)|| over the grid.
SymmetryReport symmetry_check(const ChildSpec& spec, const std::vector<Momentum>& grid, double tol = 1e-12);

struct ComponentBloch {
  DVector d;
  Mat2 matrix;
};

ComponentBloch component_bloch(const ChildSpec& spec, const Momentum& k, int which);
ComponentBloch component_bloch(const ChildSpec& spec, double k, int which);

// Columns: (00-11), -(01-10), (00+11), (01+10), all over sqrt 2, in the tau(x)sigma basis.
Eigen::Matrix4d bell_basis();

// Maps a tau(x)sigma vector to the (c_up, c_dn, c_up^dag, c_dn^dag) ordering used for labeling.
Vec4 to_table_basis(const Vec4& psi);
Vec4 from_table_basis(const Vec4& c);

struct BlockDecomposition {
  Mat2 block1;
  Mat2 block2;
  Eigen::Matrix4d basis;
  double off_block = 0.0;
};

BlockDecomposition block_diagonalize(const ChildSpec& spec, const Momentum& k);

enum class DiracRegime { Gapped, LinearFirst, LinearSecond, Quadratic };

struct DiracExpansion {
  double m1 = 0.0, m2 = 0.0, M = 0.0;
  double velocity1 = 0.0;  // |2 delta1 m2|, slope when m1 = 0
  double velocity2 = 0.0;  // |2 delta2 m1|, slope when m2 = 0
  double quadratic = 0.0;  // 4 |delta1 delta2|, coefficient of k^2 when m1 = m2 = 0
  DiracRegime regime = DiracRegime::Gapped;
};

DiracExpansion dirac_expansion_parallel(const ChildSpec& spec, double tol = 1e-9);

// Upper branch sqrt(4 d1^2 kx^2 + m1^2) sqrt(4 d2^2 ky^2 + m2^2) of the low-energy expansion.
double perp_expansion_energy(const ChildSpec& spec, double kx, double ky);

struct Velocity {
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  bool one_sided = false;
};

Velocity group_velocity_perp(const ChildSpec& spec, double kx, double ky, double tol = 1e-9);

std::string to_string(Orientation o);

}  // namespace mkc
