#pragma once
// Independent reference constructions used by the unit tests.  Nothing here calls the library.

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;
constexpr double pi = 3.14159265358979323846;

inline Eigen::Matrix2cd sy() {
  Eigen::Matrix2cd m;
  m << 0, cd(0, -1), cd(0, 1), 0;
  return m;
}
inline Eigen::Matrix2cd sz() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}
inline Eigen::Matrix2cd sx() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

inline Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

inline double parent_energy(double t, double d, double mu, double k) {
  return std::hypot(2 * t * std::cos(k) + mu, 2 * d * std::sin(k));
}

// Kitaev chain in the (c_l, c_l^dagger) Nambu basis, written out term by term.
inline Eigen::MatrixXd kitaev_chain(double t, double d, double mu, int L, bool periodic = false) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * L, 2 * L);
  for (int l = 0; l < L; ++l) {
    h(2 * l, 2 * l) = -mu;
    h(2 * l + 1, 2 * l + 1) = mu;
  }
  for (int l = 0; l < L; ++l) {
    int m = l + 1;
    if (m == L) {
      if (!periodic) break;
      m = 0;
    }
    // -t c_m^dag c_l + d c_m^dag c_l^dag + h.c., in BdG form
    h(2 * m, 2 * l) += -t;
    h(2 * l, 2 * m) += -t;
    h(2 * m + 1, 2 * l + 1) += t;
    h(2 * l + 1, 2 * m + 1) += t;
    h(2 * m, 2 * l + 1) += d;
    h(2 * l + 1, 2 * m) += d;
    h(2 * l, 2 * m + 1) += -d;
    h(2 * m + 1, 2 * l) += -d;
  }
  return h;
}

// Child chain from Fourier coefficients of the two factors: f(k) = sum_r A_r e^{irk},
// h_r = sum_{a+b=r} A_a (x) B_b.
inline Eigen::MatrixXcd child_chain(double t1, double d1, double mu1, double t2, double d2, double mu2, int L) {
  auto coeff = [](double t, double d, double mu, double s, int r) -> Eigen::Matrix2cd {
    if (r == 0) return s * mu * sz();
    return s * t * sz() - cd(0, r) * d * sy();
  };
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(4 * L, 4 * L);
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) {
      Eigen::Matrix4cd blk = kron(coeff(t1, d1, mu1, -1.0, a), coeff(t2, d2, mu2, 1.0, b));
      int r = a + b;
      for (int l = 0; l < L; ++l)
        if (l + r >= 0 && l + r < L) h.block<4, 4>(4 * (l + r), 4 * l) += blk;
    }
  return h;
}

inline Eigen::VectorXd sorted_eigenvalues(const Eigen::MatrixXcd& h) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h, Eigen::EigenvaluesOnly).eigenvalues();
}

inline double max_abs_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) return 1e300;
  return (a - b).cwiseAbs().maxCoeff();
}

struct Random {
  std::mt19937_64 g{12345};
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }
  double sign() { return uniform(0, 1) < 0.5 ? -1.0 : 1.0; }
};

}  // namespace oracle
