#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mkc/model.hpp"

namespace mkc {

struct OccupiedFrame {
  double k = 0.0;
  Eigen::MatrixXcd states;
};

using BlochFunction = std::function<Eigen::MatrixXcd(double)>;

// Lower half of the spectrum at R equally spaced momenta k_i = 2 pi i / R.  A gap below
// gap_tol between the occupied and empty halves is an error naming k.
std::vector<OccupiedFrame> occupied_path(const BlochFunction& bloch, int R, double gap_tol = 1e-9);

// Product of overlaps around the closed path, unitarized by polar decomposition.
Eigen::MatrixXcd wilson_loop(const std::vector<OccupiedFrame>& path, double rank_tol = 1e-10);

// Eigenphases / 2 pi, in [0, 1), ascending.
std::vector<double> wannier_from_wilson(const Eigen::MatrixXcd& w);

// Distance on the unit circle of Wannier positions.
double wannier_distance(double a, double b);

struct WannierSpectrum {
  std::vector<double> centers;
  int filling = 0;
  std::string path;
};

WannierSpectrum wannier_centers_parent(const ParentParams& p, int R = 1001);
WannierSpectrum wannier_centers_parallel(const ChildSpec& spec, int R = 1001);
// direction 'x' loops over kx at fixed ky; 'y' the reverse
WannierSpectrum wannier_centers_perp(const ChildSpec& spec, char direction, double fixed_momentum, int R = 1001);

struct WindingCurve {
  std::vector<DVector> samples;
  bool closed = false;
};

struct WindingResult {
  int w = 0;
  double origin_distance = 0.0;
  double raw = 0.0;
};

// samples + 1 points over [0, 2 pi], last equal to first.
WindingCurve sample_curve(const std::function<DVector(double)>& d, int samples = 4096);

WindingResult winding_number(const WindingCurve& curve, double critical_tol = 1e-9);

struct ComponentWindings {
  WindingResult w1;
  WindingResult w2;
};

ComponentWindings component_winding_parallel(const ChildSpec& spec, int samples = 4096);

struct PerpWindingFamily {
  std::vector<double> row_ky;  // rows: kx varies at fixed ky = 2 pi m / Ly
  std::vector<int> row_w1, row_w2;
  std::vector<double> col_kx;  // columns: ky varies at fixed kx = 2 pi m / Lx
  std::vector<int> col_w1, col_w2;
  double min_origin_distance = 0.0;
  // component 2 at (kx, ky) is component 1 at (kx, -ky), so columns agree up to orientation
  bool components_agree() const;
};

PerpWindingFamily component_winding_perp(const ChildSpec& spec, int Lx, int Ly, int samples = 4096,
                                         unsigned threads = 1);

double winding_locus_check(const ChildSpec& spec, double ky, int samples = 4096);

}  // namespace mkc
