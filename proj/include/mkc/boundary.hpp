#pragma once

#include <array>
#include <string>
#include <vector>

#include "mkc/lattice.hpp"

namespace mkc {

enum class Edge { Low, High };

struct DecayRoots {
  std::array<cd, 2> roots{};
  std::array<double, 2> modulus{};
  std::array<double, 2> angle{};
  bool complex_pair = false;
  int branch = +1;
};

// Roots x = e^{-q} of (t + b delta) x^2 + mu x + (t - b delta) = 0, b = branch.
DecayRoots decay_roots(const ParentParams& p, int branch);

// Branch whose two roots both lie inside the unit disk, or 0 when neither does.
int localized_branch(const ParentParams& p);

struct MajoranaPointSet {
  std::vector<double> mu_values;
  std::vector<int> degeneracies;  // paper's fold count
  std::vector<int> nullities;     // expected number of zero eigenvalues of the finite lattice
  std::vector<std::string> provenance;
  std::size_t size() const { return mu_values.size(); }
};

MajoranaPointSet kc_majorana_points(const ParentParams& p, int L);

// Child with t1 = -t, t2 = t, delta1 = delta2 = delta, mu1 = mu2 = mu.
ChildSpec opposite_hopping_child(double t, double delta, double mu);

MajoranaPointSet mkc_parallel_majorana_points(double t, double delta, int L);

double quantization_residual(double R1, double R2, double theta1, double theta2, int N);

struct QuantizationRoot {
  double mu = 0.0;
  double residual = 0.0;
  bool tangential = false;  // touching root found as a minimum of |residual|
};

// mu1 = mu2 = mu scanned over [mu_lo, mu_hi]; t and delta taken from spec.  Defined only where both
// parents have a complex decay-root pair; elsewhere numerical_error (the scan skips those points).
double quantization_residual_at(const ChildSpec& spec, double mu, int N);
std::vector<QuantizationRoot> quantization_roots(const ChildSpec& spec, int N, double mu_lo, double mu_hi,
                                                 int grid = 2001, double xtol = 1e-12);

struct AnalyticMode {
  Eigen::VectorXd profile;  // site l = 1..N at index l - 1
  Vec4 internal = Vec4::Zero();
  int which = 1;
  Edge edge = Edge::Low;
  char direction = 'x';
  bool uniform_transverse = false;
  double theta = 0.0;
  double R = 0.0;
  double mu = 0.0;
  int branch = 0;
};

AnalyticMode analytic_mmzm_wavefunction(double t, double delta, int N, int n, int which, Edge edge = Edge::Low);

// Site profile times internal vector, 4N entries.
Eigen::VectorXcd embed_mode(const AnalyticMode& m);

// Normalized site density averaged over the analytic zero modes at the n-th point.  Even N uses both
// sublattice modes on both edges; odd N uses the family selected by which.
Eigen::VectorXd analytic_zero_density(double t, double delta, int N, int n, int which = 1);

AnalyticMode semi_infinite_edge_profile(const ChildSpec& spec, int parent, Edge edge, int sites);

enum class StateLabel {
  BellPlus00,   // (|00> + |11>)/sqrt 2
  BellPlus01,   // (|01> + |10>)/sqrt 2
  BellMinus00,  // (|00> - |11>)/sqrt 2
  BellMinus01,  // (|01> - |10>)/sqrt 2
  Product00,
  Product01,
  Product10,
  Product11,
  ProductOther,
  EntangledOther,
  Unclassified
};

std::string to_string(StateLabel l);
bool is_bell(StateLabel l);
bool is_product(StateLabel l);

// Vector of a labeled Bell or computational state in the table basis.
Vec4 label_vector(StateLabel l);

// Entropy across the tau / sigma cut of a table-basis vector.
double entanglement_entropy(const Vec4& c);

struct MmzmContext {
  Orientation orientation = Orientation::Parallel;
  bool topo1 = false, topo2 = false;
  int e1 = 1, e2 = 1;  // sgn(t_i) sgn(delta_i)
  bool proportional = false;
  BoundaryCondition bcx = BoundaryCondition::Open;
  BoundaryCondition bcy = BoundaryCondition::Open;
  Edge edge = Edge::Low;
  bool contributes1() const { return topo1 && bcx == BoundaryCondition::Open; }
  bool contributes2() const {
    return topo2 && (orientation == Orientation::Parallel ? bcx : bcy) == BoundaryCondition::Open;
  }
};

MmzmContext mmzm_context(const ChildSpec& spec, BoundaryCondition bcx, BoundaryCondition bcy, Edge edge);

std::vector<StateLabel> expected_table_states(const MmzmContext& ctx);

// Edge-localized internal vectors (tau(x)sigma basis, orthonormal columns) from the decay roots.
Eigen::MatrixXcd localized_null_vectors(const ChildSpec& spec, BoundaryCondition bcx, BoundaryCondition bcy,
                                        Edge edge);

// Zero-subspace internal content at the maximum-density site of one edge; axis 'x' splits the
// lattice at Lx / 2, 'y' at Ly / 2.
template <class Scalar>
Eigen::MatrixXcd edge_internal_vectors(const SpectrumResult<Scalar>& s, char axis, Edge edge, double tol = 0.0);

struct ClassifiedState {
  StateLabel label = StateLabel::Unclassified;
  Vec4 vector = Vec4::Zero();  // table basis
  double entropy = 0.0;
  double overlap = 0.0;
};

struct MmzmClass {
  std::vector<ClassifiedState> states;
  std::vector<StateLabel> expected;
  bool matches_table = false;
  bool dichotomy = false;
};

MmzmClass mmzm_classify(const Eigen::MatrixXcd& subspace, const MmzmContext& ctx);

// Largest principal-angle deviation of span(a) from span(b); 0 when span(a) is inside span(b).
double subspace_excess(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

enum class EdgeSet { XEdges, YEdges, Perimeter, None, Critical };

std::string to_string(EdgeSet e);
EdgeSet perp_edge_prediction(const ChildSpec& spec);

// Fraction of a density on x-boundary columns, y-boundary rows, or the one-site ring.
double edge_weight(const ModeDensity& d, EdgeSet where);

MajoranaPointSet perp_obc_gapless_points(const ChildSpec& spec, int Lx, int Ly);

enum class ScalingClass { EqualParents, OppositeParents };

struct ScalingFit {
  double slope = 0.0;
  std::vector<double> delta_mu;
  std::vector<double> energy;
};

ScalingFit energy_scaling_near_critical(ScalingClass cls, const std::vector<double>& delta_mu, double t = 1.0,
                                        double delta = 1.0);

}  // namespace mkc
