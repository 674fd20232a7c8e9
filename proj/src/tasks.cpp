#include "mkc/tasks.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <map>

#include "mkc/boundary.hpp"
#include "mkc/disorder.hpp"
#include "mkc/parallel.hpp"
#include "mkc/topology.hpp"

namespace mkc {

namespace {

constexpr double pi = 3.14159265358979323846;

struct Context {
  const RunConfig& cfg;
  unsigned threads;
  ChainModel model;
  ResultEnvelope& env;

  bool is_parent() const { return std::holds_alternative<ParentParams>(model); }
  bool is_perp() const {
    return !is_parent() && std::get<ChildSpec>(model).orientation == Orientation::Perpendicular;
  }
  const ChildSpec& child(const char* task) const {
    if (is_parent()) throw config_error(std::string("[model] type: task ") + task + " needs a child model");
    return std::get<ChildSpec>(model);
  }
  SlabLattice lattice() const {
    if (is_perp()) return {cfg.Lx, cfg.Ly, parse_bc(cfg.bcx, "bcx"), parse_bc(cfg.bcy, "bcy")};
    return {cfg.L, 1, parse_bc(cfg.bc, "bc"), BoundaryCondition::Open};
  }
  std::vector<double> mu_values() const {
    if (!cfg.mu_grid.empty()) return cfg.mu_grid;
    return {cfg.p1.mu};
  }
  template <class T>
  void note(const std::string& key, T v) {
    env.summary.emplace_back(key, to_cell(v));
  }
  static Cell to_cell(int v) { return std::int64_t{v}; }
  static Cell to_cell(std::size_t v) { return static_cast<std::int64_t>(v); }
  static Cell to_cell(double v) { return v; }
  static Cell to_cell(bool v) { return v; }
  static Cell to_cell(const std::string& v) { return v; }
  static Cell to_cell(const char* v) { return std::string(v); }
};

double mu1_of(const ChainModel& m) {
  if (const auto* p = std::get_if<ParentParams>(&m)) return p->mu;
  return std::get<ChildSpec>(m).p1.mu;
}
double mu2_of(const ChainModel& m) {
  if (const auto* p = std::get_if<ParentParams>(&m)) return p->mu;
  return std::get<ChildSpec>(m).p2.mu;
}

double min_abs(const Eigen::VectorXd& e) { return e.size() ? e.cwiseAbs().minCoeff() : 0.0; }

void task_spectrum(Context& c) {
  auto h = build_lattice(c.model, c.lattice());
  auto s = diagonalize(h, false);
  c.env.payload.columns = {"index", "energy"};
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) c.env.payload.add(i, s.eigenvalues(i));
  const double tol = c.cfg.zero_tol * s.range();
  c.note("dimension", static_cast<int>(s.eigenvalues.size()));
  c.note("zero_modes", degeneracy_count(s, 0.0, tol));
  c.note("zero_tol_absolute", tol);
}

void task_sweep_mu(Context& c) {
  if (c.cfg.mu_grid.empty()) throw config_error("[task] mu_grid: required for sweep-mu");
  auto lat = c.lattice();
  auto pts = spectrum_vs_mu(c.model, c.cfg.mu_grid, parse_link(c.cfg.mu_link), lat.Lx, lat.Ly, true, c.threads);
  c.env.payload.columns = {"mu1", "mu2", "bc", "level_index", "energy"};
  for (const auto& p : pts) {
    for (Eigen::Index i = 0; i < p.open.size(); ++i) c.env.payload.add(p.mu1, p.mu2, "open", i, p.open(i));
    for (Eigen::Index i = 0; i < p.periodic.size(); ++i) c.env.payload.add(p.mu1, p.mu2, "periodic", i, p.periodic(i));
  }
  c.note("grid_points", pts.size());
}

void task_sweep_length(Context& c) {
  if (c.is_perp()) throw config_error("[model] type: sweep-length needs a chain model");
  if (c.cfg.lengths.empty()) throw config_error("[task] lengths: required for sweep-length");
  auto rows = low_energy_vs_length(c.model, c.cfg.lengths, parse_bc(c.cfg.bc, "bc"), c.cfg.n_modes, c.threads);
  c.env.payload.columns = {"L", "level_index", "energy", "splitting"};
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.energies.size(); ++i) c.env.payload.add(r.L, i, r.energies[i], r.splitting);
}

void task_wannier(Context& c) {
  c.env.payload.columns = {"mu1", "mu2", "direction", "index", "nu"};
  std::vector<ChainModel> grid;
  if (!c.is_parent() && !c.cfg.mu2_grid.empty()) {
    for (double m1 : c.mu_values())
      for (double m2 : c.cfg.mu2_grid) {
        ChildSpec s = std::get<ChildSpec>(c.model);
        s.p1.mu = m1;
        s.p2.mu = m2;
        grid.push_back(s);
      }
  } else {
    for (double m : c.mu_values())
      grid.push_back(c.cfg.mu_grid.empty() ? c.model : with_mu(c.model, m, parse_link(c.cfg.mu_link)));
  }
  const double kx = c.cfg.kx.empty() ? 0.0 : c.cfg.kx.front();
  const double ky = c.cfg.ky.empty() ? 0.0 : c.cfg.ky.front();
  auto spectra = parallel_map(grid.size(), c.threads, [&](std::size_t i) {
    std::vector<std::pair<std::string, WannierSpectrum>> out;
    if (const auto* p = std::get_if<ParentParams>(&grid[i])) out.emplace_back("k", wannier_centers_parent(*p, c.cfg.R));
    else {
      const auto& s = std::get<ChildSpec>(grid[i]);
      if (s.orientation == Orientation::Parallel) out.emplace_back("k", wannier_centers_parallel(s, c.cfg.R));
      else {
        out.emplace_back("x", wannier_centers_perp(s, 'x', ky, c.cfg.R));
        out.emplace_back("y", wannier_centers_perp(s, 'y', kx, c.cfg.R));
      }
    }
    return out;
  });
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (const auto& [dir, w] : spectra[i])
      for (std::size_t j = 0; j < w.centers.size(); ++j)
        c.env.payload.add(mu1_of(grid[i]), mu2_of(grid[i]), dir, j, w.centers[j]);
  if (c.is_perp()) {
    c.note("x_loop_ky", ky);
    c.note("y_loop_kx", kx);
  }
}

void task_winding(Context& c) {
  c.env.payload.columns = {"curve", "fixed_momentum", "component", "winding", "origin_distance"};
  if (const auto* p = std::get_if<ParentParams>(&c.model)) {
    auto r = winding_number(sample_curve([&](double k) { return parent_dvector(*p, k); }, c.cfg.samples));
    c.env.payload.add("bz", 0.0, 0, r.w, r.origin_distance);
    return;
  }
  const auto& spec = std::get<ChildSpec>(c.model);
  if (spec.orientation == Orientation::Parallel) {
    auto r = component_winding_parallel(spec, c.cfg.samples);
    c.env.payload.add("bz", 0.0, 1, r.w1.w, r.w1.origin_distance);
    c.env.payload.add("bz", 0.0, 2, r.w2.w, r.w2.origin_distance);
    return;
  }
  auto f = component_winding_perp(spec, c.cfg.Lx, c.cfg.Ly, c.cfg.samples, c.threads);
  const double nan = std::nan("");
  for (std::size_t i = 0; i < f.row_ky.size(); ++i) {
    c.env.payload.add("row", f.row_ky[i], 1, f.row_w1[i], nan);
    c.env.payload.add("row", f.row_ky[i], 2, f.row_w2[i], nan);
  }
  for (std::size_t i = 0; i < f.col_kx.size(); ++i) {
    c.env.payload.add("column", f.col_kx[i], 1, f.col_w1[i], nan);
    c.env.payload.add("column", f.col_kx[i], 2, f.col_w2[i], nan);
  }
  c.note("min_origin_distance", f.min_origin_distance);
  c.note("components_agree", f.components_agree());
}

void task_majorana_points(Context& c) {
  MajoranaPointSet set;
  int L = c.cfg.L;
  if (const auto* p = std::get_if<ParentParams>(&c.model)) set = kc_majorana_points(*p, L);
  else {
    const auto& s = std::get<ChildSpec>(c.model);
    if (s.orientation == Orientation::Parallel) {
      if (std::abs(s.p1.t + s.p2.t) > 1e-12 || std::abs(s.p1.delta - s.p2.delta) > 1e-12)
        throw config_error("[model] majorana-points for mkc-parallel needs t1 = -t2 and delta1 = delta2");
      set = mkc_parallel_majorana_points(s.p2.t, s.p2.delta, L);
    } else {
      set = perp_obc_gapless_points(s, c.cfg.Lx, c.cfg.Ly);
    }
  }
  auto lat = c.lattice();
  lat.bcx = lat.bcy = BoundaryCondition::Open;
  auto checks = parallel_map(set.size(), c.threads, [&](std::size_t i) {
    auto s = diagonalize(build_lattice(with_mu(c.model, set.mu_values[i], MuLink::Equal), lat), false);
    return std::pair<double, int>(min_abs(s.eigenvalues), degeneracy_count(s, 0.0, c.cfg.zero_tol * s.range()));
  });
  c.env.payload.columns = {"index", "mu", "degeneracy", "nullity", "family", "min_abs_energy", "zero_count"};
  for (std::size_t i = 0; i < set.size(); ++i)
    c.env.payload.add(i, set.mu_values[i], set.degeneracies[i], set.nullities[i], set.provenance[i], checks[i].first,
                      checks[i].second);
  c.note("points", set.size());
}

void task_quantization(Context& c) {
  const auto& spec = c.child("quantization");
  if (spec.orientation != Orientation::Parallel) throw config_error("[model] type: quantization needs mkc-parallel");
  double lo = -2.0 * std::abs(spec.p1.t), hi = 2.0 * std::abs(spec.p1.t);
  if (c.cfg.mu_grid.size() >= 2) {
    lo = c.cfg.mu_grid.front();
    hi = c.cfg.mu_grid.back();
  }
  auto roots = quantization_roots(spec, c.cfg.N, lo, hi, c.cfg.quant_grid);
  auto checks = parallel_map(roots.size(), c.threads, [&](std::size_t i) {
    ChildSpec s = spec;
    s.p1.mu = s.p2.mu = roots[i].mu;
    return min_abs(diagonalize(build_chain(s, ChainLattice{c.cfg.N, BoundaryCondition::Open}), false).eigenvalues);
  });
  c.env.payload.columns = {"index", "mu", "residual", "tangential", "lattice_min_abs_energy"};
  for (std::size_t i = 0; i < roots.size(); ++i)
    c.env.payload.add(i, roots[i].mu, roots[i].residual, roots[i].tangential, checks[i]);
  c.note("mu_lo", lo);
  c.note("mu_hi", hi);
}

void task_density(Context& c) {
  auto h = build_lattice(c.model, c.lattice());
  auto s = diagonalize(h, true);
  auto d = zero_mode_density(s, c.cfg.zero_tol * s.range());
  c.env.payload.columns = {"x", "y", "weight"};
  for (Eigen::Index site = 0; site < d.weight.size(); ++site)
    c.env.payload.add(static_cast<int>(site % d.Lx) + 1, static_cast<int>(site / d.Lx) + 1, d.weight(site));
  c.note("zero_modes", d.dimension);
  if (c.is_perp() && !d.empty()) {
    c.note("predicted_edges", to_string(perp_edge_prediction(std::get<ChildSpec>(c.model))));
    c.note("x_edge_weight", edge_weight(d, EdgeSet::XEdges));
    c.note("y_edge_weight", edge_weight(d, EdgeSet::YEdges));
    c.note("perimeter_weight", edge_weight(d, EdgeSet::Perimeter));
  }
}

void task_disorder(Context& c) {
  if (c.is_perp()) throw config_error("[model] type: disorder needs a chain model");
  RobustnessSweep sw;
  if (c.cfg.channels == "all") sw.channels = all_channels(c.is_parent());
  else {
    std::string item;
    for (char ch : c.cfg.channels + ",") {
      if (ch == ',') {
        if (!item.empty()) sw.channels.push_back(parse_channel(item));
        item.clear();
      } else if (ch != ' ') {
        item += ch;
      }
    }
  }
  sw.amplitudes = c.cfg.W;
  sw.realizations = c.cfg.realizations;
  sw.seed = c.cfg.seed;
  sw.mu_grid = c.cfg.mu_grid;
  sw.link = parse_link(c.cfg.mu_link);
  sw.L = c.cfg.L;
  auto rep = robustness_sweep(c.model, sw, c.threads);
  c.env.payload.columns = {"channel", "mu1", "mu2", "W", "nominal_zero_modes", "displacement", "threshold", "robust"};
  for (const auto& e : rep.entries)
    c.env.payload.add(e.channel, e.mu1, e.mu2, e.W, e.nominal_zero_modes, e.displacement, e.threshold, e.robust);
}

void add_classified(Table& t, const std::string& source, const MmzmClass& m) {
  for (std::size_t i = 0; i < m.states.size(); ++i) {
    const auto& s = m.states[i];
    t.add(source, i, to_string(s.label), s.entropy, s.overlap, s.vector(0).real(), s.vector(0).imag(),
          s.vector(1).real(), s.vector(1).imag(), s.vector(2).real(), s.vector(2).imag(), s.vector(3).real(),
          s.vector(3).imag());
  }
}

void task_classify(Context& c) {
  const auto& spec = c.child("classify");
  auto lat = c.lattice();
  const Edge edge = parse_edge(c.cfg.edge);
  auto ctx = mmzm_context(spec, lat.bcx, lat.bcy, edge);
  c.env.payload.columns = {"source", "index", "label", "entropy", "overlap", "c00_re", "c00_im", "c01_re",
                           "c01_im", "c10_re", "c10_im", "c11_re", "c11_im"};
  std::string expected;
  for (auto l : expected_table_states(ctx)) expected += (expected.empty() ? "" : " ") + to_string(l);
  c.note("expected", expected);

  Eigen::MatrixXcd analytic = localized_null_vectors(spec, lat.bcx, lat.bcy, edge);
  if (analytic.cols() > 0) {
    auto a = mmzm_classify(analytic, ctx);
    add_classified(c.env.payload, "analytic", a);
    c.note("analytic_matches_table", a.matches_table);
    c.note("analytic_dichotomy", a.dichotomy);
  }
  auto s = diagonalize(build_lattice(spec, lat), true);
  const char axis = spec.orientation == Orientation::Perpendicular && !ctx.contributes1() ? 'y' : 'x';
  Eigen::MatrixXcd numeric = edge_internal_vectors(s, axis, edge, c.cfg.zero_tol * s.range());
  c.note("lattice_edge_states", static_cast<int>(numeric.cols()));
  if (numeric.cols() > 0) {
    add_classified(c.env.payload, "lattice", mmzm_classify(numeric, ctx));
    if (analytic.cols() > 0) c.note("lattice_outside_analytic", subspace_excess(numeric, analytic));
  }
}

void task_symmetry_check(Context& c) {
  const auto& spec = c.child("symmetry-check");
  std::vector<Momentum> grid;
  const int n = c.cfg.k_points;
  for (int i = 0; i < n; ++i) {
    double kx = -pi + 2.0 * pi * (i + 0.5) / n;
    if (spec.orientation == Orientation::Parallel) grid.emplace_back(kx, 0.0);
    else
      for (int j = 0; j < n; ++j) grid.emplace_back(kx, -pi + 2.0 * pi * (j + 0.5) / n);
  }
  auto r = symmetry_check(spec, grid);
  c.env.payload.columns = {"symmetry", "residual", "tolerance", "ok"};
  c.env.payload.add("T", r.T, r.tol, r.T_ok);
  c.env.payload.add("P1", r.P1, r.tol, r.P1_ok);
  c.env.payload.add("C1", r.C1, r.tol, r.C1_ok);
  c.env.payload.add("P2", r.P2, r.tol, r.P2_ok);
  c.env.payload.add("C2", r.C2, r.tol, r.C2_ok);
  c.env.payload.add("U", r.U, r.tol, r.U_ok);
  c.note("grid_points", grid.size());
  c.note("all_ok", r.all_ok());
}

const char* regime_name(DiracRegime r) {
  switch (r) {
    case DiracRegime::Gapped: return "gapped";
    case DiracRegime::LinearFirst: return "linear-first";
    case DiracRegime::LinearSecond: return "linear-second";
    case DiracRegime::Quadratic: return "quadratic";
  }
  return "gapped";
}

void task_dirac(Context& c) {
  const auto& spec = c.child("dirac");
  if (spec.orientation == Orientation::Parallel) {
    auto d = dirac_expansion_parallel(spec);
    c.env.payload.columns = {"m1", "m2", "M", "velocity1", "velocity2", "quadratic", "regime"};
    c.env.payload.add(d.m1, d.m2, d.M, d.velocity1, d.velocity2, d.quadratic, regime_name(d.regime));
    return;
  }
  if (c.cfg.kx.size() != c.cfg.ky.size()) throw config_error("[task] kx, ky: lists must have equal length");
  c.env.payload.columns = {"kx", "ky", "energy", "vx", "vy", "one_sided"};
  for (std::size_t i = 0; i < c.cfg.kx.size(); ++i) {
    auto v = group_velocity_perp(spec, c.cfg.kx[i], c.cfg.ky[i]);
    c.env.payload.add(c.cfg.kx[i], c.cfg.ky[i], perp_expansion_energy(spec, c.cfg.kx[i], c.cfg.ky[i]), v.v(0), v.v(1),
                      v.one_sided);
  }
}

using TaskFn = void (*)(Context&);

const std::vector<std::pair<std::string, TaskFn>>& registry() {
  static const std::vector<std::pair<std::string, TaskFn>> r{
      {"spectrum", task_spectrum},       {"sweep-mu", task_sweep_mu},
      {"sweep-length", task_sweep_length}, {"wannier", task_wannier},
      {"winding", task_winding},         {"majorana-points", task_majorana_points},
      {"quantization", task_quantization}, {"density", task_density},
      {"disorder", task_disorder},       {"classify", task_classify},
      {"symmetry-check", task_symmetry_check}, {"dirac", task_dirac},
  };
  return r;
}

std::string utc_now() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

const char* artifact_version() { return MKC_VERSION; }

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

ResultEnvelope run_task(const RunConfig& cfg, unsigned threads) {
  TaskFn fn = nullptr;
  for (const auto& [name, f] : registry())
    if (name == cfg.task) fn = f;
  if (!fn) throw config_error("[task] name: unknown task '" + cfg.task + "'");
  ResultEnvelope env;
  env.version = artifact_version();
  env.task = cfg.task;
  env.config = cfg;
  env.timestamp = utc_now();
  env.threads = resolve_threads(threads > 0 ? threads : static_cast<unsigned>(cfg.threads));
  Context ctx{cfg, env.threads, model_of(cfg), env};
  auto start = std::chrono::steady_clock::now();
  try {
    fn(ctx);
  } catch (const numerical_error& e) {
    throw numerical_error(cfg.task + ": " + e.what());
  } catch (const precondition_error& e) {
    throw config_error(cfg.task + ": " + e.what());
  }
  env.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return env;
}

}  // namespace mkc
