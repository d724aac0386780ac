#include "polyvib/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "polyvib/element.hpp"
#include "polyvib/rt0.hpp"

namespace polyvib {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<int> parse_levels(const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const size_t dots = item.find("..");
    if (dots != std::string::npos) {
      const int lo = std::stoi(item.substr(0, dots));
      const int hi = std::stoi(item.substr(dots + 2));
      if (hi < lo) throw std::invalid_argument("levels range is reversed: " + item);
      for (int l = lo; l <= hi; ++l) out.push_back(l);
    } else {
      out.push_back(std::stoi(item));
    }
  }
  if (out.empty()) throw std::invalid_argument("levels list is empty");
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("not a boolean: " + v);
}

// atomic replace: write next to the target, rename over it
void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp);
    f << content;
    if (!f.flush()) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string format_g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "domain") domain = value;
  else if (key == "a") a = std::stod(value);
  else if (key == "b") b = std::stod(value);
  else if (key == "family") family = value;
  else if (key == "levels") levels = parse_levels(value);
  else if (key == "order") order = std::stoi(value);
  else if (key == "sigma_e") sigma_e = std::stod(value);
  else if (key == "stabilized") stabilized = parse_bool(value);
  else if (key == "stab_mode") stab_mode = value;
  else if (key == "n_eigs") n_eigs = std::stoi(value);
  else if (key == "zero_tol") zero_tol = std::stod(value);
  else if (key == "seed") seed = std::stoull(value);
  else if (key == "outdir") outdir = value;
  else throw std::invalid_argument("unknown config key: " + key);
}

void RunConfig::validate() const {
  if (domain != "rect" && domain != "lshape")
    throw std::invalid_argument("domain must be rect or lshape");
  if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("sides must be positive");
  mesh_family_from_string(family);  // throws on unknown
  if (levels.empty()) throw std::invalid_argument("levels list is empty");
  for (int l : levels)
    if (l < 0 || l > 12) throw std::invalid_argument("level out of range: " + std::to_string(l));
  if (order < 0 || order > 6) throw std::invalid_argument("order out of range");
  if (sigma_e <= 0.0) throw std::invalid_argument("sigma_e must be positive");
  if (stab_mode != "projected" && stab_mode != "raw")
    throw std::invalid_argument("stab_mode must be projected or raw");
  if (n_eigs < 1) throw std::invalid_argument("n_eigs must be positive");
  if (zero_tol <= 0.0 || zero_tol >= 0.5)
    throw std::invalid_argument("zero_tol out of range");
}

std::string RunConfig::serialized() const {
  std::ostringstream o;
  o << "domain = " << domain << "\n";
  o << "a = " << format_g(a) << "\n";
  o << "b = " << format_g(b) << "\n";
  o << "family = " << family << "\n";
  o << "levels = ";
  for (size_t i = 0; i < levels.size(); ++i) o << (i ? "," : "") << levels[i];
  o << "\n";
  o << "order = " << order << "\n";
  o << "sigma_e = " << format_g(sigma_e) << "\n";
  o << "stabilized = " << (stabilized ? "true" : "false") << "\n";
  o << "stab_mode = " << stab_mode << "\n";
  o << "n_eigs = " << n_eigs << "\n";
  o << "zero_tol = " << format_g(zero_tol) << "\n";
  o << "seed = " << seed << "\n";
  o << "outdir = " << outdir << "\n";
  return o.str();
}

MeshFamily RunConfig::mesh_family() const { return mesh_family_from_string(family); }

Domain RunConfig::domain_shape() const {
  return domain == "lshape" ? Domain::lshape() : Domain::rectangle(a, b);
}

ExactSpectrum RunConfig::reference(int count) const {
  if (domain == "lshape") {
    ExactSpectrum s = lshape_reference();
    if (count < static_cast<int>(s.modes.size())) s.modes.resize(count);
    return s;
  }
  return exact_rectangle(a, b, count);
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key = value");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

RunConfig apply_overrides(RunConfig base, const std::vector<std::string>& items) {
  for (const auto& it : items) {
    const size_t eq = it.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("override must be key=value: " + it);
    base.set(trim(it.substr(0, eq)), trim(it.substr(eq + 1)));
  }
  base.validate();
  return base;
}

double rate(double e_prev, double e_cur) {
  if (!(e_prev > 0.0) || !(e_cur > 0.0))
    return std::numeric_limits<double>::quiet_NaN();
  return std::log2(e_prev / e_cur);
}

bool mismatch_flag(double lambda, const std::vector<double>& exact, int index) {
  for (size_t j = 0; j < exact.size(); ++j) {
    if (static_cast<int>(j) == index || exact[j] == exact[index]) continue;
    const double gap = std::abs(exact[j] - exact[index]);
    if (std::abs(lambda - exact[index]) - std::abs(lambda - exact[j]) >
        0.5 * gap)
      return true;
  }
  return false;
}

ConvergenceTable run_experiment(const RunConfig& cfg) {
  cfg.validate();
  const int n_levels = static_cast<int>(cfg.levels.size());
  const ExactSpectrum ref = cfg.reference(cfg.n_eigs);
  const int rows = std::min<int>(cfg.n_eigs, static_cast<int>(ref.modes.size()));

  ConvergenceTable t;
  const std::vector<double> lams = ref.lambdas();
  t.exact.assign(lams.begin(), lams.begin() + rows);
  t.levels = cfg.levels;
  t.lambda.setConstant(rows, n_levels, std::numeric_limits<double>::quiet_NaN());
  t.rel_error = t.lambda;
  t.rate = t.lambda;
  t.mismatch.assign(static_cast<size_t>(rows) * n_levels, 0);
  t.dofs.assign(n_levels, 0);
  t.status.assign(n_levels, "");

  for (int col = 0; col < n_levels; ++col) {
    const int level = cfg.levels[col];
    const std::string where =
        cfg.family + " level " + std::to_string(level) + ", ";
    auto stage = [&where](const char* name, auto&& fn) {
      try {
        return fn();
      } catch (const std::exception& e) {
        throw std::runtime_error(where + name + " stage: " + e.what());
      }
    };
    const Mesh mesh = stage("mesh", [&] {
      return generate_mesh(cfg.mesh_family(), level, cfg.domain_shape());
    });
    const DofMap dm = stage("dof", [&] { return DofMap(mesh, cfg.order); });
    StabilizationOptions stab;
    stab.enabled = cfg.stabilized;
    stab.sigma = cfg.sigma_e;
    stab.mode = cfg.stab_mode == "raw" ? StabilizationOptions::Mode::Raw
                                       : StabilizationOptions::Mode::Projected;
    const GlobalPencil gp =
        stage("assembly", [&] { return assemble_pencil(mesh, dm, stab); });
    t.dofs[col] = gp.n;
    SolveOptions opts;
    opts.n_eigs = rows;
    opts.zero_tol = cfg.zero_tol;
    opts.seed = cfg.seed;
    const EigenResult r = stage("solve", [&] { return solve_pencil(gp, opts); });
    t.status[col] = r.pencil_status();

    // sorted-order matching with multiplicity; both lists ascend
    for (int i = 0; i < rows; ++i) {
      const double lam = r.eigenvalues[i];
      t.lambda(i, col) = lam;
      t.rel_error(i, col) = std::abs(lam - t.exact[i]) / t.exact[i];
      if (mismatch_flag(lam, t.exact, i))
        t.mismatch[static_cast<size_t>(i) * n_levels + col] = 1;
      if (col > 0)
        t.rate(i, col) = rate(t.rel_error(i, col - 1), t.rel_error(i, col));
    }
  }

  if (!cfg.outdir.empty()) {
    std::filesystem::create_directories(cfg.outdir);
    const std::filesystem::path dir(cfg.outdir);
    write_file_atomic((dir / "config.txt").string(), cfg.serialized());
    write_table_csv((dir / "table.csv").string(), t);
    write_table_markdown((dir / "table.md").string(), t, cfg);
  }
  return t;
}

void write_table_csv(const std::string& path, const ConvergenceTable& t) {
  std::ostringstream o;
  o << "eig_index,exact,level,lambda,rel_error,rate\n";
  const int rows = static_cast<int>(t.exact.size());
  for (int i = 0; i < rows; ++i)
    for (size_t c = 0; c < t.levels.size(); ++c) {
      o << (i + 1) << ',' << format_g(t.exact[i]) << ',' << t.levels[c] << ','
        << format_g(t.lambda(i, c)) << ',' << format_g(t.rel_error(i, c)) << ',';
      if (std::isfinite(t.rate(i, c))) o << format_g(t.rate(i, c));
      o << '\n';
    }
  write_file_atomic(path, o.str());
}

void write_table_markdown(const std::string& path, const ConvergenceTable& t,
                          const RunConfig& cfg) {
  constexpr double kPi = 3.14159265358979323846;
  std::ostringstream o;
  o << "Relative error (rate), " << cfg.family << " order " << cfg.order;
  if (cfg.stabilized)
    o << ", stabilized sigma_e=" << cfg.sigma_e << " (" << cfg.stab_mode << ")";
  o << "\n\n";
  const bool scaled = cfg.domain != "lshape";
  o << (scaled ? "| scaled exact |" : "| exact |");
  for (size_t c = 0; c < t.levels.size(); ++c) o << " l=" << t.levels[c] << " |";
  o << "\n|---|";
  for (size_t c = 0; c < t.levels.size(); ++c) o << "---|";
  o << "\n";
  const int rows = static_cast<int>(t.exact.size());
  char buf[64];
  for (int i = 0; i < rows; ++i) {
    std::snprintf(buf, sizeof buf, "%.6f",
                  scaled ? t.exact[i] / (kPi * kPi) : t.exact[i]);
    o << "| " << buf << " |";
    for (size_t c = 0; c < t.levels.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.2e", t.rel_error(i, c));
      o << ' ' << buf;
      if (std::isfinite(t.rate(i, c))) {
        std::snprintf(buf, sizeof buf, " (%.2f)", t.rate(i, c));
        o << buf;
      }
      if (t.flagged(i, static_cast<int>(c))) o << " !";
      o << " |";
    }
    o << "\n";
  }
  o << "\ndofs:";
  for (size_t c = 0; c < t.levels.size(); ++c)
    o << " l=" << t.levels[c] << ":" << t.dofs[c];
  o << "\npencil:";
  for (size_t c = 0; c < t.levels.size(); ++c) o << ' ' << t.status[c];
  o << "\n";
  write_file_atomic(path, o.str());
}

std::vector<NormGapRow> norm_gap_study(const std::vector<int>& levels) {
  std::vector<NormGapRow> out;
  for (int level : levels) {
    Mesh mesh = generate_mesh(MeshFamily::Triangular, level,
                              Domain::rectangle(1.0, 1.0));
    DofMap dm(mesh, 0);
    GlobalPencil gp = assemble_pencil(mesh, dm);
    const Eigen::SparseMatrix<double> M = rt0_global_mass(mesh, dm);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(
        Eigen::MatrixXd(gp.B), Eigen::MatrixXd(M),
        Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    if (ges.info() != Eigen::Success)
      throw std::runtime_error("norm gap eigenproblem failed");
    NormGapRow row;
    row.level = level;
    row.n_grid = static_cast<int>(std::lround(std::sqrt(mesh.n_cells() / 2.0)));
    row.dofs = gp.n;
    row.mu_min = ges.eigenvalues().minCoeff();
    row.mu_max = ges.eigenvalues().maxCoeff();
    out.push_back(row);
  }
  return out;
}

std::pair<Eigen::VectorXd, std::vector<uint8_t>> gap_witness_field(
    const Mesh& mesh, const DofMap& dm) {
  if (mesh.family != MeshFamily::Triangular ||
      mesh.domain.kind != DomainKind::Rectangle || mesh.domain.a != 1.0 ||
      mesh.domain.b != 1.0)
    throw std::invalid_argument(
        "witness field needs the structured triangulation of the unit square");
  if (dm.degree() != 0)
    throw std::invalid_argument("witness field is an order-0 construction");

  const int N = static_cast<int>(std::lround(std::sqrt(mesh.n_cells() / 2.0)));
  const double h = 1.0 / N;
  // per carrying triangle the field is s * amp * (x - centroid): its moment
  // against P_0 vanishes, so the plain projected mass sees nothing, while its
  // squared L2 mass is amp^2 |T| (d_x^2 + d_y^2 second moments) = 1/(3 N^2)
  const double amp = std::sqrt(6.0) / h;

  Eigen::VectorXd full = Eigen::VectorXd::Zero(dm.n_full());
  std::vector<uint8_t> carrying(mesh.n_cells(), 0);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    Vec2 centroid{0.0, 0.0};
    double ymin = 2.0;
    for (int v : mesh.cells[c]) {
      centroid.x += mesh.vertices[v].x / 3.0;
      centroid.y += mesh.vertices[v].y / 3.0;
      ymin = std::min(ymin, mesh.vertices[v].y);
    }
    const int i = static_cast<int>(std::floor(centroid.x * N));
    const int j = static_cast<int>(std::floor(centroid.y * N));
    if (i < 1 || i > N - 2 || j < 1 || j > N - 2) continue;
    carrying[c] = 1;
    // +1 for the triangle carrying the square's bottom edge, -1 for its twin;
    // that choice makes the normal fluxes of neighbors agree across edges
    int on_bottom = 0;
    for (int v : mesh.cells[c])
      if (std::abs(mesh.vertices[v].y - j * h) < 1e-12) ++on_bottom;
    const double s = on_bottom == 2 ? 1.0 : -1.0;
    for (const CellEdgeRef& er : mesh.cell_edges[c]) {
      const Edge& e = mesh.edges[er.edge];
      const Vec2 mid{0.5 * (mesh.vertices[e.a].x + mesh.vertices[e.b].x),
                     0.5 * (mesh.vertices[e.a].y + mesh.vertices[e.b].y)};
      const double vn = s * amp *
                        ((mid.x - centroid.x) * e.normal.x +
                         (mid.y - centroid.y) * e.normal.y);
      const double dof = vn * std::sqrt(e.length);
      const int slot = dm.edge_dof(er.edge, 0);
      if (full[slot] != 0.0 && std::abs(full[slot] - dof) > 1e-9 * std::abs(dof))
        throw std::runtime_error("witness field fluxes disagree across an edge");
      full[slot] = dof;
    }
  }
  return {std::move(full), std::move(carrying)};
}

void dump_eigenfunction(const std::string& path, const Mesh& mesh,
                        const DofMap& dm, const EigenResult& r, int index,
                        int subdiv) {
  if (index < 0 || index >= static_cast<int>(r.eigenvalues.size()))
    throw std::out_of_range("eigenfunction index out of range");
  if (subdiv < 1) throw std::invalid_argument("subdiv must be positive");
  const Eigen::VectorXd full = dm.expand(r.vectors.col(index));

  std::ostringstream o;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "# eigenfunction index=%d lambda=%.17g pencil_status=%s\n",
                index, r.eigenvalues[index], r.pencil_status().c_str());
  o << buf << "cell,x,y,ux,uy,modulus\n";
  for (int c = 0; c < mesh.n_cells(); ++c) {
    ElementOperators ops = build_element(mesh, c, dm.degree());
    const std::vector<int> gdofs = dm.cell_full_dofs(c);
    Eigen::VectorXd loc(gdofs.size());
    for (size_t q = 0; q < gdofs.size(); ++q) loc[q] = full[gdofs[q]];

    Vec2 centroid{0.0, 0.0};
    const int nv = static_cast<int>(mesh.cells[c].size());
    for (int v : mesh.cells[c]) {
      centroid.x += mesh.vertices[v].x / nv;
      centroid.y += mesh.vertices[v].y / nv;
    }
    for (int v = 0; v < nv; ++v) {
      const Vec2 p0 = mesh.vertices[mesh.cells[c][v]];
      const Vec2 p1 = mesh.vertices[mesh.cells[c][(v + 1) % nv]];
      for (int bi = 0; bi <= subdiv; ++bi)
        for (int bj = 0; bi + bj <= subdiv; ++bj) {
          const double w0 = static_cast<double>(bi) / subdiv;
          const double w1 = static_cast<double>(bj) / subdiv;
          const double w2 = 1.0 - w0 - w1;
          // skip fan-interior duplicates of the shared centroid vertex
          if (w2 == 1.0 && v > 0) continue;
          const Vec2 p{w0 * p0.x + w1 * p1.x + w2 * centroid.x,
                       w0 * p0.y + w1 * p1.y + w2 * centroid.y};
          const Vec2 u = ops.eval_projection(loc, p);
          std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                        c, p.x, p.y, u.x, u.y, std::hypot(u.x, u.y));
          o << buf;
        }
    }
  }
  write_file_atomic(path, o.str());
}

}  // namespace polyvib
