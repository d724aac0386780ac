#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "doctest.h"
#include "polyvib/element.hpp"
#include "polyvib/harness.hpp"
#include "polyvib/rt0.hpp"

using namespace polyvib;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("polyvib_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("config round trip, overrides, validation") {
  RunConfig cfg;
  cfg.family = "triangular";
  cfg.levels = {1, 2, 3};
  cfg.order = 2;
  cfg.outdir = "";

  TempDir dir("config");
  const auto file = dir.path / "run.cfg";
  {
    std::ofstream f(file);
    f << "# sample run\n" << cfg.serialized() << "\n\n";
  }
  const RunConfig back = load_config(file.string());
  CHECK(back.serialized() == cfg.serialized());

  const RunConfig over = apply_overrides(cfg, {"order=1", "levels=0..2,4", "b=1.3"});
  CHECK(over.order == 1);
  CHECK(over.levels == std::vector<int>{0, 1, 2, 4});
  CHECK(over.b == 1.3);
  // the base stays untouched
  CHECK(cfg.order == 2);

  CHECK_THROWS(apply_overrides(cfg, {"no_such_key=1"}));
  CHECK_THROWS(apply_overrides(cfg, {"domain=disk"}));
  CHECK_THROWS(apply_overrides(cfg, {"zero_tol=0.9"}));
  CHECK_THROWS(apply_overrides(cfg, {"levels=3..1"}));
  CHECK_THROWS(apply_overrides(cfg, {"stab_mode=diagonal"}));
  CHECK_THROWS(apply_overrides(cfg, {"order"}));
}

TEST_CASE("rate helper") {
  CHECK(rate(4e-2, 1e-2) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(rate(1e-3, 1e-3) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  // consecutive refinements of the first benchmark row print as 1.89
  CHECK(rate(6.72e-4, 1.81e-4) == doctest::Approx(1.89).epsilon(0.005));
  CHECK(std::isnan(rate(0.0, 1e-3)));
  CHECK(std::isnan(rate(1e-3, 0.0)));
}

TEST_CASE("mismatch rule flags values parked at the wrong reference") {
  const std::vector<double> exact = {1.0, 2.0, 10.0};
  CHECK(mismatch_flag(1.9, exact, 0));       // clearly a 2
  CHECK(!mismatch_flag(1.4, exact, 0));      // ambiguous, not flagged
  CHECK(!mismatch_flag(5.0, exact, 1));      // nearer its own reference side
  CHECK(mismatch_flag(9.5, exact, 1));
  const std::vector<double> pair = {9.869604, 9.869604};
  CHECK(!mismatch_flag(9.87, pair, 0));      // equal references never flag
  CHECK(!mismatch_flag(9.87, pair, 1));
}

TEST_CASE("square sweep reproduces the known first-eigenvalue errors") {
  RunConfig cfg;
  cfg.family = "square";
  cfg.levels = {1, 2, 3, 4};
  cfg.n_eigs = 7;

  const ConvergenceTable t = run_experiment(cfg);
  REQUIRE(t.exact.size() == 7);
  REQUIRE(t.levels.size() == 4);

  const double expected[] = {2.63e-2, 6.46e-3, 1.61e-3, 4.02e-4};
  for (int c = 0; c < 4; ++c) {
    CHECK(t.rel_error(0, c) ==
          doctest::Approx(expected[c]).epsilon(0.05));
    CHECK(t.status[c] == "regular");
    // the first three modes share one error curve and never drift; the upper
    // ones are allowed to flag on the coarsest level, where their error is
    // larger than the reference spacing
    for (int i = 0; i < 3; ++i) CHECK(!t.flagged(i, c));
    if (c > 0)
      for (int i = 3; i < 7; ++i) CHECK(!t.flagged(i, c));
  }
  for (int c = 1; c < 4; ++c)
    CHECK(t.rate(0, c) == doctest::Approx(2.0).epsilon(0.025));
  // level 4 exceeds the dense cutoff, so the iterative path produced it
  CHECK(t.dofs[3] > 1500);
}

TEST_CASE("lshape table rows follow the reference list") {
  RunConfig cfg;
  cfg.domain = "lshape";
  cfg.family = "triangular";
  cfg.levels = {0, 1};
  cfg.n_eigs = 7;  // clipped to the five tabulated references

  const ConvergenceTable t = run_experiment(cfg);
  REQUIRE(t.exact.size() == 5);
  CHECK(t.exact[2] == t.exact[3]);
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < 5; ++i) {
      CHECK(t.rel_error(i, c) < (c == 0 ? 0.15 : 0.06));
      CHECK(!t.flagged(i, c));
    }
  // the corner mode converges at its singular rate, not the regular one
  CHECK(t.rate(0, 1) == doctest::Approx(4.0 / 3.0).epsilon(0.06));
  // the doubled reference gets two distinct computed values, each within a
  // quantization-dominated distance, and no double assignment can occur by
  // construction of the sorted matching
  CHECK(t.lambda(2, 1) != t.lambda(3, 1));
}

TEST_CASE("witness field kills the plain mass form and carries the predicted weight") {
  for (int level : {0, 1}) {
    const int N = 4 << level;
    Mesh mesh = generate_mesh(MeshFamily::Triangular, level, Domain::rectangle(1.0, 1.0));
    DofMap dm(mesh, 0);
    const auto [full, carrying] = gap_witness_field(mesh, dm);

    int n_carrying = 0;
    double mass_rt = 0.0, mass_plain = 0.0;
    for (int c = 0; c < mesh.n_cells(); ++c) {
      if (!carrying[c]) continue;
      ++n_carrying;
      const std::vector<int> gd = dm.cell_full_dofs(c);
      Eigen::VectorXd loc(gd.size());
      for (size_t q = 0; q < gd.size(); ++q) loc[q] = full[gd[q]];
      mass_rt += loc.dot(rt0_local_mass(mesh, c) * loc);
      ElementOperators ops = build_element(mesh, c, 0);
      mass_plain += loc.dot(ops.M0 * loc);
    }
    CHECK(n_carrying == 2 * (N - 2) * (N - 2));
    const double predicted = 2.0 * (N - 2) * (N - 2) / (3.0 * N * N);
    CHECK(mass_rt == doctest::Approx(predicted).epsilon(1e-13));
    // the whole point: the projected mass form does not see the field
    CHECK(std::abs(mass_plain) < 1e-13 * mass_rt);
  }
  // N=4 evaluates to exactly one sixth
  Mesh m4 = generate_mesh(MeshFamily::Triangular, 0, Domain::rectangle(1.0, 1.0));
  DofMap dm4(m4, 0);
  const auto [full4, carrying4] = gap_witness_field(m4, dm4);
  double mass4 = 0.0;
  for (int c = 0; c < m4.n_cells(); ++c) {
    if (!carrying4[c]) continue;
    const std::vector<int> gd = dm4.cell_full_dofs(c);
    Eigen::VectorXd loc(gd.size());
    for (size_t q = 0; q < gd.size(); ++q) loc[q] = full4[gd[q]];
    mass4 += loc.dot(rt0_local_mass(m4, c) * loc);
  }
  CHECK(mass4 == doctest::Approx(1.0 / 6.0).epsilon(1e-13));

  Mesh hexm = generate_mesh(MeshFamily::Hexagonal, 0, Domain::rectangle(1.0, 1.0));
  DofMap hdm(hexm, 0);
  CHECK_THROWS(gap_witness_field(hexm, hdm));
}

TEST_CASE("norm gap widens under refinement") {
  const auto rows = norm_gap_study({0, 1});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].n_grid == 4);
  CHECK(rows[1].n_grid == 8);
  for (const auto& r : rows) {
    CHECK(r.mu_min > 0.0);
    CHECK(r.mu_max <= 1.0 + 1e-10);
  }
  CHECK(rows[1].mu_min < rows[0].mu_min);
}

TEST_CASE("eigenfunction dump matches the analytic first mode") {
  RunConfig cfg;
  cfg.family = "square";
  cfg.levels = {3};
  cfg.order = 1;
  cfg.n_eigs = 1;
  cfg.validate();

  Mesh mesh = generate_mesh(cfg.mesh_family(), 3, cfg.domain_shape());
  DofMap dm(mesh, 1);
  GlobalPencil gp = assemble_pencil(mesh, dm);
  SolveOptions opts;
  opts.n_eigs = 1;
  const EigenResult r = solve_pencil(gp, opts);

  CHECK_THROWS(dump_eigenfunction("/nonexistent/x.csv", mesh, dm, r, 5));

  TempDir dir("dump");
  const auto file = dir.path / "mode0.csv";
  dump_eigenfunction(file.string(), mesh, dm, r, 0, 2);

  std::ifstream f(file);
  std::string line;
  std::getline(f, line);
  CHECK(line.find("# eigenfunction index=0") == 0);
  std::getline(f, line);
  CHECK(line == "cell,x,y,ux,uy,modulus");

  // b_h-normalized discrete mode against the L2-normalized analytic one
  const double b = 1.1;
  const double norm = 1.0 / std::sqrt(2.0 * b);
  double peak = 0.0, worst = 0.0;
  int n_rows = 0, n_compared = 0;
  std::vector<std::array<double, 3>> rows;
  while (std::getline(f, line)) {
    double x, y, ux, uy, mod;
    int cell;
    REQUIRE(std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%lf,%lf", &cell, &x, &y,
                        &ux, &uy, &mod) == 6);
    ++n_rows;
    rows.push_back({x, y, mod});
    peak = std::max(peak, std::abs(std::sin(3.14159265358979323846 * y / b) / b) / norm);
  }
  CHECK(n_rows > 1000);
  for (const auto& rr : rows) {
    const double ref =
        std::abs(std::sin(3.14159265358979323846 * rr[1] / b) / b) / norm;
    if (ref < 0.3 * peak) continue;  // skip near-nodal points
    ++n_compared;
    worst = std::max(worst, std::abs(rr[2] - ref) / ref);
  }
  CHECK(n_compared > 200);
  CHECK(worst < 0.05);

  // eliminated wall dofs: the expanded vector is exactly zero there
  CHECK(max_constrained_dof(dm, dm.expand(r.vectors.col(0))) == 0.0);
}

TEST_CASE("identical configs produce byte-identical outputs") {
  TempDir d1("det1"), d2("det2");
  RunConfig cfg;
  cfg.family = "voronoi";  // exercises the seeded generator path
  cfg.levels = {0, 1};
  cfg.n_eigs = 5;

  cfg.outdir = d1.path.string();
  run_experiment(cfg);
  cfg.outdir = d2.path.string();
  run_experiment(cfg);

  CHECK(slurp(d1.path / "table.csv") == slurp(d2.path / "table.csv"));
  CHECK(slurp(d1.path / "table.md") == slurp(d2.path / "table.md"));
  // configs differ only in the outdir line
  std::string c1 = slurp(d1.path / "config.txt"), c2 = slurp(d2.path / "config.txt");
  c1.erase(c1.find("outdir"));
  c2.erase(c2.find("outdir"));
  CHECK(c1 == c2);
  CHECK(slurp(d1.path / "table.csv").substr(0, 43) ==
        "eig_index,exact,level,lambda,rel_error,rate");
}
