// Command line driver around the harness: mesh export, single solves, level
// sweeps, kernel diagnostics, norm-gap studies, eigenfunction dumps.
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "polyvib/assembly.hpp"
#include "polyvib/eigensolve.hpp"
#include "polyvib/harness.hpp"
#include "polyvib/rt0.hpp"

using namespace polyvib;

namespace {

struct CommonArgs {
  std::string config_file;
  std::vector<std::string> overrides;
  RunConfig resolve() const {
    RunConfig cfg;
    if (!config_file.empty()) cfg = load_config(config_file);
    return apply_overrides(cfg, overrides);
  }
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_file, "key = value config file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--set", args.overrides,
                  "override a config key, e.g. --set order=1 --set levels=0..3");
}

int pick_level(const RunConfig& cfg, int cli_level) {
  return cli_level >= 0 ? cli_level : cfg.levels.front();
}

StabilizationOptions stab_of(const RunConfig& cfg) {
  StabilizationOptions stab;
  stab.enabled = cfg.stabilized;
  stab.sigma = cfg.sigma_e;
  stab.mode = cfg.stab_mode == "raw" ? StabilizationOptions::Mode::Raw
                                     : StabilizationOptions::Mode::Projected;
  return stab;
}

struct Solved {
  Mesh mesh;
  DofMap dm;
  EigenResult r;
  Solved(const RunConfig& cfg, int level)
      : mesh(generate_mesh(cfg.mesh_family(), level, cfg.domain_shape())),
        dm(mesh, cfg.order) {
    const GlobalPencil gp = assemble_pencil(mesh, dm, stab_of(cfg));
    SolveOptions opts;
    opts.n_eigs = cfg.n_eigs;
    opts.zero_tol = cfg.zero_tol;
    opts.seed = cfg.seed;
    r = solve_pencil(gp, opts);
  }
};

std::string out_path(const RunConfig& cfg, const std::string& flag,
                     const char* fallback) {
  if (!flag.empty()) return flag;
  if (!cfg.outdir.empty()) {
    std::filesystem::create_directories(cfg.outdir);
    return (std::filesystem::path(cfg.outdir) / fallback).string();
  }
  return fallback;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acoustic eigenvalue studies on polygonal meshes"};
  app.require_subcommand(1);

  CommonArgs c_mesh, c_spec, c_conv, c_diag, c_gap, c_dump;
  int level = -1, index = 0, subdiv = 3;
  std::string out;

  CLI::App* mesh_cmd =
      app.add_subcommand("mesh", "generate a mesh, report quality, export it");
  add_common(mesh_cmd, c_mesh);
  mesh_cmd->add_option("--level", level, "refinement level (default: first)");
  mesh_cmd->add_option("--out", out, "mesh file to write");

  CLI::App* spec_cmd =
      app.add_subcommand("spectrum", "solve one level, print and save eigenvalues");
  add_common(spec_cmd, c_spec);
  spec_cmd->add_option("--level", level, "refinement level (default: first)");
  spec_cmd->add_option("--out", out, "eigenvalue csv to write");

  CLI::App* conv_cmd = app.add_subcommand(
      "converge", "sweep the configured levels into an error/rate table");
  add_common(conv_cmd, c_conv);

  CLI::App* diag_cmd = app.add_subcommand(
      "diagnose", "kernel dimensions and pencil classification of one level");
  add_common(diag_cmd, c_diag);
  diag_cmd->add_option("--level", level, "refinement level (default: first)");

  CLI::App* gap_cmd = app.add_subcommand(
      "normgap", "projected-mass vs Raviart-Thomas extremal quotients");
  add_common(gap_cmd, c_gap);

  CLI::App* dump_cmd = app.add_subcommand(
      "dumpfun", "sample the modulus of a projected eigenfunction");
  add_common(dump_cmd, c_dump);
  dump_cmd->add_option("--level", level, "refinement level (default: first)");
  dump_cmd->add_option("--index", index, "eigenfunction index, 0-based");
  dump_cmd->add_option("--subdiv", subdiv, "barycentric sample density");
  dump_cmd->add_option("--out", out, "sample csv to write");

  CLI11_PARSE(app, argc, argv);

  try {
    if (mesh_cmd->parsed()) {
      const RunConfig cfg = c_mesh.resolve();
      const int l = pick_level(cfg, level);
      const Mesh mesh = generate_mesh(cfg.mesh_family(), l, cfg.domain_shape());
      const QualityReport q = mesh.quality_report();
      std::printf("%s level %d: %d cells, %d edges, %d vertices\n",
                  cfg.family.c_str(), l, mesh.n_cells(), mesh.n_edges(),
                  mesh.n_vertices());
      std::printf("min edge ratio %.4f, min radius ratio %.4f\n",
                  q.min_edge_ratio, q.min_radius_ratio);
      const std::string path = out_path(cfg, out, "mesh.txt");
      mesh.save(path);
      std::printf("wrote %s\n", path.c_str());
    } else if (spec_cmd->parsed()) {
      const RunConfig cfg = c_spec.resolve();
      const int l = pick_level(cfg, level);
      const Solved s(cfg, l);
      std::printf("level %d, %d dofs, pencil %s, discarded %d zero modes\n", l,
                  static_cast<int>(s.r.vectors.rows()),
                  s.r.pencil_status().c_str(), s.r.n_zero_discarded);
      for (int i = 0; i < static_cast<int>(s.r.eigenvalues.size()); ++i)
        std::printf("%3d  lambda %-14.8g scaled %-12.8g residual %.2e\n", i,
                    s.r.eigenvalues[i], s.r.scaled[i], s.r.residuals[i]);
      const std::string path = out_path(cfg, out, "spectrum.csv");
      write_eigen_csv(path, s.r);
      std::printf("wrote %s\n", path.c_str());
    } else if (conv_cmd->parsed()) {
      RunConfig cfg = c_conv.resolve();
      if (cfg.outdir.empty()) cfg.outdir = "runs";
      const ConvergenceTable t = run_experiment(cfg);
      for (size_t i = 0; i < t.exact.size(); ++i) {
        std::printf("%-12.6f", t.exact[i]);
        for (size_t c = 0; c < t.levels.size(); ++c) {
          std::printf("  %.2e", t.rel_error(i, c));
          if (std::isfinite(t.rate(i, c)))
            std::printf(" (%.2f)", t.rate(i, c));
          else
            std::printf("       ");
          if (t.flagged(static_cast<int>(i), static_cast<int>(c)))
            std::printf("!");
        }
        std::printf("\n");
      }
      std::printf("tables in %s\n", cfg.outdir.c_str());
    } else if (diag_cmd->parsed()) {
      const RunConfig cfg = c_diag.resolve();
      const int l = pick_level(cfg, level);
      const Mesh mesh = generate_mesh(cfg.mesh_family(), l, cfg.domain_shape());
      const DofMap dm(mesh, cfg.order);
      const GlobalPencil gp = assemble_pencil(mesh, dm, stab_of(cfg));
      const KernelReport rep = kernel_report(gp);
      std::printf("level %d, %d dofs\n", l, gp.n);
      std::printf("dim ker A          %d\n", rep.dim_ker_A);
      std::printf("dim ker B          %d\n", rep.dim_ker_B);
      std::printf("dim intersection   %d\n", rep.dim_intersection);
      const std::string status =
          rep.dim_intersection > 0
              ? "singular(" + std::to_string(rep.dim_intersection) + ")"
              : "regular";
      std::printf("pencil             %s\n", status.c_str());
    } else if (gap_cmd->parsed()) {
      const RunConfig cfg = c_gap.resolve();
      std::printf("level  N     dofs   mu_min        mu_max\n");
      for (const NormGapRow& row : norm_gap_study(cfg.levels))
        std::printf("%-6d %-5d %-6d %-13.6e %.12f\n", row.level, row.n_grid,
                    row.dofs, row.mu_min, row.mu_max);
    } else if (dump_cmd->parsed()) {
      const RunConfig cfg = c_dump.resolve();
      const int l = pick_level(cfg, level);
      const Solved s(cfg, l);
      const std::string path = out_path(cfg, out, "eigenfunction.csv");
      dump_eigenfunction(path, s.mesh, s.dm, s.r, index, subdiv);
      std::printf("lambda %.8g scaled %.8g -> %s\n", s.r.eigenvalues[index],
                  s.r.scaled[index], path.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
