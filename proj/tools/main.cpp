#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace sketchfem::cli;

  CLI::App app{"Sketched reduced-basis FEM solver for -div(p grad u) = f"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads for benchmark runs (0 = all cores)");

  std::string mesh_path;
  std::string bundle_path;
  long long rho = 0;
  std::string forcing = "ball";
  auto* offline = app.add_subcommand("offline", "Build the offline bundle for a mesh");
  offline->add_option("--mesh", mesh_path, "Mesh file")->required();
  offline->add_option("--rho", rho, "Reduced basis size")->required();
  offline->add_option("--out", bundle_path, "Bundle output path")->required();
  offline->add_option("--forcing", forcing, "Forcing term: ball or one")->capture_default_str();

  std::string config_path;
  auto* online = app.add_subcommand("online", "Run a benchmark query stream");
  online->add_option("--config", config_path, "Run configuration file")->required();

  std::string filter;
  auto* verify = app.add_subcommand("verify", "Run the oracle self-checks on built-in meshes");
  verify->add_option("--filter", filter, "Only checks whose name contains this text");

  MeshSpec mesh_spec;
  std::string mesh_out;
  auto* mesh = app.add_subcommand("mesh", "Write a built-in mesh");
  mesh->add_option("--shape", mesh_spec.shape, "square, disk or cube")->capture_default_str();
  mesh->add_option("--cells", mesh_spec.cells, "Cells per side (rings for disk)")->capture_default_str();
  mesh->add_option("--jitter", mesh_spec.jitter, "Interior vertex jitter (square only)");
  mesh->add_option("--seed", mesh_spec.seed, "Jitter seed");
  mesh->add_option("--out", mesh_out, "Output mesh path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  return run_guarded(
      [&] {
        if (*offline) return cmd_offline(mesh_path, static_cast<sketchfem::Index>(rho), forcing, bundle_path, std::cout);
        if (*online) return cmd_online(config_path, threads, std::cout);
        if (*verify) return cmd_verify(std::cout, filter);
        return cmd_mesh(mesh_spec, mesh_out, std::cout);
      },
      std::cerr);
}
