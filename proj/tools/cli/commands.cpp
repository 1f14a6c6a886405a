#include "cli/commands.hpp"

#include "cli/config.hpp"
#include "verify/checks.hpp"

#include <sketchfem/assembly.hpp>
#include <sketchfem/bundle_io.hpp>
#include <sketchfem/diagnostics.hpp>
#include <sketchfem/error.hpp>
#include <sketchfem/fields.hpp>
#include <sketchfem/mesh.hpp>
#include <sketchfem/mesh_builders.hpp>
#include <sketchfem/reduction.hpp>
#include <sketchfem/sketch.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace sketchfem::cli {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fixed(double v, const char* format = "%.6g") {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, format, v);
  return buffer;
}

}  // namespace

int cmd_offline(const std::filesystem::path& mesh_path, Index rho, const std::string& forcing,
                const std::filesystem::path& bundle_path, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const Mesh mesh = load_mesh(mesh_path);
  const GradientOperator op = gradient_operator(mesh);
  const Vector f = forcing_by_name(mesh, forcing);
  if (rho < 1 || rho > mesh.num_interior()) {
    throw ValidationError("rho must lie in [1, n] with n = " + std::to_string(mesh.num_interior()) + ", got " +
                          std::to_string(rho));
  }
  const OfflineBundle bundle = build_offline_bundle(mesh, op, rho, f, mesh_fingerprint(mesh));
  save_bundle(bundle, bundle_path);

  out << "mesh: d=" << mesh.dim() << " k=" << mesh.num_elements() << " n=" << mesh.num_interior()
      << " kd=" << op.num_rows() << '\n';
  out << "eigenvalues: [" << fixed(bundle.eigenvalues[0]) << ", " << fixed(bundle.eigenvalues[rho - 1]) << "]\n";
  out << "sum of leverage scores: " << fixed(bundle.leverage.sum(), "%.12g") << " (rho = " << rho << ")\n";
  out << "offline time: " << fixed(seconds_since(start), "%.3f") << " s\n";
  out << "bundle written to " << bundle_path.string() << '\n';
  return kExitOk;
}

int cmd_online(const std::filesystem::path& config_path, unsigned threads, std::ostream& out) {
  const RunConfig cfg = load_config(config_path);
  const Mesh mesh = load_mesh(cfg.mesh_path);
  const OfflineBundle bundle = load_bundle(cfg.bundle_path);
  if (mesh_fingerprint(mesh) != bundle.mesh_fingerprint) {
    throw ValidationError("bundle '" + cfg.bundle_path.string() + "' was built for a different mesh than '" +
                          cfg.mesh_path.string() + "'");
  }
  if (cfg.rho && *cfg.rho != bundle.rank()) {
    throw ValidationError("config rho = " + std::to_string(*cfg.rho) + " but the bundle has rank " +
                          std::to_string(bundle.rank()));
  }
  const GradientOperator op = gradient_operator(mesh);
  const Vector b = assemble_load(mesh, forcing_by_name(mesh, cfg.forcing)).b;
  const Vector expected_load = reduced_load(bundle.basis, b);
  if ((expected_load - bundle.reduced_load).norm() > 1e-10 * std::max(1.0, expected_load.norm())) {
    throw ValidationError("bundle reduced load does not match forcing '" + cfg.forcing + "'");
  }

  const OnlineSolver solver(op, bundle);
  const FieldGenerator fields(mesh, cfg.field);
  BenchmarkOptions options;
  options.queries = cfg.queries;
  options.c = cfg.sample_size(bundle.rank());
  options.seed = cfg.seed;
  options.beta = cfg.beta;
  if (cfg.epsilon) options.epsilon = *cfg.epsilon;
  options.threads = threads != 0 ? threads : cfg.threads;

  const BenchmarkReport report = run_benchmark(solver, op, fields, b, options);
  {
    std::ofstream csv(cfg.output_csv_path, std::ios::trunc);
    if (!csv) throw ValidationError("cannot write '" + cfg.output_csv_path.string() + "'");
    write_csv(csv, report);
    if (!csv) throw ValidationError("failed writing '" + cfg.output_csv_path.string() + "'");
  }
  out << "field " << to_string(cfg.field.kind) << ", " << cfg.queries << " queries, c = " << options.c << '\n';
  write_summary(out, report);
  out << "report written to " << cfg.output_csv_path.string() << '\n';
  return kExitOk;
}

int cmd_verify(std::ostream& out, const std::string& filter) {
  return verify::run_checks(out, filter) == 0 ? kExitOk : kExitNumerical;
}

int cmd_mesh(const MeshSpec& spec, const std::filesystem::path& out_path, std::ostream& out) {
  if (spec.cells < 1) throw ValidationError("cells must be positive");
  Mesh mesh = [&] {
    if (spec.shape == "square") return meshes::square(spec.cells, 0.0, 1.0, spec.jitter, spec.seed);
    if (spec.shape == "disk") return meshes::disk(spec.cells);
    if (spec.shape == "cube") return meshes::cube(spec.cells);
    throw ValidationError("unknown mesh shape '" + spec.shape + "' (expected square, disk or cube)");
  }();
  save_mesh(mesh, out_path);
  out << spec.shape << " mesh: d=" << mesh.dim() << " vertices=" << mesh.num_vertices()
      << " elements=" << mesh.num_elements() << " interior=" << mesh.num_interior() << " -> " << out_path.string()
      << '\n';
  return kExitOk;
}

int run_guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace sketchfem::cli
