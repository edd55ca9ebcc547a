// Convergence-study front end.
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "vemkit/study.hpp"

namespace {

constexpr int kInvalidConfig = 2;
constexpr int kSolverFailure = 3;

}  // namespace

int main(int argc, char** argv) {
  using namespace vemkit;
  CLI::App app{"Virtual element convergence studies on polygonal meshes"};
  std::string family = "pcc";
  std::string mesh = "quads";
  std::string stabilization = "dofi_dofi";
  std::string out;
  int order = 1;
  int refinements = 4;
  bool reduced = false;
  app.set_config("--config", "", "key=value file replacing command-line flags");
  app.add_option("--family", family, "pcc | elasticity | mcc | df_stokes | df_stokes_reduced");
  app.add_option("--order", order, "polynomial order k");
  app.add_option("--mesh", mesh, "quads | triangles | hanging_quads | file:<path>");
  app.add_option("--refinements", refinements, "number of meshes (cells per side 4, 8, 16, ...)");
  app.add_option("--stabilization", stabilization, "dofi_dofi | d_recipe");
  app.add_flag("--reduced", reduced, "reduced divergence-free space (df_stokes only)");
  app.add_option("--out", out, "output directory for CSV and VTK");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kInvalidConfig;
  }

  harness::StudyConfig config;
  try {
    config.family = harness::parse_family(family);
    if (reduced) {
      if (config.family != harness::Family::df_stokes && config.family != harness::Family::df_stokes_reduced)
        throw std::invalid_argument("--reduced applies to df_stokes only");
      config.family = harness::Family::df_stokes_reduced;
    }
    config.order = order;
    config.mesh = mesh;
    config.refinements = refinements;
    config.stabilization = pcc::parse_stabilization(stabilization);
    if (mesh.rfind("file:", 0) != 0) mesh::parse_structured_type(mesh);
    if (!out.empty()) {
      std::filesystem::create_directories(out);
      config.out = out;
    }
  } catch (const std::exception& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  }

  try {
    const auto record = harness::run_convergence_study(config);
    harness::write_csv(std::cout, record);
  } catch (const pde::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  }
  return 0;
}
