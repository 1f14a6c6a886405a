#include "test_support.hpp"

#include "cli/commands.hpp"
#include "cli/config.hpp"

#include <sketchfem/bundle_io.hpp>
#include <sketchfem/error.hpp>
#include <sketchfem/mesh_builders.hpp>
#include <sketchfem/sketch.hpp>

#include <algorithm>

#include <gtest/gtest.h>

#include <sstream>

namespace sketchfem::cli {
namespace {

RunConfig parse(const std::string& text, const std::filesystem::path& base = {}) {
  std::istringstream in(text);
  return parse_config(in, base);
}

TEST(Config, ParsesAllKeys) {
  const RunConfig cfg = parse(
      "# benchmark\n"
      "mesh = m.txt\nbundle = /abs/b.bin\noutput = out.csv  # trailing comment\n"
      "forcing = one\nqueries = 7\nrho = 5\nepsilon = 0.2\nbeta = 0.8\nseed = 12\nthreads = 2\n"
      "field = lognormal_matern\nfield.nu = 2.5\nfield.m_diag = 0.04, 0.09\nfield.variance = 0.5\n"
      "field.kl_modes = 10\n",
      "/base");
  EXPECT_EQ(cfg.mesh_path, std::filesystem::path("/base/m.txt"));
  EXPECT_EQ(cfg.bundle_path, std::filesystem::path("/abs/b.bin"));
  EXPECT_EQ(cfg.output_csv_path, std::filesystem::path("/base/out.csv"));
  EXPECT_EQ(cfg.forcing, "one");
  EXPECT_EQ(cfg.queries, 7u);
  EXPECT_EQ(*cfg.rho, 5);
  EXPECT_EQ(cfg.seed, 12u);
  EXPECT_EQ(cfg.threads, 2u);
  EXPECT_EQ(cfg.field.kind, FieldKind::lognormal_matern);
  EXPECT_EQ(cfg.field.m_diag, (std::vector<double>{0.04, 0.09}));
  EXPECT_EQ(cfg.field.kl_modes, 10);
  EXPECT_EQ(cfg.sample_size(5), plan_sample_size(5, 0.2, 0.8));
}

TEST(Config, PlannedSampleSizeDefaultsToHalfBeta) {
  const RunConfig cfg = parse("mesh = m\nbundle = b\noutput = o\nepsilon = 0.1\n");
  EXPECT_EQ(cfg.sample_size(50), 993'011u);
}

TEST(Config, RejectsBadInput) {
  const std::string base = "mesh = m\nbundle = b\noutput = o\n";
  EXPECT_THROW(parse(base + "c = 10\ncolour = red\n"), ParseError);
  EXPECT_THROW(parse(base + "c = 10\nc = 11\n"), ParseError);
  EXPECT_THROW(parse(base + "c = ten\n"), ParseError);
  EXPECT_THROW(parse(base + "just text\n"), ParseError);
  EXPECT_THROW(parse(base), ValidationError);
  EXPECT_THROW(parse(base + "c = 10\nepsilon = 0.1\n"), ValidationError);
  EXPECT_THROW(parse(base + "epsilon = 1.5\n"), ValidationError);
  EXPECT_THROW(parse(base + "c = 10\nqueries = 0\n"), ValidationError);
  EXPECT_THROW(parse(base + "c = 10\nfield = gaussian\n"), ValidationError);
  EXPECT_THROW(parse("bundle = b\noutput = o\nc = 1\n"), ValidationError);
}

class CliFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    save_mesh(meshes::square(8, -1.0, 1.0, 0.2, 5), dir / "mesh.txt");
    std::ostringstream log;
    ASSERT_EQ(cmd_offline(dir / "mesh.txt", 6, "ball", dir / "bundle.bin", log), kExitOk);
  }

  void write_config(const std::string& extra = {}) {
    testing::write_file(dir / "run.cfg", "mesh = mesh.txt\nbundle = bundle.bin\noutput = out.csv\nforcing = ball\n"
                                         "queries = 2\nc = 3000\nseed = 17\nthreads = 1\n" + extra);
  }

  int guarded(const std::function<int()>& body, std::string* message = nullptr) {
    std::ostringstream err;
    const int code = run_guarded(body, err);
    if (message) *message = err.str();
    return code;
  }

  testing::TempDir dir;
};

std::string strip_time_column(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    const auto first = line.find(',');
    const auto second = line.find(',', first + 1);
    const auto third = line.find(',', second + 1);
    out += line.substr(0, second) + line.substr(third) + '\n';
  }
  return out;
}

TEST_F(CliFixture, OfflineBundleRoundTrips) {
  const OfflineBundle bundle = load_bundle(dir / "bundle.bin");
  EXPECT_EQ(bundle.rank(), 6);
  save_bundle(bundle, dir / "again.bin");
  EXPECT_EQ(testing::read_file(dir / "bundle.bin"), testing::read_file(dir / "again.bin"));
}

TEST_F(CliFixture, OfflineRejectsRankAboveInterior) {
  std::ostringstream log;
  EXPECT_EQ(guarded([&] { return cmd_offline(dir / "mesh.txt", 10000, "ball", dir / "x.bin", log); }),
            kExitValidation);
}

TEST_F(CliFixture, OnlineIsDeterministicModuloTiming) {
  write_config();
  std::ostringstream log;
  ASSERT_EQ(cmd_online(dir / "run.cfg", 0, log), kExitOk);
  const std::string first = testing::read_file(dir / "out.csv");
  ASSERT_EQ(cmd_online(dir / "run.cfg", 2, log), kExitOk);
  const std::string second = testing::read_file(dir / "out.csv");
  EXPECT_EQ(strip_time_column(first), strip_time_column(second));
  EXPECT_EQ(std::count(first.begin(), first.end(), '\n'), 4);
  EXPECT_NE(first.find("\nMEAN,"), std::string::npos);
}

TEST_F(CliFixture, OnlineRefusesEditedMesh) {
  write_config();
  save_mesh(meshes::square(8, -1.0, 1.0, 0.2, 6), dir / "mesh.txt");
  std::string message;
  std::ostringstream log;
  EXPECT_EQ(guarded([&] { return cmd_online(dir / "run.cfg", 0, log); }, &message), kExitValidation);
  EXPECT_NE(message.find("different mesh"), std::string::npos) << message;
}

TEST_F(CliFixture, OnlineNamesMissingBundle) {
  write_config();
  std::filesystem::remove(dir / "bundle.bin");
  std::string message;
  std::ostringstream log;
  EXPECT_EQ(guarded([&] { return cmd_online(dir / "run.cfg", 0, log); }, &message), kExitValidation);
  EXPECT_NE(message.find("bundle.bin"), std::string::npos) << message;
}

TEST_F(CliFixture, OnlineRejectsForcingAndRankMismatch) {
  testing::write_file(dir / "run.cfg", "mesh = mesh.txt\nbundle = bundle.bin\noutput = out.csv\nforcing = one\nc = 100\n");
  std::ostringstream log;
  EXPECT_EQ(guarded([&] { return cmd_online(dir / "run.cfg", 0, log); }), kExitValidation);
  write_config("rho = 7\n");
  EXPECT_EQ(guarded([&] { return cmd_online(dir / "run.cfg", 0, log); }), kExitValidation);
}

TEST_F(CliFixture, CorruptBundleIsValidationExit) {
  write_config();
  testing::write_file(dir / "bundle.bin", "SKFEM01");
  std::ostringstream log;
  EXPECT_EQ(guarded([&] { return cmd_online(dir / "run.cfg", 0, log); }), kExitValidation);
}

TEST(CliMesh, WritesBuiltInMeshes) {
  const testing::TempDir dir;
  std::ostringstream log;
  EXPECT_EQ(cmd_mesh({"cube", 2, 0.0, 0}, dir / "c.txt", log), kExitOk);
  EXPECT_EQ(load_mesh(dir / "c.txt").num_elements(), 48);
  std::ostringstream err;
  EXPECT_EQ(run_guarded([&] { return cmd_mesh({"torus", 2, 0.0, 0}, dir / "t.txt", log); }, err), kExitValidation);
}

}  // namespace
}  // namespace sketchfem::cli
