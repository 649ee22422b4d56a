#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <sstream>

#include "polyrecon/cli.hpp"
#include "polyrecon/fixtures.hpp"
#include "polyrecon/io.hpp"
#include "polyrecon/reconstruct.hpp"

using namespace polyrecon;
namespace fs = std::filesystem;
namespace fx = polyrecon::fixtures;

namespace {

struct Workspace {
  fs::path dir;
  std::string out, err;

  Workspace() {
    std::random_device rd;
    dir = fs::temp_directory_path() / ("polyrecon_cli_" + std::to_string(rd()));
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }

  std::string path(const std::string& name) const { return (dir / name).string(); }

  int run(std::vector<std::string> args) {
    std::ostringstream o, e;
    const int code = cli::run(args, o, e);
    out = o.str();
    err = e.str();
    return code;
  }
};

std::size_t data_rows(const std::string& csv) {
  const std::string text = read_text(csv);
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) - 1;
}

}  // namespace

TEST_CASE("fixture listing and export") {
  Workspace w;
  CHECK(w.run({"fixture", "--list"}) == cli::kOk);
  CHECK(w.out.find("deformed-octahedron") != std::string::npos);
  REQUIRE(w.run({"fixture", "hexagon", "--output", w.path("hex.json")}) == cli::kOk);
  const Polytope hex = read_polytope(w.path("hex.json"));
  CHECK(hex.vertices() == fx::hexagon().vertices());
  CHECK(w.run({"fixture", "dodecahedron", "--output", w.path("x.json")}) == cli::kValidation);
}

TEST_CASE("simulate writes one row per sample") {
  Workspace w;
  REQUIRE(w.run({"fixture", "triangle", "--output", w.path("tri.json")}) == cli::kOk);
  REQUIRE(w.run({"simulate", "--poly", w.path("tri.json"), "--output", w.path("tri.csv")}) ==
          cli::kValidation);
  REQUIRE(w.run({"simulate", "--poly", w.path("tri.json"), "--output", w.path("scan.csv")}) ==
          cli::kOk);
  CHECK(data_rows(w.path("scan.csv")) == 512);
  CHECK(fs::exists(w.path("scan.json")));
  CHECK(read_pattern(w.path("scan.csv")).surface.kind == SurfaceKind::semicircle2d);

  REQUIRE(w.run({"simulate", "--fixture", "tetrahedron", "--output", w.path("a.csv"),
                 "--threads", "1"}) == cli::kOk);
  CHECK(data_rows(w.path("a.csv")) == 65536);
  REQUIRE(w.run({"simulate", "--fixture", "tetrahedron", "--output", w.path("b.csv"),
                 "--threads", "4"}) == cli::kOk);
  CHECK(read_text(w.path("a.csv")) == read_text(w.path("b.csv")));
  CHECK(read_text(w.path("a.json")) == read_text(w.path("b.json")));

  REQUIRE(w.run({"simulate", "--fixture", "tetrahedron", "--surface", "ewald", "--axis", "0",
                 "--grid", "10,12", "--output", w.path("e.csv")}) == cli::kOk);
  CHECK(data_rows(w.path("e.csv")) == 120);
}

TEST_CASE("tetrahedron through the separate commands") {
  Workspace w;
  REQUIRE(w.run({"simulate", "--fixture", "tetrahedron", "--output", w.path("tet.csv")}) ==
          cli::kOk);
  REQUIRE(w.run({"detect", "--pattern", w.path("tet.csv"), "--theta", "0.13", "--output",
                 w.path("ind.json")}) == cli::kOk);
  CHECK(read_indicator_set(w.path("ind.json")).size() == 4);
  REQUIRE(w.run({"reconstruct", "--input", w.path("ind.json"), "--output", w.path("rec.json"),
                 "--obj", w.path("rec.obj")}) == cli::kOk);
  CHECK(w.out.rfind("1 solution\n", 0) == 0);
  const Polytope rec = read_polytope(w.path("rec.json"));
  CHECK(cli::aligned_vertex_error(fx::regular_tetrahedron(), rec) <= 0.02);
  CHECK(fs::exists(w.path("rec.obj")));
}

TEST_CASE("hexagon through the separate commands") {
  Workspace w;
  REQUIRE(w.run({"simulate", "--fixture", "hexagon", "--output", w.path("hex.csv")}) == cli::kOk);
  REQUIRE(w.run({"detect", "--pattern", w.path("hex.csv"), "--theta", "0.27", "--window", "11",
                 "--output", w.path("ind.json")}) == cli::kOk);
  CHECK(read_indicator_set(w.path("ind.json")).size() == 6);
  REQUIRE(w.run({"reconstruct", "--input", w.path("ind.json"), "--tol", "0.05", "--output",
                 w.path("rec.json"), "--svg", w.path("rec.svg")}) == cli::kOk);
  const Polytope rec = read_polytope(w.path("rec.json"));
  CHECK(volume(rec) == doctest::Approx(volume(fx::hexagon())).epsilon(0.05));
  CHECK(read_text(w.path("rec.svg")).find("<polygon") != std::string::npos);
}

TEST_CASE("ambiguous indicators write every solution") {
  Workspace w;
  REQUIRE(w.run({"fixture", "ambiguous-hexagon", "--output", w.path("a.json"), "--indicators",
                 w.path("ind.json")}) == cli::kOk);
  REQUIRE(w.run({"reconstruct", "--input", w.path("ind.json"), "--tol", "1e-9", "--output",
                 w.path("sol.json")}) == cli::kOk);
  CHECK(w.out.rfind("2 solutions\n", 0) == 0);
  CHECK(fs::exists(w.path("sol_1.json")));
  CHECK(fs::exists(w.path("sol_2.json")));
  CHECK_FALSE(fs::exists(w.path("sol_3.json")));
}

TEST_CASE("exit codes") {
  Workspace w;
  SUBCASE("usage") {
    CHECK(w.run({"simulate", "--no-such-flag"}) == cli::kValidation);
    CHECK(w.run({}) == cli::kValidation);
    CHECK(w.run({"--help"}) == cli::kOk);
    CHECK(w.run({"simulate", "--fixture", "hexagon", "--lambda", "-1", "--output",
                 w.path("p.csv")}) == cli::kValidation);
    CHECK(w.run({"simulate", "--fixture", "hexagon", "--surface", "hemisphere", "--output",
                 w.path("p.csv")}) == cli::kValidation);
  }
  SUBCASE("empty detection") {
    REQUIRE(w.run({"simulate", "--fixture", "triangle", "--output", w.path("t.csv")}) == cli::kOk);
    CHECK(w.run({"detect", "--pattern", w.path("t.csv"), "--theta", "100", "--output",
                 w.path("ind.json")}) == cli::kEmptyDetection);
    CHECK(read_indicator_set(w.path("ind.json")).empty());
  }
  SUBCASE("infeasible closure") {
    write_text(w.path("open.json"),
               R"({"dim": 2, "entries": [{"normal": [1, 0], "area": 1}, {"normal": [0, 1], "area": 1},)"
               R"( {"normal": [0.6, 0.8], "area": 5}, {"normal": [-0.8, 0.6], "area": 0.5}]})");
    CHECK(w.run({"reconstruct", "--input", w.path("open.json"), "--output", w.path("r.json")}) ==
          cli::kInfeasible);
    CHECK(w.err.find("residual") != std::string::npos);
  }
  SUBCASE("io") {
    CHECK(w.run({"detect", "--pattern", w.path("missing.csv"), "--output", w.path("i.json")}) ==
          cli::kIo);
    CHECK(w.err.find("missing.csv") != std::string::npos);
    CHECK(w.run({"reconstruct", "--input", w.path("missing.json"), "--output",
                 w.path("r.json")}) == cli::kIo);
  }
  SUBCASE("input and output collide") {
    REQUIRE(w.run({"fixture", "tetrahedron", "--output", w.path("tet.json")}) == cli::kOk);
    CHECK(w.run({"simulate", "--poly", w.path("tet.json"), "--output", w.path("tet.csv")}) ==
          cli::kValidation);
  }
}

TEST_CASE("configuration file defaults yield to flags") {
  Workspace w;
  REQUIRE(w.run({"simulate", "--fixture", "triangle", "--output", w.path("t.csv")}) == cli::kOk);
  write_text(w.path("cfg.ini"), "[detect]\ntheta = 100\nwindow = 11\n");
  CHECK(w.run({"--config", w.path("cfg.ini"), "detect", "--pattern", w.path("t.csv"), "--output",
               w.path("a.json")}) == cli::kEmptyDetection);
  CHECK(w.run({"--config", w.path("cfg.ini"), "detect", "--pattern", w.path("t.csv"), "--theta",
               "0.3", "--output", w.path("b.json")}) == cli::kOk);
  CHECK(read_indicator_set(w.path("b.json")).size() == 3);
}

TEST_CASE("roundtrip reports every stage") {
  Workspace w;
  REQUIRE(w.run({"roundtrip", "--fixture", "tetrahedron", "--theta", "0.13", "--output",
                 w.path("rec.json")}) == cli::kOk);
  CHECK(w.out.find("simulate: 65536 samples on hemisphere,") != std::string::npos);
  CHECK(w.out.find("detect: 4 entries, polytope has 4 facets") != std::string::npos);
  CHECK(w.out.find("reconstruct: 1 solution") != std::string::npos);
  CHECK(w.out.find("vertex error") != std::string::npos);
  CHECK(fs::exists(w.path("rec.json")));

  CHECK(w.run({"roundtrip", "--fixture", "hexagon", "--theta", "1000"}) == cli::kEmptyDetection);
  CHECK(w.err.find("detect") != std::string::npos);
}
