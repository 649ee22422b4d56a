#include "polyrecon/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <ostream>

#include <CLI11.hpp>

#include "polyrecon/errors.hpp"
#include "polyrecon/fixtures.hpp"
#include "polyrecon/io.hpp"
#include "polyrecon/reconstruct.hpp"
#include "polyrecon/scan.hpp"

namespace polyrecon::cli {

namespace fs = std::filesystem;

namespace {

class EmptyDetection : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string poly, fixture, pattern, input;
  std::string output, obj, svg, indicators;
  std::uint64_t seed = 1;
  double lambda = 0.01;
  std::string surface;  // empty: semicircle in 2D, hemisphere in 3D
  double radius = 1.0;
  int axis = 2;
  std::vector<int> grid;
  std::string method = "smooth";
  double theta = 0.05;
  int window = 5;
  double cluster_radius = 3.0;
  double tol = 1e-2;
  unsigned threads = 0;
  bool list = false;
};

// Rethrows with the stage name prepended, keeping the error category.
template <class F>
auto stage(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    throw ValidationError(name + ": " + e.what());
  } catch (const ReconstructionError& e) {
    throw ReconstructionError(name + ": " + e.what(), e.residual());
  } catch (const IoError& e) {
    throw IoError(name + ": " + e.what());
  } catch (const EmptyDetection& e) {
    throw EmptyDetection(name + ": " + e.what());
  }
}

void require_distinct(const fs::path& in, const fs::path& out) {
  if (in.empty() || out.empty()) return;
  if (fs::weakly_canonical(in) == fs::weakly_canonical(out))
    throw ValidationError("input and output paths must differ: " + out.string());
}

fs::path suffixed(const fs::path& path, std::size_t k) {
  auto p = path;
  p.replace_filename(path.stem().string() + "_" + std::to_string(k) + path.extension().string());
  return p;
}

Polytope load_polytope(const Options& o) {
  if (!o.poly.empty() && !o.fixture.empty())
    throw ValidationError("give either --poly or --fixture, not both");
  if (!o.poly.empty()) return read_polytope(o.poly);
  if (!o.fixture.empty()) return fixtures::by_name(o.fixture, o.seed);
  throw ValidationError("an input polytope is required (--poly or --fixture)");
}

ScanSurface surface_for(const Options& o, int dim) {
  ScanSurface s;
  if (o.surface.empty()) {
    s = dim == 2 ? ScanSurface::semicircle(o.radius) : ScanSurface::hemisphere(o.radius);
  } else {
    s.kind = parse_surface_kind(o.surface);
    s.radius = o.radius;
    s.axis = o.axis;
  }
  s.validate();
  if (s.dim() != dim)
    throw ValidationError(to_string(s.kind) + " surface does not fit a " + std::to_string(dim) +
                          "D polytope");
  return s;
}

Pattern simulate(const Polytope& p, const Options& o) {
  const ScanSurface s = surface_for(o, p.dim());
  ScanOptions so;
  so.threads = o.threads;
  return simulate_pattern(p, s, Grid::over(s, o.grid), o.lambda, so);
}

DetectionConfig detection_config(const Options& o) {
  DetectionConfig cfg;
  cfg.method = parse_detection_method(o.method);
  cfg.theta = o.theta;
  cfg.window = o.window;
  cfg.cluster_radius = o.cluster_radius;
  cfg.validate();
  return cfg;
}

double area_mismatch(const Polytope& p, const FacetIndicatorSet& set) {
  double worst = 0.0;
  for (const auto& m : match_facets(p, set))
    worst = std::max(worst, std::abs(m.found - m.area) / m.area);
  return worst;
}

void write_exports(const Polytope& p, const fs::path& obj, const fs::path& svg, std::ostream& out) {
  if (!obj.empty()) {
    write_text(obj, polytope_obj(p));
    out << "wrote " << obj.string() << "\n";
  }
  if (!svg.empty()) {
    write_text(svg, polygon_svg(p));
    out << "wrote " << svg.string() << "\n";
  }
}

// ------------------------------------------------------------- commands

int cmd_fixture(const Options& o, std::ostream& out) {
  if (o.list) {
    for (const auto& n : fixtures::names()) out << n << "\n";
    return kOk;
  }
  const Polytope p = fixtures::by_name(o.fixture, o.seed);
  const fs::path path = o.output.empty() ? fs::path(o.fixture + ".json") : fs::path(o.output);
  write_polytope(path, p);
  out << "wrote " << path.string() << " (" << p.dim() << "D, " << p.vertices().size()
      << " vertices, " << p.facets().size() << " facets)\n";
  if (!o.indicators.empty()) {
    require_distinct(path, o.indicators);
    write_indicator_set(o.indicators, indicator_set(p));
    out << "wrote " << o.indicators << "\n";
  }
  return kOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const Polytope p = load_polytope(o);
  const fs::path path = o.output.empty() ? fs::path("pattern.csv") : fs::path(o.output);
  require_distinct(o.poly, path);
  require_distinct(o.poly, sidecar_path(path));
  const Pattern pattern = simulate(p, o);
  write_pattern(path, pattern);
  out << "wrote " << pattern.size() << " rows to " << path.string() << "\n";
  if (!o.svg.empty()) {
    write_text(o.svg, psi_curve_svg(pattern));
    out << "wrote " << o.svg << "\n";
  }
  return kOk;
}

int cmd_detect(const Options& o, std::ostream& out) {
  const DetectionConfig cfg = detection_config(o);
  const fs::path path = o.output.empty() ? fs::path("indicators.json") : fs::path(o.output);
  require_distinct(o.pattern, path);
  require_distinct(sidecar_path(o.pattern), path);
  const Pattern pattern = read_pattern(o.pattern);
  const FacetIndicatorSet set = detect(pattern, cfg);
  write_indicator_set(path, set);
  out << "detected " << set.size() << " entries, wrote " << path.string() << "\n";
  if (set.empty()) throw EmptyDetection("no sample exceeds theta = " + format_double(cfg.theta));
  return kOk;
}

int cmd_reconstruct(const Options& o, std::ostream& out) {
  const fs::path path = o.output.empty() ? fs::path("polytope.json") : fs::path(o.output);
  require_distinct(o.input, path);
  const FacetIndicatorSet set = read_indicator_set(o.input);
  if (set.empty()) throw EmptyDetection("indicator set is empty");
  const auto solutions = reconstruct_any(set, o.tol);
  out << solutions.size() << (solutions.size() == 1 ? " solution" : " solutions") << "\n";
  for (std::size_t k = 0; k < solutions.size(); ++k) {
    const bool many = solutions.size() > 1;
    const auto& s = solutions[k];
    const fs::path target = many ? suffixed(path, k + 1) : path;
    write_polytope(target, s.polytope);
    out << "wrote " << target.string() << " (area residual " << format_double(s.residual)
        << ")\n";
    const fs::path obj = o.obj.empty() ? fs::path() : many ? suffixed(o.obj, k + 1) : fs::path(o.obj);
    const fs::path svg = o.svg.empty() ? fs::path() : many ? suffixed(o.svg, k + 1) : fs::path(o.svg);
    write_exports(s.polytope, obj, svg, out);
  }
  return kOk;
}

int cmd_roundtrip(const Options& o, std::ostream& out) {
  const Polytope truth = stage("load", [&] { return load_polytope(o); });
  const Pattern pattern = stage("simulate", [&] { return simulate(truth, o); });
  out << "simulate: " << pattern.size() << " samples on " << to_string(pattern.surface.kind)
      << ", lambda " << format_double(pattern.lambda) << "\n";

  const FacetIndicatorSet set = stage("detect", [&] {
    auto s = detect(pattern, detection_config(o));
    if (s.empty()) throw EmptyDetection("no sample exceeds theta");
    return s;
  });
  out << "detect: " << set.size() << " entries, polytope has " << truth.facets().size()
      << " facets\n";
  out << "  facet  area  detected  rel_error  angle\n";
  const auto matches = match_facets(truth, set);
  for (std::size_t k = 0; k < matches.size(); ++k) {
    const auto& m = matches[k];
    out << "  " << k << "  " << format_double(m.area) << "  " << format_double(m.found) << "  "
        << format_double((m.found - m.area) / m.area) << "  " << format_double(m.angle) << "\n";
  }

  const auto solutions = stage("reconstruct", [&] { return reconstruct_any(set, o.tol); });
  out << "reconstruct: " << solutions.size()
      << (solutions.size() == 1 ? " solution" : " solutions") << "\n";
  const bool simplex = truth.vertices().size() == static_cast<std::size_t>(truth.dim() + 1);
  for (std::size_t k = 0; k < solutions.size(); ++k) {
    const auto& s = solutions[k];
    out << "  solution " << k + 1 << ": area error vs polytope "
        << format_double(area_mismatch(s.polytope, indicator_set(truth)));
    if (simplex)
      out << ", vertex error " << format_double(aligned_vertex_error(truth, s.polytope) / truth.diameter())
          << " of diameter";
    out << "\n";
  }
  if (!o.output.empty()) {
    require_distinct(o.poly, o.output);
    write_polytope(o.output, solutions.front().polytope);
    out << "wrote " << o.output << "\n";
  }
  return kOk;
}

void add_input(CLI::App* cmd, Options& o) {
  cmd->add_option("--poly", o.poly, "Polytope JSON file");
  cmd->add_option("--fixture", o.fixture, "Built-in fixture name (see 'fixture --list')");
  cmd->add_option("--seed", o.seed, "Seed for random fixtures");
}

void add_scan(CLI::App* cmd, Options& o) {
  cmd->add_option("--lambda", o.lambda, "Wavelength")->check(CLI::PositiveNumber);
  cmd->add_option("--surface", o.surface, "semicircle, hemisphere or ewald");
  cmd->add_option("--radius", o.radius, "Scan surface radius")->check(CLI::PositiveNumber);
  cmd->add_option("--axis", o.axis, "Ewald beam axis")->check(CLI::Range(0, 2));
  cmd->add_option("--grid", o.grid, "Samples per parameter axis, e.g. 512 or 256,256")
      ->delimiter(',');
  cmd->add_option("--threads", o.threads, "Worker threads, 0 for all cores");
}

void add_detect(CLI::App* cmd, Options& o) {
  cmd->add_option("--method", o.method, "smooth or cluster")
      ->check(CLI::IsMember({"smooth", "cluster"}));
  cmd->add_option("--theta", o.theta, "Peak threshold in area units");
  cmd->add_option("--window", o.window, "Box filter width (smooth)");
  cmd->add_option("--radius-cells", o.cluster_radius, "Linkage radius in grid cells (cluster)");
}

}  // namespace

std::vector<Solution> reconstruct_any(const FacetIndicatorSet& set, double tol) {
  set.validate();
  const int n = set.dim;
  std::vector<Solution> out;
  if (set.size() == static_cast<std::size_t>(n + 1)) {
    const auto r = reconstruct_simplex(set);
    out.push_back({Polytope::from_simplex(r.simplex), r.area_residual});
    return out;
  }
  if (n > 3) throw ValidationError("only simplices can be reconstructed for n > 3");
  for (const auto& signs : resolve_signs(set, tol)) {
    const EGI egi = egi_of(set, signs);
    if (n == 2) {
      Polytope p = reconstruct_polygon_2d(egi, tol);
      const double r = area_mismatch(p, set);
      out.push_back({std::move(p), r});
    } else {
      FitOptions fit;
      fit.closure_tol = tol;
      auto result = reconstruct_polytope_3d(egi, fit);
      out.push_back({std::move(result.polytope), result.residual});
    }
  }
  return out;
}

double aligned_vertex_error(const Polytope& a, const Polytope& b) {
  if (a.dim() != b.dim()) throw ValidationError("polytopes differ in dimension");
  const Vec ca = a.vertex_centroid();
  double best = std::numeric_limits<double>::infinity();
  for (double sign : {1.0, -1.0}) {
    std::vector<Vec> vb;
    for (const auto& v : b.vertices()) vb.push_back(sign * v);
    Vec cb = Vec::Zero(a.dim());
    for (const auto& v : vb) cb += v;
    cb /= static_cast<double>(vb.size());
    for (auto& v : vb) v += ca - cb;
    auto directed = [](const std::vector<Vec>& from, const std::vector<Vec>& to) {
      double d = 0.0;
      for (const auto& p : from) {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& q : to) m = std::min(m, (p - q).norm());
        d = std::max(d, m);
      }
      return d;
    };
    best = std::min(best, std::max(directed(a.vertices(), vb), directed(vb, a.vertices())));
  }
  return best;
}

std::vector<FacetMatch> match_facets(const Polytope& truth, const FacetIndicatorSet& found) {
  std::vector<FacetMatch> out;
  for (const auto& f : truth.facet_data()) {
    FacetMatch m{f.area, 0.0, std::numbers::pi / 2};
    double best = -1.0;
    for (const auto& e : found.entries) {
      const double c = std::abs(f.normal.dot(e.normal));
      if (c > best) {
        best = c;
        m.found = e.area;
        m.angle = std::acos(std::min(1.0, c));
      }
    }
    out.push_back(m);
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polytope reconstruction from Fourier transform moduli", "polyrecon"};
  app.set_config("--config", "", "INI or TOML file with option defaults; flags take precedence");
  app.require_subcommand(1);
  Options o;

  auto* fixture = app.add_subcommand("fixture", "Write a built-in fixture polytope");
  fixture->add_option("name", o.fixture, "Fixture name");
  fixture->add_option("--seed", o.seed, "Seed for random fixtures");
  fixture->add_option("--output", o.output, "Polytope JSON path");
  fixture->add_option("--indicators", o.indicators, "Also write its exact indicator set");
  fixture->add_flag("--list", o.list, "List fixture names");

  auto* simulate_cmd = app.add_subcommand("simulate", "Sample |F| over a scan surface");
  add_input(simulate_cmd, o);
  add_scan(simulate_cmd, o);
  simulate_cmd->add_option("--output", o.output, "Pattern CSV path (sidecar gets .json)");
  simulate_cmd->add_option("--svg", o.svg, "Also write the psi curve (2D)");

  auto* detect_cmd = app.add_subcommand("detect", "Extract a facet-indicator set");
  detect_cmd->add_option("--pattern", o.pattern, "Pattern CSV path")->required();
  add_detect(detect_cmd, o);
  detect_cmd->add_option("--output", o.output, "Indicator JSON path");

  auto* reconstruct_cmd = app.add_subcommand("reconstruct", "Rebuild polytopes from indicators");
  reconstruct_cmd->add_option("--input", o.input, "Indicator JSON path")->required();
  reconstruct_cmd->add_option("--tol", o.tol, "Relative closure tolerance for sign search")
      ->check(CLI::PositiveNumber);
  reconstruct_cmd->add_option("--output", o.output, "Polytope JSON path");
  reconstruct_cmd->add_option("--obj", o.obj, "OBJ export (3D)");
  reconstruct_cmd->add_option("--svg", o.svg, "SVG export (2D)");

  auto* roundtrip_cmd = app.add_subcommand("roundtrip", "Simulate, detect and reconstruct");
  add_input(roundtrip_cmd, o);
  add_scan(roundtrip_cmd, o);
  add_detect(roundtrip_cmd, o);
  roundtrip_cmd->add_option("--tol", o.tol, "Relative closure tolerance for sign search")
      ->check(CLI::PositiveNumber);
  roundtrip_cmd->add_option("--output", o.output, "Write the first reconstruction here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (fixture->parsed()) {
      if (!o.list && o.fixture.empty()) throw ValidationError("fixture name required");
      return cmd_fixture(o, out);
    }
    if (simulate_cmd->parsed()) return cmd_simulate(o, out);
    if (detect_cmd->parsed()) return cmd_detect(o, out);
    if (reconstruct_cmd->parsed()) return cmd_reconstruct(o, out);
    return cmd_roundtrip(o, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const EmptyDetection& e) {
    err << "error: " << e.what() << "\n";
    return kEmptyDetection;
  } catch (const ReconstructionError& e) {
    err << "error: " << e.what() << " (residual " << format_double(e.residual()) << ")\n";
    return kInfeasible;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace polyrecon::cli
