#include "polyrecon/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "polyrecon/errors.hpp"

namespace polyrecon {

using nlohmann::json;

namespace {

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vec json_vec(const json& a, int dim) {
  if (!a.is_array() || static_cast<int>(a.size()) != dim)
    throw ValidationError("expected an array of " + std::to_string(dim) + " numbers");
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = a[i].get<double>();
  return v;
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("malformed JSON: ") + e.what());
  }
}

template <class F>
auto with_schema(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("unexpected JSON content: ") + e.what());
  }
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw IoError("bad number '" + std::string(text) + "' in pattern CSV");
  return v;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

// ------------------------------------------------------------------- JSON

std::string polytope_to_json(const Polytope& p) {
  json j;
  j["dim"] = p.dim();
  j["vertices"] = json::array();
  for (const auto& v : p.vertices()) j["vertices"].push_back(vec_json(v));
  j["facets"] = p.facets();
  return j.dump(2) + "\n";
}

Polytope polytope_from_json(const std::string& text) {
  const json j = parse(text);
  return with_schema([&] {
    const int dim = j.at("dim").get<int>();
    if (dim < 2) throw ValidationError("dim must be >= 2");
    std::vector<Vec> vertices;
    for (const auto& v : j.at("vertices")) vertices.push_back(json_vec(v, dim));
    auto facets = j.at("facets").get<std::vector<std::vector<int>>>();
    return Polytope(dim, std::move(vertices), std::move(facets));
  });
}

std::string indicator_set_to_json(const FacetIndicatorSet& set) {
  json j;
  j["dim"] = set.dim;
  j["entries"] = json::array();
  for (const auto& e : set.entries)
    j["entries"].push_back({{"normal", vec_json(e.normal)}, {"area", e.area}});
  return j.dump(2) + "\n";
}

FacetIndicatorSet indicator_set_from_json(const std::string& text) {
  const json j = parse(text);
  return with_schema([&] {
    FacetIndicatorSet set;
    set.dim = j.at("dim").get<int>();
    if (set.dim < 2) throw ValidationError("dim must be >= 2");
    for (const auto& e : j.at("entries"))
      set.entries.push_back({json_vec(e.at("normal"), set.dim), e.at("area").get<double>()});
    set.validate();
    return set;
  });
}

// ---------------------------------------------------------------- pattern

std::string pattern_csv(const Pattern& pattern) {
  const int axes = static_cast<int>(pattern.grid.counts.size());
  std::string out = axes == 1 ? "t1,abs_phi,psi\n" : "t1,t2,abs_phi,psi\n";
  for (std::size_t k = 0; k < pattern.size(); ++k) {
    const Vec t = pattern.grid.parameter(k);
    for (int a = 0; a < axes; ++a) {
      out += format_double(t(a));
      out += ',';
    }
    out += format_double(pattern.abs_phi[k]);
    out += ',';
    out += format_double(pattern.psi[k]);
    out += '\n';
  }
  return out;
}

std::string pattern_sidecar(const Pattern& pattern) {
  json j;
  j["lambda"] = pattern.lambda;
  j["surface"] = {{"kind", to_string(pattern.surface.kind)},
                  {"radius", pattern.surface.radius},
                  {"axis", pattern.surface.axis}};
  j["grid"] = {{"counts", pattern.grid.counts}, {"ranges", pattern.grid.ranges}};
  j["rows"] = pattern.size();
  return j.dump(2) + "\n";
}

Pattern pattern_from_text(const std::string& csv, const std::string& sidecar) {
  const json j = parse(sidecar);
  Pattern p = with_schema([&] {
    Pattern q;
    q.lambda = j.at("lambda").get<double>();
    const auto& s = j.at("surface");
    q.surface.kind = parse_surface_kind(s.at("kind").get<std::string>());
    q.surface.radius = s.at("radius").get<double>();
    q.surface.axis = s.value("axis", 2);
    q.grid.counts = j.at("grid").at("counts").get<std::vector<int>>();
    q.grid.ranges = j.at("grid").at("ranges").get<std::vector<std::array<double, 2>>>();
    return q;
  });
  p.surface.validate();
  p.grid.validate(p.surface);
  if (!(p.lambda > 0.0)) throw ValidationError("pattern lambda must be positive");

  const int axes = static_cast<int>(p.grid.counts.size());
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  const std::string header = axes == 1 ? "t1,abs_phi,psi" : "t1,t2,abs_phi,psi";
  if (line != header) throw IoError("pattern CSV header must be '" + header + "'");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1))
      fields.push_back(rest.substr(0, pos));
    fields.push_back(rest);
    if (static_cast<int>(fields.size()) != axes + 2)
      throw IoError("pattern CSV row has " + std::to_string(fields.size()) + " fields");
    p.abs_phi.push_back(parse_double(fields[axes]));
    p.psi.push_back(parse_double(fields[axes + 1]));
  }
  if (p.psi.size() != p.grid.size())
    throw IoError("pattern CSV has " + std::to_string(p.psi.size()) + " rows, grid needs " +
                  std::to_string(p.grid.size()));
  return p;
}

// ------------------------------------------------------------------ files

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".json");
  return p;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Polytope read_polytope(const std::filesystem::path& path) {
  return polytope_from_json(read_text(path));
}

void write_polytope(const std::filesystem::path& path, const Polytope& polytope) {
  write_text(path, polytope_to_json(polytope));
}

FacetIndicatorSet read_indicator_set(const std::filesystem::path& path) {
  return indicator_set_from_json(read_text(path));
}

void write_indicator_set(const std::filesystem::path& path, const FacetIndicatorSet& set) {
  write_text(path, indicator_set_to_json(set));
}

Pattern read_pattern(const std::filesystem::path& csv_path) {
  const std::string csv = read_text(csv_path);
  return pattern_from_text(csv, read_text(sidecar_path(csv_path)));
}

void write_pattern(const std::filesystem::path& csv_path, const Pattern& pattern) {
  if (sidecar_path(csv_path) == csv_path)
    throw ValidationError("pattern path must not end in .json");
  write_text(csv_path, pattern_csv(pattern));
  write_text(sidecar_path(csv_path), pattern_sidecar(pattern));
}

// ---------------------------------------------------------------- exports

std::string polytope_obj(const Polytope& p) {
  if (p.dim() != 3) throw ValidationError("OBJ export needs a 3D polytope");
  std::string out;
  for (const auto& v : p.vertices())
    out += "v " + format_double(v(0)) + " " + format_double(v(1)) + " " + format_double(v(2)) + "\n";
  for (const auto& f : p.facets()) {
    out += "f";
    for (int i : f) out += " " + std::to_string(i + 1);
    out += "\n";
  }
  return out;
}

namespace {

std::string svg_open(double x0, double y0, double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + format_double(x0) + " " +
         format_double(y0) + " " + format_double(w) + " " + format_double(h) + "\">\n";
}

}  // namespace

std::string polygon_svg(const Polytope& p) {
  if (p.dim() != 2) throw ValidationError("SVG polygon export needs a 2D polytope");
  Eigen::Vector2d lo = Eigen::Vector2d::Constant(INFINITY), hi = -lo;
  for (const auto& v : p.vertices()) {
    lo = lo.cwiseMin(Eigen::Vector2d(v));
    hi = hi.cwiseMax(Eigen::Vector2d(v));
  }
  const double pad = 0.05 * p.diameter();
  // flip y so the drawing has the usual orientation
  std::string out = svg_open(lo(0) - pad, -hi(1) - pad, hi(0) - lo(0) + 2 * pad,
                             hi(1) - lo(1) + 2 * pad);
  out += "  <polygon fill=\"none\" stroke=\"black\" stroke-width=\"" +
         format_double(0.005 * p.diameter()) + "\" points=\"";
  for (const auto& f : p.facets()) {
    const Vec& v = p.vertices()[f[0]];
    out += format_double(v(0)) + "," + format_double(-v(1)) + " ";
  }
  out.back() = '"';
  out += "/>\n</svg>\n";
  return out;
}

std::string psi_curve_svg(const Pattern& pattern) {
  if (pattern.grid.counts.size() != 1)
    throw ValidationError("psi curve export needs a one-parameter pattern");
  double top = 0.0;
  for (double v : pattern.psi) top = std::max(top, v);
  if (!(top > 0.0)) top = 1.0;
  const auto range = pattern.grid.ranges[0];
  const double width = 1000.0, height = 400.0;
  std::string out = svg_open(0, 0, width, height);
  out += "  <polyline fill=\"none\" stroke=\"black\" points=\"";
  for (std::size_t k = 0; k < pattern.size(); ++k) {
    const double t = pattern.grid.coordinate(0, static_cast<int>(k));
    const double x = (t - range[0]) / (range[1] - range[0]) * width;
    const double y = height - pattern.psi[k] / top * height;
    out += format_double(x) + "," + format_double(y) + " ";
  }
  out.back() = '"';
  out += "/>\n</svg>\n";
  return out;
}

}  // namespace polyrecon
