#include "pluri/io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

namespace pluri {

namespace {

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(path, "expected [re, im]");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

double number_at(const Json& j, const char* key, const std::string& path) {
  if (!j.contains(key) || !j[key].is_number())
    throw ConfigError(path + "." + key, "expected a number");
  return j[key].get<double>();
}

std::string tag_of(const Json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw ConfigError(path + ".type", "expected a tagged record");
  return j["type"].get<std::string>();
}

}  // namespace

Json to_json(const DomainSpec& d) {
  Json j;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, UnitDisc>) {
          j["type"] = "unit_disc";
        } else if constexpr (std::is_same_v<T, Disc>) {
          j["type"] = "disc";
          j["center"] = complex_to_json(v.center);
          j["radius"] = v.radius;
        } else if constexpr (std::is_same_v<T, Annulus>) {
          j["type"] = "annulus";
          j["r_in"] = v.r_in;
          j["r_out"] = v.r_out;
        } else if constexpr (std::is_same_v<T, Polydisc>) {
          j["type"] = "polydisc";
          j["radii"] = Json::array({v.r1, v.r2});
        } else {
          j["type"] = "unit_ball";
          j["n"] = v.n;
        }
      },
      d.variant());
  return j;
}

DomainSpec domain_from_json(const Json& j, const std::string& path) {
  std::string t = tag_of(j, path);
  if (t == "unit_disc") return DomainSpec{DomainSpec::Variant{UnitDisc{}}};
  if (t == "disc")
    return DomainSpec{DomainSpec::Variant{
        Disc{complex_from_json(j.value("center", Json::array({0.0, 0.0})), path + ".center"),
             number_at(j, "radius", path)}}};
  if (t == "annulus")
    return DomainSpec{
        DomainSpec::Variant{Annulus{number_at(j, "r_in", path), number_at(j, "r_out", path)}}};
  if (t == "polydisc") {
    if (!j.contains("radii") || !j["radii"].is_array() || j["radii"].size() != 2)
      throw ConfigError(path + ".radii", "expected [r1, r2]");
    return DomainSpec{DomainSpec::Variant{
        Polydisc{j["radii"][0].get<double>(), j["radii"][1].get<double>()}}};
  }
  if (t == "unit_ball") {
    int n = j.value("n", 1);
    return DomainSpec{DomainSpec::Variant{UnitBall{n}}};
  }
  throw ConfigError(path + ".type", "unknown domain type '" + t + "'");
}

Json to_json(const SetExpr& s) {
  Json j;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ClosedDiscSet>) {
          j["type"] = "closed_disc";
          j["center"] = complex_to_json(v.center);
          j["radius"] = v.radius;
        } else if constexpr (std::is_same_v<T, OpenDiscSet>) {
          j["type"] = "open_disc";
          j["center"] = complex_to_json(v.center);
          j["radius"] = v.radius;
        } else if constexpr (std::is_same_v<T, BoxSet>) {
          j["type"] = "box";
          j["lo"] = complex_to_json(v.lo);
          j["hi"] = complex_to_json(v.hi);
        } else if constexpr (std::is_same_v<T, ArcSet>) {
          j["type"] = "arc";
          j["theta1"] = v.theta1;
          j["theta2"] = v.theta2;
        } else if constexpr (std::is_same_v<T, CantorSet>) {
          j["type"] = "cantor";
          j["level"] = v.level;
          j["ratio"] = v.ratio;
        } else if constexpr (std::is_same_v<T, FinitePointsSet>) {
          j["type"] = "points";
          j["dim"] = v.dim;
          Json pts = Json::array();
          for (const auto& p : v.points) pts.push_back(to_json(p));
          j["points"] = pts;
        } else if constexpr (std::is_same_v<T, ProductSet>) {
          j["type"] = "product";
          j["a"] = to_json(*v.a);
          j["b"] = to_json(*v.b);
        } else if constexpr (std::is_same_v<T, UnionSet>) {
          j["type"] = "union";
          j["a"] = to_json(*v.a);
          j["b"] = to_json(*v.b);
        } else if constexpr (std::is_same_v<T, IntersectionSet>) {
          j["type"] = "intersection";
          j["a"] = to_json(*v.a);
          j["b"] = to_json(*v.b);
        } else {
          j["type"] = "complement";
          j["a"] = to_json(*v.a);
        }
      },
      s.variant());
  return j;
}

SetPtr set_from_json(const Json& j, const std::string& path) {
  std::string t = tag_of(j, path);
  try {
    if (t == "closed_disc")
      return sets::closed_disc(complex_from_json(j.at("center"), path + ".center"),
                               number_at(j, "radius", path));
    if (t == "open_disc")
      return sets::open_disc(complex_from_json(j.at("center"), path + ".center"),
                             number_at(j, "radius", path));
    if (t == "box")
      return sets::box(complex_from_json(j.at("lo"), path + ".lo"),
                       complex_from_json(j.at("hi"), path + ".hi"));
    if (t == "arc") return sets::arc(number_at(j, "theta1", path), number_at(j, "theta2", path));
    if (t == "cantor")
      return sets::cantor(static_cast<int>(number_at(j, "level", path)),
                          number_at(j, "ratio", path));
    if (t == "points") {
      std::vector<ComplexPoint> pts;
      if (j.contains("points"))
        for (std::size_t i = 0; i < j["points"].size(); ++i)
          pts.push_back(point_from_json(j["points"][i],
                                        path + ".points[" + std::to_string(i) + "]"));
      if (pts.empty()) return sets::empty(j.value("dim", 1));
      return sets::points(std::move(pts));
    }
    if (t == "product")
      return sets::product(set_from_json(j.at("a"), path + ".a"),
                           set_from_json(j.at("b"), path + ".b"));
    if (t == "union")
      return sets::set_union(set_from_json(j.at("a"), path + ".a"),
                             set_from_json(j.at("b"), path + ".b"));
    if (t == "intersection")
      return sets::set_intersection(set_from_json(j.at("a"), path + ".a"),
                                    set_from_json(j.at("b"), path + ".b"));
    if (t == "complement") return sets::complement(set_from_json(j.at("a"), path + ".a"));
  } catch (const Json::exception&) {
    throw ConfigError(path, "malformed '" + t + "' record");
  }
  throw ConfigError(path + ".type", "unknown set type '" + t + "'");
}

Json to_json(const ComplexPoint& p) {
  Json j = Json::array();
  for (int i = 0; i < p.dim(); ++i) j.push_back(complex_to_json(p.coord(i)));
  return j;
}

ComplexPoint point_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty() || j.size() > 2)
    throw ConfigError(path, "expected [[re,im]] or [[re,im],[re,im]]");
  if (j.size() == 1) return ComplexPoint(complex_from_json(j[0], path + "[0]"));
  return ComplexPoint(complex_from_json(j[0], path + "[0]"),
                      complex_from_json(j[1], path + "[1]"));
}

Json to_json(const AnalyticDisc& f) {
  Json j;
  j["dim"] = f.dim;
  Json coords = Json::array();
  for (const auto& c : f.coeff) {
    Json lst = Json::array();
    for (Complex z : c) lst.push_back(complex_to_json(z));
    coords.push_back(lst);
  }
  j["coeffs"] = coords;
  return j;
}

AnalyticDisc disc_from_json(const Json& j, const std::string& path) {
  AnalyticDisc f;
  f.dim = j.value("dim", 1);
  if (f.dim != 1 && f.dim != 2) throw ConfigError(path + ".dim", "dim must be 1 or 2");
  if (!j.contains("coeffs") || !j["coeffs"].is_array() ||
      j["coeffs"].size() != static_cast<std::size_t>(f.dim))
    throw ConfigError(path + ".coeffs", "expected one coefficient list per coordinate");
  for (std::size_t i = 0; i < j["coeffs"].size(); ++i) {
    std::vector<Complex> c;
    for (std::size_t k = 0; k < j["coeffs"][i].size(); ++k)
      c.push_back(complex_from_json(j["coeffs"][i][k], path + ".coeffs[" + std::to_string(i) +
                                                           "][" + std::to_string(k) + "]"));
    f.coeff.push_back(std::move(c));
  }
  return f;
}

Json to_json(const SolverParams& p) {
  Json j;
  j["grid_h"] = p.h;
  j["tol"] = p.tol;
  j["max_iter"] = p.max_iter;
  j["mode"] = p.mode == SolverMode::Direct ? "direct" : "relax";
  j["node_cap"] = p.node_cap;
  Json dirs = Json::array();
  for (const auto& d : p.directions)
    dirs.push_back(Json::array({Json::array({d.d[0], d.d[1]}), Json::array({d.d[2], d.d[3]})}));
  j["directions"] = dirs;
  return j;
}

SolverParams solver_from_json(const Json& j, const std::string& path) {
  SolverParams p;
  if (j.contains("grid_h")) p.h = number_at(j, "grid_h", path);
  if (j.contains("tol")) p.tol = number_at(j, "tol", path);
  if (!(p.tol >= 0)) throw ConfigError(path + ".tol", "must be >= 0");
  if (!(p.h > 0)) throw ConfigError(path + ".grid_h", "must be > 0");
  if (j.contains("max_iter")) p.max_iter = static_cast<long>(number_at(j, "max_iter", path));
  if (p.max_iter < 1) throw ConfigError(path + ".max_iter", "must be >= 1");
  if (j.contains("node_cap"))
    p.node_cap = static_cast<std::size_t>(number_at(j, "node_cap", path));
  if (j.contains("mode")) {
    std::string m = j["mode"].get<std::string>();
    if (m == "direct")
      p.mode = SolverMode::Direct;
    else if (m == "relax")
      p.mode = SolverMode::Relax;
    else
      throw ConfigError(path + ".mode", "expected 'relax' or 'direct'");
  }
  if (j.contains("directions")) {
    for (std::size_t i = 0; i < j["directions"].size(); ++i) {
      const Json& d = j["directions"][i];
      if (!d.is_array() || d.size() != 2)
        throw ConfigError(path + ".directions[" + std::to_string(i) + "]",
                          "expected [[re,im],[re,im]]");
      Direction dir{{d[0][0].get<int>(), d[0][1].get<int>(), d[1][0].get<int>(),
                     d[1][1].get<int>()}};
      p.directions.push_back(dir);
    }
  }
  return p;
}

Json to_json(const DiscOptParams& p) {
  Json j;
  j["degree"] = p.degree;
  j["restarts"] = p.restarts;
  j["budget"] = p.budget;
  j["samples"] = p.samples;
  j["loop_samples"] = p.loop_samples;
  j["exact_sigma"] = p.exact_sigma;
  j["seed"] = p.seed;
  return j;
}

DiscOptParams optimizer_from_json(const Json& j, const std::string& path) {
  DiscOptParams p;
  if (j.contains("degree")) p.degree = static_cast<int>(number_at(j, "degree", path));
  if (p.degree < 1) throw ConfigError(path + ".degree", "must be >= 1");
  if (j.contains("restarts")) p.restarts = static_cast<int>(number_at(j, "restarts", path));
  if (p.restarts < 1) throw ConfigError(path + ".restarts", "must be >= 1");
  if (j.contains("budget")) p.budget = static_cast<long>(number_at(j, "budget", path));
  if (j.contains("samples")) p.samples = static_cast<int>(number_at(j, "samples", path));
  if (j.contains("loop_samples"))
    p.loop_samples = static_cast<int>(number_at(j, "loop_samples", path));
  if (j.contains("exact_sigma")) p.exact_sigma = j["exact_sigma"].get<bool>();
  if (j.contains("seed")) p.seed = j["seed"].get<std::uint64_t>();
  return p;
}

Json to_json(const DiscOptResult& r) {
  Json j;
  j["disc"] = to_json(r.best);
  j["sigma"] = r.sigma;
  j["omega_upper"] = r.omega_upper;
  j["margin"] = r.margin;
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  j["total_evals"] = r.total_evals;
  Json log = Json::array();
  for (const auto& e : r.restart_log) {
    Json le;
    le["restart"] = e.restart;
    le["kind"] = e.kind;
    le["sigma"] = e.sigma;
    le["evals"] = e.evals;
    log.push_back(le);
  }
  j["restart_log"] = log;
  return j;
}

Json to_json(const CapacityReport& r) {
  Json j;
  j["value"] = r.value;
  j["grid_h"] = r.grid_h;
  j["nodes"] = r.nodes;
  j["envelope_converged"] = r.envelope_converged;
  j["iterations"] = r.iterations;
  j["method"] = r.method;
  j["regularized"] = r.regularized;
  return j;
}

Json to_json(const AxiomLedger& l) {
  Json j = Json::array();
  for (const auto& e : l.entries) {
    Json je;
    je["id"] = e.id;
    je["passed"] = e.passed;
    je["value"] = e.value;
    je["reference"] = e.reference;
    je["detail"] = e.detail;
    j.push_back(je);
  }
  return j;
}

Json to_json(const PolarReport& r) {
  Json j;
  j["finite_sigma_zero"] = r.finite_sigma_zero;
  j["discs_checked"] = r.discs_checked;
  j["capacities"] = r.capacities;
  j["ratio_errors"] = r.ratio_errors;
  j["ratios_pass"] = r.ratios_pass;
  j["exhaustion_sigma"] = r.exhaustion_sigma;
  j["exhaustion_monotone"] = r.exhaustion_monotone;
  return j;
}

Json to_json(const DiscBoundReport& r) {
  Json j;
  j["omega_est"] = r.omega_est;
  j["omega_upper"] = r.omega_upper;
  j["sigma_best"] = r.sigma_best;
  j["tol"] = r.tol;
  j["pass_upper"] = r.pass_upper;
  j["pass_lower"] = r.pass_lower;
  j["tol_lower"] = r.tol_lower;
  if (r.pass_equality) j["pass_equality"] = *r.pass_equality;
  return j;
}

Json to_json(const BoundaryEqualityReport& r) {
  Json j;
  j["x"] = complex_to_json(r.x);
  j["poisson"] = r.poisson_value;
  j["mobius_sigma"] = r.mobius_sigma;
  j["equality_gap"] = r.equality_gap;
  j["best_search_excess"] = r.best_search_excess;
  j["searched"] = r.searched;
  j["pass"] = r.pass;
  return j;
}

Json to_json(const BoundaryClosureReport& r) {
  Json j;
  j["omega_closure"] = r.omega_closure;
  j["sigma_bound"] = r.sigma_bound;
  j["omega_star"] = r.omega_star;
  j["tol"] = r.tol;
  j["pass"] = r.pass;
  return j;
}

Json to_json(const MonotoneUnionReport& r) {
  Json j;
  j["values"] = r.values;
  j["limit_value"] = r.limit_value;
  j["final_gap"] = r.final_gap;
  j["monotone"] = r.monotone;
  j["pass"] = r.pass;
  return j;
}

Json to_json(const WeakRegularityReport& r) {
  Json j;
  Json rays = Json::array();
  for (const auto& p : r.rays) {
    Json jp;
    jp["angle"] = p.angle;
    jp["limit_estimate"] = p.limit_estimate;
    jp["classification"] = p.classification;
    rays.push_back(jp);
  }
  j["rays"] = rays;
  j["worst_inside_gap"] = r.worst_inside_gap;
  j["pass"] = r.pass;
  return j;
}

std::string config_hash(const Json& config) {
  std::string dump = config.dump();
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("io", "cannot write " + path.string());
  f << text;
}

void write_json(const std::filesystem::path& path, const Json& j) {
  write_text(path, j.dump(2) + "\n");
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("io", "cannot read " + path.string());
  Json j;
  f >> j;
  return j;
}

void write_field_csv(const std::filesystem::path& path, const GridField& field) {
  const GridSpec& g = *field.grid;
  std::ostringstream os;
  os.precision(17);
  os << (g.dim() == 1 ? "x,y,value\n" : "x1,y1,x2,y2,value\n");
  for (std::size_t i = 0; i < g.count(); ++i) {
    if (g.cls(i) == NodeClass::Exterior) continue;
    auto c = g.coords(i);
    if (g.dim() == 1)
      os << c[0] << "," << c[1] << "," << field.v[i] << "\n";
    else
      os << c[0] << "," << c[1] << "," << c[2] << "," << c[3] << "," << field.v[i] << "\n";
  }
  write_text(path, os.str());
}

namespace {
constexpr char kCacheMagic[8] = {'P', 'L', 'F', 'C', '0', '0', '0', '1'};
}

void write_field_cache(const std::filesystem::path& path, const GridField& field,
                       const std::string& key) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("io", "cannot write " + path.string());
  f.write(kCacheMagic, 8);
  std::uint64_t klen = key.size();
  f.write(reinterpret_cast<const char*>(&klen), 8);
  f.write(key.data(), static_cast<std::streamsize>(klen));
  std::uint64_t count = field.v.size();
  f.write(reinterpret_cast<const char*>(&count), 8);
  f.write(reinterpret_cast<const char*>(field.v.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
}

bool read_field_cache(const std::filesystem::path& path, const GridPtr& grid,
                      const std::string& key, GridField& out) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return false;
  char magic[8];
  f.read(magic, 8);
  if (!f || std::memcmp(magic, kCacheMagic, 8) != 0) return false;
  std::uint64_t klen = 0;
  f.read(reinterpret_cast<char*>(&klen), 8);
  std::string k(klen, '\0');
  f.read(k.data(), static_cast<std::streamsize>(klen));
  if (k != key) return false;
  std::uint64_t count = 0;
  f.read(reinterpret_cast<char*>(&count), 8);
  if (count != grid->count()) return false;
  out.grid = grid;
  out.v.resize(count);
  f.read(reinterpret_cast<char*>(out.v.data()),
         static_cast<std::streamsize>(count * sizeof(double)));
  return static_cast<bool>(f);
}

}  // namespace pluri
