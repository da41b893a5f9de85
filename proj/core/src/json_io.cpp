#include "zzspec/json_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "zzspec/errors.hpp"

namespace zzspec {

namespace {

// Typed access to a JSON object; remembers the keys it served so that
// leftovers (typos) can be rejected.
class Reader {
 public:
  Reader(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail("expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }
  void allow(const std::string& key) { seen_.insert(key); }

  const Json& at(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) fail("missing key '" + key + "'");
    return j_.at(key);
  }

  double num(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_number()) fail("'" + key + "' must be a number");
    return v.get<double>();
  }
  double num(const std::string& key, double fallback) { return has(key) ? num(key) : skip(key, fallback); }

  long long integer(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_number_integer()) fail("'" + key + "' must be an integer");
    return v.get<long long>();
  }
  long long integer(const std::string& key, long long fallback) {
    return has(key) ? integer(key) : skip(key, fallback);
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return skip(key, fallback);
    const Json& v = at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
      fail("'" + key + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
  }

  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return skip(key, fallback);
    const Json& v = at(key);
    if (!v.is_boolean()) fail("'" + key + "' must be true or false");
    return v.get<bool>();
  }

  std::string str(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_string()) fail("'" + key + "' must be a string");
    return v.get<std::string>();
  }
  std::string str(const std::string& key, const std::string& fallback) {
    return has(key) ? str(key) : skip(key, fallback);
  }

  std::vector<double> nums(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_array()) fail("'" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const Json& e : v) {
      if (!e.is_number()) fail("'" + key + "' must be an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<int> ints(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_array()) fail("'" + key + "' must be an array of integers");
    std::vector<int> out;
    for (const Json& e : v) {
      if (!e.is_number_integer()) fail("'" + key + "' must be an array of integers");
      out.push_back(e.get<int>());
    }
    return out;
  }

  Interval interval(const std::string& key) {
    const std::vector<double> v = nums(key);
    if (v.size() != 2) fail("'" + key + "' must be [lo, hi]");
    return {v[0], v[1]};
  }

  void done() const {
    for (const auto& item : j_.items())
      if (!seen_.count(item.key())) fail("unknown key '" + item.key() + "'");
  }

  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(where_ + ": " + what); }

  const std::string& where() const { return where_; }

 private:
  template <class T>
  T skip(const std::string& key, T fallback) {
    seen_.insert(key);
    return fallback;
  }

  const Json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }
Json opt(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

SectionShape section_shape_from_string(const std::string& name) {
  if (name == "rectangle") return SectionShape::rectangle;
  if (name == "disc") return SectionShape::disc;
  if (name == "ellipse") return SectionShape::ellipse;
  if (name == "polygon") return SectionShape::polygon;
  throw ConfigError("unknown cross-section shape '" + name + "'");
}

CrossSection2D read_section(Reader& r) {
  CrossSection2D s;
  s.shape = section_shape_from_string(r.str("shape"));
  switch (s.shape) {
    case SectionShape::disc:
      s.p0 = r.num("radius");
      break;
    case SectionShape::rectangle:
    case SectionShape::ellipse: {
      const std::vector<double> v = r.nums(s.shape == SectionShape::rectangle ? "sides" : "semi_axes");
      if (v.size() != 2) r.fail("cross section needs two lengths");
      s.p0 = v[0];
      s.p1 = v[1];
      break;
    }
    case SectionShape::polygon: {
      const Json& v = r.at("vertices");
      if (!v.is_array() || v.size() < 3) r.fail("polygon needs at least 3 vertices");
      for (const Json& p : v) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
          r.fail("polygon vertices must be [x, y] pairs");
        s.vertices.push_back({p[0].get<double>(), p[1].get<double>()});
      }
      break;
    }
  }
  if (r.has("center")) {
    const std::vector<double> c = r.nums("center");
    if (c.size() != 2) r.fail("'center' must be [x, y]");
    s.center_x = c[0];
    s.center_y = c[1];
  } else {
    r.allow("center");
  }
  return s;
}

void write_section(Json& j, const CrossSection2D& s) {
  j["shape"] = to_string(s.shape);
  switch (s.shape) {
    case SectionShape::disc: j["radius"] = s.p0; break;
    case SectionShape::rectangle: j["sides"] = {s.p0, s.p1}; break;
    case SectionShape::ellipse: j["semi_axes"] = {s.p0, s.p1}; break;
    case SectionShape::polygon: {
      Json v = Json::array();
      for (const auto& p : s.vertices) v.push_back({p[0], p[1]});
      j["vertices"] = v;
      break;
    }
  }
  j["center"] = {s.center_x, s.center_y};
}

Json pair_json(const DiracPair& p) {
  return {{"laplace", p.laplace},
          {"plus", p.plus},
          {"minus", p.minus},
          {"laplace_multiplicity", p.laplace_multiplicity},
          {"multiplicity", p.multiplicity},
          {"residual", p.residual}};
}

std::string fmt(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Geometry

Json to_json(const CurvatureProfile& p) {
  Json j;
  j["type"] = to_string(p.kind());
  switch (p.kind()) {
    case ProfileKind::zero: break;
    case ProfileKind::constant:
      j["kappa"] = p.amplitude();
      j["support"] = {p.support().lo, p.support().hi};
      break;
    case ProfileKind::gaussian:
      j["amplitude"] = p.amplitude();
      j["width"] = p.width();
      j["center"] = p.center();
      break;
    case ProfileKind::harmonic:
      j["base"] = p.amplitude();
      j["rel_amplitude"] = p.rel_amplitude();
      j["mode"] = p.mode();
      j["period"] = p.period();
      break;
    case ProfileKind::tabulated:
      j["s"] = p.samples_s();
      j["gamma"] = p.samples_gamma();
      break;
  }
  j["scale"] = p.scale();
  return j;
}

CurvatureProfile curvature_from_json(const Json& j) {
  Reader r(j, "curvature");
  CurvatureProfile p;
  switch (profile_kind_from_string(r.str("type"))) {
    case ProfileKind::zero: p = CurvatureProfile::zero(); break;
    case ProfileKind::constant: p = CurvatureProfile::constant(r.num("kappa"), r.interval("support")); break;
    case ProfileKind::gaussian:
      p = CurvatureProfile::gaussian(r.num("amplitude"), r.num("width"), r.num("center", 0.0));
      break;
    case ProfileKind::harmonic:
      p = CurvatureProfile::harmonic(r.num("base"), r.num("rel_amplitude"),
                                     static_cast<int>(r.integer("mode")), r.num("period"));
      break;
    case ProfileKind::tabulated: p = CurvatureProfile::tabulated(r.nums("s"), r.nums("gamma")); break;
  }
  const double scale = r.num("scale", 1.0);
  r.done();
  return scale == 1.0 ? p : p.scaled(scale);
}

Json to_json(const DeformationProfile& p) {
  Json j;
  j["type"] = to_string(p.kind());
  if (p.kind() == DeformationKind::tabulated) {
    j["x"] = p.samples_x();
    j["f"] = p.samples_f();
  } else {
    j["amplitude"] = p.amplitude();
    j["halfwidth"] = p.halfwidth();
    j["center"] = p.center();
  }
  return j;
}

DeformationProfile deformation_from_json(const Json& j) {
  Reader r(j, "profile");
  const std::string type = r.str("type");
  DeformationProfile p;
  if (type == "bump" || type == "wavelet") {
    const double a = r.num("amplitude"), w = r.num("halfwidth"), c = r.num("center", 0.0);
    p = type == "bump" ? DeformationProfile::bump(a, w, c) : DeformationProfile::wavelet(a, w, c);
  } else if (type == "tabulated") {
    p = DeformationProfile::tabulated(r.nums("x"), r.nums("f"));
  } else {
    r.fail("unknown deformation profile type '" + type + "'");
  }
  r.done();
  return p;
}

Json to_json(const CrossSection2D& s) {
  Json j = Json::object();
  write_section(j, s);
  return j;
}

CrossSection2D section_from_json(const Json& j) {
  Reader r(j, "section");
  CrossSection2D s = read_section(r);
  r.done();
  return s;
}

Json to_json(const DomainSpec& spec) {
  Json j;
  j["kind"] = geometry_kind(spec);
  j["unit"] = spec.unit;
  if (const auto* g = std::get_if<BentStrip>(&spec.geometry)) {
    j["curvature"] = to_json(g->curvature);
    j["halfwidth"] = g->halfwidth;
  } else if (const auto* g = std::get_if<DeformedStrip>(&spec.geometry)) {
    j["width"] = g->width;
    j["profile"] = to_json(g->profile);
    j["beta"] = g->beta;
  } else if (const auto* g = std::get_if<CoupledStrips>(&spec.geometry)) {
    j["width_upper"] = g->width_upper;
    j["width_lower"] = g->width_lower;
    j["window"] = g->window;
  } else if (const auto* g = std::get_if<LShape>(&spec.geometry)) {
    j["width"] = g->width;
  } else if (const auto* g = std::get_if<Cross>(&spec.geometry)) {
    j["width"] = g->width;
  } else if (const auto* g = std::get_if<LoopStrip>(&spec.geometry)) {
    j["curvature"] = to_json(g->curvature);
    j["length"] = g->length;
    j["halfwidth"] = g->halfwidth;
  } else if (const auto* g = std::get_if<CrossSection2D>(&spec.geometry)) {
    write_section(j, *g);
  } else if (const auto* g = std::get_if<TwistedFiber>(&spec.geometry)) {
    j["section"] = to_json(g->section);
    j["twist_rate"] = g->twist_rate;
  }
  return j;
}

DomainSpec domain_from_json(const Json& j) {
  Reader r(j, "domain");
  const std::string kind = r.str("kind");
  require_supported_geometry(kind);
  DomainSpec spec;
  spec.unit = r.str("unit", "1");
  if (kind == "bent_strip") {
    spec.geometry = BentStrip{curvature_from_json(r.at("curvature")), r.num("halfwidth")};
  } else if (kind == "deformed_strip") {
    spec.geometry = DeformedStrip{r.num("width"), deformation_from_json(r.at("profile")), r.num("beta")};
  } else if (kind == "coupled_strips") {
    spec.geometry = CoupledStrips{r.num("width_upper"), r.num("width_lower"), r.num("window")};
  } else if (kind == "l_shape") {
    spec.geometry = LShape{r.num("width")};
  } else if (kind == "cross") {
    spec.geometry = Cross{r.num("width")};
  } else if (kind == "loop_strip") {
    spec.geometry = LoopStrip{curvature_from_json(r.at("curvature")), r.num("length"), r.num("halfwidth")};
  } else if (kind == "cross_section") {
    spec.geometry = read_section(r);
  } else if (kind == "twisted_fiber") {
    spec.geometry = TwistedFiber{section_from_json(r.at("section")), r.num("twist_rate")};
  }
  r.done();
  return spec;
}

// ---------------------------------------------------------------------------
// Settings

Json to_json(const SolverSettings& s) {
  return {{"h", s.grid.h},
          {"h_along", s.grid.h_along},
          {"grading", s.grid.grading},
          {"h_max", s.grid.h_max},
          {"h_max_cross", s.grid.h_max_cross},
          {"margin", s.grid.margin},
          {"sector", to_string(s.grid.sector)},
          {"n_phi", s.grid.n_phi},
          {"truncation", s.truncation},
          {"k", s.k},
          {"tol", s.tol},
          {"seed", s.seed},
          {"refine", s.refine},
          {"gap_guess", s.gap_guess},
          {"count", s.count},
          {"dim", s.dim}};
}

SolverSettings solver_from_json(const Json& j) {
  Reader r(j, "solver");
  SolverSettings s;
  s.grid.h = r.num("h");
  s.grid.h_along = r.num("h_along", 0.0);
  s.grid.grading = r.num("grading", 1.0);
  s.grid.h_max = r.num("h_max", 0.0);
  s.grid.h_max_cross = r.num("h_max_cross", 0.0);
  s.grid.margin = r.num("margin", 0.0);
  s.grid.sector = sector_from_string(r.str("sector", "full"));
  s.grid.n_phi = static_cast<int>(r.integer("n_phi", 0));
  s.truncation = r.num("truncation", 0.0);
  s.k = static_cast<int>(r.integer("k", 1));
  s.tol = r.num("tol", 1e-8);
  s.seed = r.unsigned_integer("seed", kDefaultSeed);
  s.refine = static_cast<int>(r.integer("refine", 0));
  s.gap_guess = r.num("gap_guess", 0.0);
  s.count = r.flag("count", true);
  s.dim = static_cast<int>(r.integer("dim", 2));
  r.done();
  s.validate();
  return s;
}

Json to_json(const UnitSystem& u) {
  return {{"m", u.m}, {"c", u.c}, {"hbar", u.hbar}};
}

UnitSystem units_from_json(const Json& j) {
  Reader r(j, "units");
  UnitSystem u;
  u.m = r.num("m", 0.0);
  u.c = r.num("c", 1.0);
  u.hbar = r.num("hbar", 1.0);
  r.done();
  u.validate();
  return u;
}

Json to_json(const SweepSettings& s) {
  return {{"parameter", s.parameter},
          {"values", s.values},
          {"expected_exponent", s.expected_exponent},
          {"h_per_value", s.h_per_value},
          {"decay_factor", s.decay_factor}};
}

SweepSettings sweep_from_json(const Json& j) {
  Reader r(j, "study");
  SweepSettings s;
  r.str("type", "sweep");
  s.parameter = r.str("parameter");
  s.values = r.nums("values");
  s.expected_exponent = r.num("expected_exponent", 0.0);
  s.h_per_value = r.num("h_per_value", 0.0);
  s.decay_factor = r.num("decay_factor", 8.0);
  r.done();
  s.validate();
  return s;
}

// ---------------------------------------------------------------------------
// Results

Json to_json(const Extrapolation& e) {
  Json flagged = Json::array();
  for (bool f : e.flagged) flagged.push_back(f);
  return {{"values", e.values}, {"observed_order", e.observed_order}, {"flagged", flagged}, {"grids", e.grids}};
}

Json to_json(const EigResult& r) {
  Json j = {{"eigenvalues", r.eigenvalues}, {"residuals", r.residuals}, {"iterations", r.iterations},
            {"h", r.h},                     {"truncation", r.truncation}, {"seed", r.seed},
            {"shift", r.shift}};
  j["extrapolated"] = r.extrapolated ? to_json(*r.extrapolated) : Json(nullptr);
  return j;
}

Json to_json(const SolveReport& r) {
  Json levels = Json::array();
  std::vector<double> hs;
  for (const LevelResult& l : r.levels) {
    Json lj = to_json(l.eig);
    lj.erase("extrapolated");
    lj["discrete_threshold"] = opt(l.discrete_threshold);
    lj["count_below_threshold"] = opt(l.count_below_threshold);
    lj["unknowns"] = l.unknowns;
    levels.push_back(lj);
    hs.push_back(l.eig.h);
  }
  Json j;
  j["kind"] = r.kind;
  j["levels"] = levels;
  j["eigenvalues"] = reported_eigenvalues(r);
  j["extrapolation"] = r.best.extrapolated ? to_json(*r.best.extrapolated) : Json(nullptr);
  j["threshold"] = opt(r.threshold);
  j["gaps"] = r.gaps;
  j["gap_extrapolation"] = r.gap_extrapolation ? to_json(*r.gap_extrapolation) : Json(nullptr);
  j["dirac"] = to_json(r.dirac);
  Json prov;
  prov["h"] = hs;
  prov["truncation"] = r.best.truncation;
  prov["seed"] = r.best.seed;
  prov["extrapolation_order"] =
      r.best.extrapolated ? Json(r.best.extrapolated->observed_order) : Json(nullptr);
  j["provenance"] = prov;
  return j;
}

Json to_json(const DiracSpectrum& d) {
  Json bands = Json::array();
  for (const Band& b : d.essential.bands)
    bands.push_back({{"lo", b.lo_infinite ? Json(nullptr) : Json(b.lo)},
                     {"hi", b.hi_infinite ? Json(nullptr) : Json(b.hi)},
                     {"lo_infinite", b.lo_infinite},
                     {"hi_infinite", b.hi_infinite}});
  Json essential = {{"laplace_threshold", opt(d.essential.laplace_threshold)},
                    {"threshold", opt(d.essential.threshold)},
                    {"bands", bands},
                    {"mass_point", d.essential.mass_point},
                    {"mass_point_note", d.essential.mass_point_note}};
  Json units = to_json(d.units);
  units["rest_energy"] = d.units.rest_energy();
  units["laplace_unit"] = "1/length^2";
  units["energy_unit"] = "hbar c / length";
  auto list = [](const std::vector<DiracPair>& v) {
    Json a = Json::array();
    for (const DiracPair& p : v) a.push_back(pair_json(p));
    return a;
  };
  return {{"dim", d.dim},
          {"units", units},
          {"essential", essential},
          {"discrete", list(d.discrete)},
          {"near_threshold", list(d.near_threshold)},
          {"excluded", list(d.excluded)}};
}

Json to_json(const AsymptoticPrediction& p) {
  Json ingredients = Json::object();
  for (const auto& [name, value] : p.ingredients) ingredients[name] = value;
  return {{"kind", p.kind},
          {"quantity", p.quantity},
          {"value", p.value},
          {"ingredients", ingredients},
          {"modes", p.modes},
          {"terms", p.terms},
          {"n_max", p.n_max},
          {"quadrature_error", p.quadrature_error},
          {"tail_estimate", p.tail_estimate},
          {"validity", p.validity},
          {"verdict", p.verdict},
          {"flags", p.flags}};
}

Json to_json(const LinearFit& f) {
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"slope_stderr", f.slope_stderr},
          {"intercept_stderr", f.intercept_stderr},
          {"residual_rms", f.residual_rms},
          {"points", f.points}};
}

Json to_json(const PowerLawFit& f) {
  return {{"exponent", f.exponent},
          {"stderr_exponent", f.stderr_exponent},
          {"half_width_95", f.half_width},
          {"coefficient", f.coefficient},
          {"log_coefficient_stderr", f.log_coefficient_stderr},
          {"expected", f.expected},
          {"used", f.used},
          {"excluded", f.excluded}};
}

Json to_json(const SweepReport& r) {
  Json points = Json::array();
  for (const SweepPoint& p : r.points) {
    points.push_back({{"x", p.x},
                      {"eigenvalue", opt(p.eigenvalue)},
                      {"gap", opt(p.gap)},
                      {"threshold", opt(p.threshold)},
                      {"count", opt(p.count)},
                      {"truncation", p.truncation},
                      {"h", p.h},
                      {"censored", p.censored},
                      {"prediction", p.prediction ? to_json(*p.prediction) : Json(nullptr)},
                      {"predicted_gap", opt(p.predicted_gap)},
                      {"literal_gap", opt(p.literal_gap)},
                      {"solve", to_json(p.solve)}});
  }
  return {{"parameter", r.parameter},
          {"kind", r.kind},
          {"points", points},
          {"censored", r.censored},
          {"fit", r.fit ? to_json(*r.fit) : Json(nullptr)}};
}

Json to_json(const LoopComparison& c) {
  auto one = [](const LoopCase& l) {
    return Json{{"label", l.label},
                {"lambda1", l.lambda1},
                {"lambda1_finest", l.lambda1_finest},
                {"solve", to_json(l.solve)}};
  };
  Json loops = Json::array();
  for (const LoopCase& l : c.loops) loops.push_back(one(l));
  return {{"length", c.length},
          {"halfwidth", c.halfwidth},
          {"annulus", one(c.annulus)},
          {"annulus_oracle", c.annulus_oracle},
          {"loops", loops},
          {"annulus_maximal", c.annulus_maximal}};
}

Json to_json(const FiberStudy& s) {
  Json cases = Json::array();
  for (const FiberCase& c : s.cases)
    cases.push_back({{"twist_rate", c.twist_rate},
                     {"levels", c.levels},
                     {"value", c.value},
                     {"error_estimate", c.error_estimate}});
  return {{"section", to_json(s.section)}, {"cases", cases}};
}

Json to_json(const Adjudication& a) {
  auto one = [](const CoefficientFit& c) {
    return Json{{"beta", c.beta}, {"gap", c.gap}, {"fit", to_json(c.fit)}, {"mean", c.mean}};
  };
  return {{"first", one(a.first)},
          {"second", one(a.second)},
          {"mean_ratio", a.mean_ratio},
          {"ratio", a.ratio},
          {"ratio_stderr", a.ratio_stderr},
          {"z_linear", a.z_linear},
          {"z_quadratic", a.z_quadratic},
          {"verdict", a.verdict}};
}

std::string eigen_table_csv(const DiracSpectrum& d) {
  std::ostringstream os;
  os << "lambda_laplace,lambda_dirac_plus,lambda_dirac_minus,multiplicity,residual,class\n";
  auto rows = [&](const std::vector<DiracPair>& v, const char* cls) {
    for (const DiracPair& p : v)
      os << fmt(p.laplace) << ',' << fmt(p.plus) << ',' << fmt(p.minus) << ',' << p.multiplicity << ','
         << fmt(p.residual) << ',' << cls << '\n';
  };
  rows(d.discrete, "discrete");
  rows(d.near_threshold, "near_threshold");
  rows(d.excluded, "excluded");
  return os.str();
}

std::string sweep_table_csv(const SweepReport& r) {
  std::ostringstream os;
  os << "x,eigenvalue,gap,count,censored,predicted_gap,literal_gap,truncation,h\n";
  auto o = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
  for (const SweepPoint& p : r.points)
    os << fmt(p.x) << ',' << o(p.eigenvalue) << ',' << o(p.gap) << ','
       << (p.count ? std::to_string(*p.count) : std::string()) << ',' << (p.censored ? 1 : 0) << ','
       << o(p.predicted_gap) << ',' << o(p.literal_gap) << ',' << fmt(p.truncation) << ',' << fmt(p.h)
       << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Run configuration

std::string to_string(StudyKind kind) {
  switch (kind) {
    case StudyKind::sweep: return "sweep";
    case StudyKind::loops: return "loops";
    case StudyKind::fiber: return "fiber";
    case StudyKind::adjudicate: return "adjudicate";
  }
  return "unknown";
}

OutputFormat format_from_string(const std::string& name) {
  if (name == "json") return OutputFormat::json;
  if (name == "csv") return OutputFormat::csv;
  if (name == "both") return OutputFormat::both;
  throw ConfigError("unknown output format '" + name + "' (json, csv or both)");
}

void RunConfig::validate() const {
  solver.validate();
  units.validate();
  if (command != "solve" && command != "study") throw ConfigError("command must be solve or study");
  if (command == "solve" && !domain) throw ConfigError("solve needs a domain");
  if (command == "study") {
    if (!study) throw ConfigError("study needs a study block");
    switch (study->kind) {
      case StudyKind::sweep:
        if (!domain) throw ConfigError("sweep needs a domain");
        study->sweep.validate();
        with_parameter(*domain, study->sweep.parameter, study->sweep.values.front());
        break;
      case StudyKind::loops:
        if (!(study->loops.radius > study->loops.halfwidth) || !(study->loops.halfwidth > 0.0))
          throw ConfigError("loops need radius > halfwidth > 0");
        if (study->loops.modes.empty()) throw ConfigError("loops need at least one mode");
        break;
      case StudyKind::fiber:
        if (!domain || !(std::holds_alternative<CrossSection2D>(domain->geometry) ||
                         std::holds_alternative<TwistedFiber>(domain->geometry)))
          throw ConfigError("fibre study needs a cross_section or twisted_fiber domain");
        if (study->twist_rates.empty()) throw ConfigError("fibre study needs twist_rates");
        break;
      case StudyKind::adjudicate: {
        const auto& b = study->adjudicate.betas;
        if (b.size() < 4) throw ConfigError("adjudication needs at least 4 betas");
        for (std::size_t i = 0; i < b.size(); ++i)
          if (!(b[i] > 0.0) || (i > 0 && !(b[i] > b[i - 1])))
            throw ConfigError("adjudication betas must be positive and increasing");
        if (!(study->adjudicate.width > 0.0)) throw ConfigError("adjudication width must be > 0");
        break;
      }
    }
  }
}

RunConfig config_from_json(const Json& j) {
  Reader r(j, "config");
  const std::string schema = r.str("schema", kConfigSchema);
  if (schema != kConfigSchema) r.fail("unsupported schema '" + schema + "' (expected " + kConfigSchema + ")");
  RunConfig c;
  c.command = r.str("command", "");
  if (r.has("domain")) c.domain = domain_from_json(r.at("domain"));
  else r.allow("domain");
  c.solver = solver_from_json(r.at("solver"));
  if (r.has("units")) c.units = units_from_json(r.at("units"));
  else r.allow("units");
  if (r.has("study")) {
    const Json& sj = r.at("study");
    if (!sj.is_object()) r.fail("'study' must be an object");
    const std::string type = sj.value("type", std::string("sweep"));
    StudyConfig st;
    if (type == "sweep") {
      st.kind = StudyKind::sweep;
      st.sweep = sweep_from_json(sj);
    } else if (type == "loops") {
      Reader s(sj, "study");
      s.str("type");
      st.kind = StudyKind::loops;
      st.loops.radius = s.num("radius");
      st.loops.halfwidth = s.num("halfwidth");
      st.loops.eps = s.num("eps");
      st.loops.modes = s.ints("modes");
      s.done();
    } else if (type == "fiber") {
      Reader s(sj, "study");
      s.str("type");
      st.kind = StudyKind::fiber;
      st.twist_rates = s.nums("twist_rates");
      s.done();
    } else if (type == "adjudicate") {
      Reader s(sj, "study");
      s.str("type");
      st.kind = StudyKind::adjudicate;
      const Json& profiles = s.at("profiles");
      if (!profiles.is_array() || profiles.size() != 2) s.fail("'profiles' must hold two profiles");
      st.adjudicate.first = deformation_from_json(profiles[0]);
      st.adjudicate.second = deformation_from_json(profiles[1]);
      st.adjudicate.width = s.num("width");
      st.adjudicate.betas = s.nums("betas");
      s.done();
    } else {
      r.fail("unknown study type '" + type + "'");
    }
    c.study = std::move(st);
  } else {
    r.allow("study");
  }
  if (r.has("output")) {
    Reader o(r.at("output"), "output");
    c.out_dir = o.str("dir", ".");
    c.stem = o.str("stem", "result");
    c.format = format_from_string(o.str("format", "both"));
    o.done();
  } else {
    r.allow("output");
  }
  r.done();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

}  // namespace zzspec
