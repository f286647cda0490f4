#include "cdkit/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "cdkit/error.hpp"

namespace cdkit {

namespace {

// Non-finite values have no JSON number form.
Json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Json nums(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

Json indices(const std::vector<Index>& v) {
  Json a = Json::array();
  for (Index i : v) a.push_back(i);
  return a;
}

bool is_exact_entry(const Json& v) { return v.is_string() || v.is_number_integer() || v.is_number_unsigned(); }

Rational read_rational(const Json& v, const char* what) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_number_unsigned()) return Rational(static_cast<unsigned long>(v.get<std::uint64_t>()));
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (!std::isfinite(d)) throw InputError(std::string(what) + " entry is not finite");
    return exact_rational(d);
  }
  throw InputError(std::string(what) + " entries must be numbers or rational strings");
}

const char* mode_name(Arithmetic m) { return m == Arithmetic::exact ? "exact" : "float"; }
const char* quadrature_name(Quadrature q) { return q == Quadrature::uniform ? "uniform" : "trapezoid"; }
const char* selection_name(LiftSelection s) { return s == LiftSelection::canonical ? "canonical" : "uniform_split"; }

Json header(const char* kind) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["report"] = kind;
  return j;
}

}  // namespace

GeneratedSpace space_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("space file must hold a JSON object");
  if (!j.contains("dist") || !j.contains("nu") || !j.contains("points"))
    throw InputError("space file needs 'points', 'dist' and 'nu'");
  std::vector<std::string> ids;
  const Json& pts = j.at("points");
  if (pts.is_number_unsigned() || pts.is_number_integer()) {
    long n = pts.get<long>();
    if (n < 1) throw InputError("'points' count must be positive");
    for (long i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  } else if (pts.is_array()) {
    for (const auto& p : pts) ids.push_back(p.is_string() ? p.get<std::string>() : p.dump());
  } else {
    throw InputError("'points' must be an array of ids or a count");
  }
  const std::size_t n = ids.size();
  const Json& dist = j.at("dist");
  if (!dist.is_array() || dist.size() != n) throw InputError("'dist' must be an n x n array");
  std::vector<double> d;
  std::vector<Rational> dq;
  bool dist_exact = true;
  for (const auto& row : dist) {
    if (!row.is_array() || row.size() != n) throw InputError("'dist' must be an n x n array");
    for (const auto& v : row) {
      dist_exact = dist_exact && is_exact_entry(v);
      dq.push_back(read_rational(v, "dist"));
      d.push_back(dq.back().get_d());
    }
  }
  const Json& nu = j.at("nu");
  if (!nu.is_array() || nu.size() != n) throw InputError("'nu' must have one entry per point");
  std::vector<Rational> w;
  bool nu_exact = true;
  for (const auto& v : nu) {
    nu_exact = nu_exact && is_exact_entry(v);
    w.push_back(read_rational(v, "nu"));
  }
  GeneratedSpace g;
  g.space = MetricMeasureSpace(std::move(ids), std::move(d), std::move(w), nu_exact,
                               dist_exact ? std::optional<std::vector<Rational>>(std::move(dq)) : std::nullopt);
  if (j.contains("atlas")) {
    const Json& a = j.at("atlas");
    int m = a.value("m", kDefaultSteps);
    if (m < 1) throw InputError("atlas 'm' must be positive");
    GeodesicAtlas atlas(m, AtlasProvenance::analytic);
    if (a.contains("pairs")) {
      for (const auto& [key, chains] : a.at("pairs").items()) {
        auto comma = key.find(',');
        if (comma == std::string::npos) throw InputError("atlas pair keys look like 'i,j'");
        Index x0 = std::stoul(key.substr(0, comma)), x1 = std::stoul(key.substr(comma + 1));
        std::vector<DiscreteGeodesic> list;
        for (const auto& c : chains) {
          auto chain = c.get<std::vector<Index>>();
          if (chain.size() != static_cast<std::size_t>(m) + 1) throw InputError("atlas chain for " + key + " has the wrong length");
          for (Index p : chain)
            if (p >= n) throw InputError("atlas chain for " + key + " leaves the space");
          if (chain.front() != x0 || chain.back() != x1) throw InputError("atlas chain for " + key + " has wrong endpoints");
          list.push_back(make_geodesic(g.space, std::move(chain)));
        }
        if (list.empty()) throw InputError("atlas entry " + key + " is empty");
        atlas.set(x0, x1, std::move(list));
      }
    }
    g.atlas = std::move(atlas);
  }
  return g;
}

GeneratedSpace load_space_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open space file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("cannot parse space file '" + path + "': " + e.what());
  }
  return space_from_json(j);
}

Json space_to_json(const MetricMeasureSpace& space, const GeodesicAtlas* atlas) {
  Json j;
  j["points"] = space.ids();
  Json dist = Json::array();
  for (Index i = 0; i < space.size(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < space.size(); ++k) {
      if (space.has_exact_distances())
        row.push_back(to_string(space.d_exact(i, k)));
      else
        row.push_back(space.d(i, k));
    }
    dist.push_back(std::move(row));
  }
  j["dist"] = std::move(dist);
  Json nu = Json::array();
  for (Index i = 0; i < space.size(); ++i) {
    if (space.has_exact_measure())
      nu.push_back(to_string(space.nu(i)));
    else
      nu.push_back(space.nu_value(i));
  }
  j["nu"] = std::move(nu);
  if (atlas) {
    Json a;
    a["m"] = atlas->steps();
    Json pairs = Json::object();
    for (const auto& [key, list] : atlas->entries()) {
      Json chains = Json::array();
      for (const auto& g : list) chains.push_back(g.chain);
      pairs[std::to_string(key.first) + "," + std::to_string(key.second)] = std::move(chains);
    }
    a["pairs"] = std::move(pairs);
    j["atlas"] = std::move(a);
  }
  return j;
}

Json rational_json(const Rational& q) {
  Json j;
  j["value"] = q.get_d();
  j["exact"] = to_string(q);
  return j;
}

Json measure_json(const ProbMeasure& mu) {
  Json j = Json::array();
  for (Index i : mu.support()) j.push_back(Json::array({i, to_string(mu[i])}));
  return j;
}

Json plan_json(const TransferencePlan& plan) {
  Json j = Json::array();
  for (const auto& e : plan.entries()) j.push_back(Json::array({e.from, e.to, to_string(e.mass)}));
  return j;
}

Json dynamical_plan_json(const DynamicalPlan& plan) {
  Json j;
  j["m"] = plan.steps();
  Json g = Json::array();
  for (const auto& wg : plan.geodesics()) {
    Json e;
    e["chain"] = wg.geodesic.chain;
    e["mass"] = to_string(wg.mass);
    g.push_back(std::move(e));
  }
  j["geodesics"] = std::move(g);
  return j;
}

Json ball_json(const Ball& b, const MetricMeasureSpace& space) {
  Json j;
  j["center"] = b.center;
  j["center_id"] = space.id(b.center);
  j["radius"] = num(b.radius);
  j["members"] = indices(b.members);
  j["mass"] = rational_json(b.mass);
  return j;
}

Json report_json(const ValidationReport& r) {
  Json j = header("validate");
  j["exact"] = r.exact;
  j["passed"] = r.passed();
  Json v = Json::array();
  for (const auto& x : r.violations) {
    Json e;
    e["kind"] = to_string(x.kind);
    e["message"] = x.message;
    e["witness"] = indices(x.witness);
    e["amount"] = num(x.amount);
    v.push_back(std::move(e));
  }
  j["violations"] = std::move(v);
  return j;
}

Json report_json(const TransportResult& r) {
  Json j = header("transport");
  j["mode"] = mode_name(r.certificate.mode);
  j["distance"] = num(r.distance);
  j["cost"] = rational_json(r.cost);
  j["plan"] = plan_json(r.plan);
  Json c;
  c["status"] = to_string(r.certificate.status);
  c["certified"] = r.certificate.certified;
  c["residual"] = num(r.certificate.residual);
  c["duality_gap"] = num(r.certificate.duality_gap);
  c["dual_infeasibility"] = num(r.certificate.dual_infeasibility);
  c["iterations"] = r.certificate.iterations;
  j["certificate"] = std::move(c);
  return j;
}

Json report_json(const DmCertificate& r, const MetricMeasureSpace& space) {
  Json j = header("dm");
  j["mode"] = mode_name(r.mode);
  j["quadrature"] = quadrature_name(r.quadrature);
  j["m"] = r.steps;
  j["ball"] = ball_json(r.ball, space);
  j["c_star"] = rational_json(r.c_star);
  j["argmax"] = r.argmax;
  j["lp_objective"] = num(r.lp_objective);
  j["lp_variables"] = r.lp_variables;
  j["lp_rows"] = r.lp_rows;
  j["ambiguous_mass"] = rational_json(r.ambiguous_mass);
  Json occ = Json::array();
  for (Index x = 0; x < r.occupation.size(); ++x)
    if (r.occupation[x] != 0) occ.push_back(Json::array({x, to_string(r.occupation[x])}));
  j["occupation"] = std::move(occ);
  j["plan"] = dynamical_plan_json(r.plan);
  return j;
}

Json report_json(const DensityBoundReport& r) {
  Json j = header("density_bound");
  j["N"] = num(r.dimension);
  j["slack"] = r.slack;
  j["passed"] = r.passed;
  Json rows = Json::array();
  for (const auto& x : r.rows) {
    Json e;
    e["j"] = x.j;
    e["t"] = x.t;
    e["max_density"] = num(x.max_density);
    e["threshold"] = num(x.threshold);
    e["margin"] = num(x.margin);
    e["passed"] = x.passed;
    rows.push_back(std::move(e));
  }
  j["rows"] = std::move(rows);
  return j;
}

Json report_json(const CdReport& r) {
  Json j = header("cd");
  j["K"] = r.params.K;
  j["N"] = num(r.params.N);
  j["m"] = r.steps;
  j["tolerance"] = r.tolerance;
  j["w2"] = num(r.w2);
  j["verdict"] = to_string(r.verdict);
  j["mu0"] = measure_json(r.mu0);
  j["mu1"] = measure_json(r.mu1);
  j["plan"] = plan_json(r.plan);
  Json plans = Json::array();
  for (const auto& p : r.plans) {
    Json e;
    e["selection"] = selection_name(p.selection);
    e["passed"] = p.passed;
    e["worst"] = p.worst;
    Json checks = Json::array();
    for (const auto& c : p.checks) {
      Json k;
      k["functional"] = c.functional;
      k["j"] = c.j;
      k["t"] = c.t;
      k["lhs"] = num(c.lhs);
      k["rhs"] = num(c.rhs);
      k["margin"] = num(c.margin);
      k["passed"] = c.passed;
      checks.push_back(std::move(k));
    }
    e["checks"] = std::move(checks);
    plans.push_back(std::move(e));
  }
  j["plans"] = std::move(plans);
  if (const CdCheck* w = r.witness()) {
    Json k;
    k["functional"] = w->functional;
    k["j"] = w->j;
    k["t"] = w->t;
    k["margin"] = num(w->margin);
    j["witness"] = std::move(k);
  }
  return j;
}

Json report_json(const InftyConvexityReport& r) {
  Json j = header("cd_infinity");
  j["K"] = r.K;
  j["functional"] = r.functional;
  j["lambda"] = num(r.lambda);
  j["w2"] = num(r.w2);
  j["defect_tolerance"] = r.defect_tolerance;
  j["selection"] = selection_name(r.selection);
  j["passed"] = r.passed;
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json k;
    k["j"] = c.j;
    k["t"] = c.t;
    k["lhs"] = num(c.lhs);
    k["chord"] = num(c.chord);
    k["defect"] = num(c.defect);
    k["rhs"] = num(c.rhs);
    k["margin"] = num(c.margin);
    k["passed"] = c.passed;
    checks.push_back(std::move(k));
  }
  j["checks"] = std::move(checks);
  return j;
}

Json report_json(const DiameterReport& r) {
  Json j = header("diameter_bound");
  j["diameter"] = num(r.diameter);
  j["bound"] = num(r.bound);
  j["margin"] = num(r.margin);
  j["passed"] = r.passed;
  return j;
}

Json report_json(const LocalPoincareReport& r) {
  Json j = header("poincare_local");
  j["lambda"] = r.lambda;
  j["P"] = num(r.constant);
  j["lhs"] = num(r.lhs);
  j["rhs"] = num(r.rhs);
  j["margin"] = num(r.margin);
  j["needed"] = num(r.needed);
  j["passed"] = r.passed;
  return j;
}

Json report_json(const GlobalPoincareReport& r) {
  Json j = header("poincare_global");
  j["N"] = r.N;
  j["K"] = r.K;
  j["h"] = r.h;
  j["l2"] = num(r.l2);
  j["energy"] = num(r.energy);
  j["ratio"] = num(r.ratio);
  j["bound"] = num(r.bound);
  j["margin"] = num(r.margin);
  j["passed"] = r.passed;
  return j;
}

Json report_json(const SobolevReport& r) {
  Json j = header("sobolev");
  j["N"] = r.N;
  j["K"] = r.K;
  j["h"] = r.h;
  j["lhs"] = num(r.lhs);
  j["rhs"] = num(r.rhs);
  j["rhs_relaxed"] = num(r.rhs_relaxed);
  j["margin"] = num(r.margin);
  j["relaxed_margin"] = num(r.relaxed_margin);
  j["ordered"] = r.ordered;
  j["passed"] = r.passed;
  return j;
}

Json report_json(const EmbeddingReport& r) {
  Json j = header("sobolev_embedding");
  j["N"] = r.N;
  j["K"] = r.K;
  j["h"] = r.h;
  j["lhs"] = num(r.lhs);
  j["rhs"] = num(r.rhs);
  j["margin"] = num(r.margin);
  j["holder_lhs"] = num(r.holder_lhs);
  j["holder_rhs"] = num(r.holder_rhs);
  j["holder_passed"] = r.holder_passed;
  j["passed"] = r.passed;
  return j;
}

Json report_json(const ElementaryBoundsReport& r) {
  Json j = header("elementary_bounds");
  j["dimensions"] = nums(r.dimensions);
  j["samples"] = r.samples;
  j["min_margin_tan"] = num(r.min_margin_tan);
  j["min_margin_sin"] = num(r.min_margin_sin);
  j["worst_x_tan"] = r.worst_x_tan;
  j["worst_x_sin"] = r.worst_x_sin;
  j["passed"] = r.passed;
  return j;
}

Json report_json(const StabilityReport& r) {
  Json j = header("gh_stability");
  j["target"] = r.target;
  j["ball"] = r.ball.whole ? Json("all") : Json(std::to_string(r.ball.center) + "," + std::to_string(r.ball.radius));
  j["m"] = r.steps;
  j["c_bound"] = r.c_bound;
  j["bounded"] = r.bounded;
  j["w1_decrease"] = num(r.w1_decrease);
  j["required_decrease"] = r.required_decrease;
  j["decreasing"] = r.decreasing;
  Json levels = Json::array();
  for (const auto& l : r.levels) {
    Json e;
    e["spec"] = l.spec;
    e["points"] = l.points;
    e["epsilon"] = num(l.epsilon);
    e["center"] = l.center;
    e["c_star"] = num(l.c_star);
    e["ambiguous_mass"] = rational_json(l.ambiguous_mass);
    e["closed_ball_differs"] = l.closed_ball_differs;
    e["max_lift_distance"] = num(l.max_lift_distance);
    e["endpoint_w1"] = num(l.endpoint_w1);
    e["max_time_w1"] = num(l.max_time_w1);
    levels.push_back(std::move(e));
  }
  j["levels"] = std::move(levels);
  return j;
}

}  // namespace cdkit
