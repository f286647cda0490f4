// cdkit: command-line front end for the curvature and inequality checks.
//
// Every subcommand writes a JSON report (--emit PATH, "-" for stdout) and
// prints one verdict line. Exit status: 0 all checks passed, 1 a checked
// inequality failed, 2 usage or input error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cdkit/batteries.hpp"
#include "cdkit/curvature.hpp"
#include "cdkit/democratic.hpp"
#include "cdkit/error.hpp"
#include "cdkit/generators.hpp"
#include "cdkit/gh.hpp"
#include "cdkit/inequalities.hpp"
#include "cdkit/io.hpp"
#include "cdkit/parallel.hpp"
#include "cdkit/transport.hpp"

using namespace cdkit;

namespace {

struct Config {
  std::string space = "";
  std::string mode = "exact";
  std::string emit;
  int steps = kDefaultSteps;
  bool steps_given = false;
  std::uint64_t seed = 0;
  std::string mu0 = "uniform";
  std::string mu1 = "uniform";
  std::string ball = "all";
  std::string K = "0";
  std::string N = "inf";
  std::string h;
  double lambda = 2.0;
  std::string C;
  std::string P;
  double tolerance = 1e-9;
  double slack = 0.1;
  std::string functionals;
  std::string quadrature = "uniform";
  double defect_tolerance = 0.0;
  std::size_t samples = 200;
  std::string field;
  std::string dims = "1.5,2,3,10";
  std::string levels;
  std::string target;
  std::string csv;
  double c_bound = 2.25;
  double required_decrease = 0.3;
  std::string embedding_N;
  std::string d = "1";
  std::string tol_geo;
};

struct Outcome {
  Json report;
  std::string verdict;
  bool passed = true;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

double parse_number(const std::string& text, const char* flag) {
  if (text == "inf" || text == "infinity") return kInfinity;
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw InputError(std::string("bad value for ") + flag + ": '" + text + "'");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, sep))
    if (!part.empty()) out.push_back(part);
  return out;
}

Arithmetic mode_of(const Config& c) {
  if (c.mode == "exact") return Arithmetic::exact;
  if (c.mode == "float") return Arithmetic::floating;
  throw InputError("--mode must be exact or float");
}


GeneratedSpace load(const Config& c) {
  if (c.space.empty()) throw InputError("--space is required");
  SpaceSpec spec = SpaceSpec::parse(c.space);
  if (c.steps_given && spec.name != "file") spec.params["m"] = std::to_string(c.steps);
  return generate(spec);
}

// The generator's analytic atlas when it matches m and no enumeration
// tolerance was asked for, otherwise an enumerated one over supp(nu).
GeodesicAtlas atlas_for(const Config& c, const GeneratedSpace& g, int steps) {
  if (g.atlas && g.atlas->steps() == steps && c.tol_geo.empty()) return *g.atlas;
  EnumerationOptions opt;
  opt.steps = steps;
  if (!c.tol_geo.empty()) {
    opt.tolerance = parse_number(c.tol_geo, "--tol-geo");
    if (!(opt.tolerance >= 0.0)) throw InputError("--tol-geo must be nonnegative");
  }
  return enumerate_atlas(g.space, opt);
}

int steps_of(const Config& c, const GeneratedSpace& g) {
  if (c.steps_given) return c.steps;
  return g.atlas ? g.atlas->steps() : c.steps;
}

double gradient_radius(const Config& c, const MetricMeasureSpace& space) {
  if (c.h.empty()) return default_gradient_radius(space);
  double h = parse_number(c.h, "--h");
  if (!(h > 0.0)) throw InputError("--h must be positive");
  return h;
}

Json params_json(const Config& c, const GeneratedSpace& g) {
  Json p;
  p["space"] = c.space;
  p["points"] = g.space.size();
  p["mesh"] = g.space.mesh();
  p["mode"] = c.mode;
  p["seed"] = c.seed;
  if (!c.tol_geo.empty()) p["tol_geo"] = parse_number(c.tol_geo, "--tol-geo");
  return p;
}

Outcome cmd_validate(const Config& c) {
  auto g = load(c);
  auto rep = validate_space(g.space);
  Outcome o;
  o.report = report_json(rep);
  o.report["params"] = params_json(c, g);
  o.passed = rep.passed();
  if (o.passed) {
    o.verdict = "PASS validate: " + std::to_string(g.space.size()) + " points";
  } else {
    const auto& v = rep.violations.front();
    std::string w;
    for (Index i : v.witness) w += (w.empty() ? "" : ",") + std::to_string(i);
    o.verdict = std::string("FAIL validate: ") + to_string(v.kind) + " at (" + w + "): " + v.message;
  }
  return o;
}

Outcome cmd_w2(const Config& c) {
  auto g = load(c);
  TransportOptions opt;
  opt.mode = mode_of(c);
  auto mu0 = parse_measure(g.space, c.mu0), mu1 = parse_measure(g.space, c.mu1);
  auto res = solve_w2(g.space, mu0, mu1, opt);
  Outcome o;
  o.report = report_json(res);
  o.report["params"] = params_json(c, g);
  o.report["params"]["mu0"] = c.mu0;
  o.report["params"]["mu1"] = c.mu1;
  o.passed = res.certificate.certified;
  o.verdict = std::string(o.passed ? "PASS" : "FAIL") + " w2: W2 = " + fmt(res.distance) +
              " (cost " + to_string(res.cost) + ")";
  return o;
}

Quadrature quadrature_of(const Config& c) {
  if (c.quadrature == "uniform") return Quadrature::uniform;
  if (c.quadrature == "trapezoid") return Quadrature::trapezoid;
  throw InputError("--quadrature must be uniform or trapezoid");
}

Json report_header(const char* kind) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["report"] = kind;
  return j;
}

Outcome cmd_dm(const Config& c) {
  auto g = load(c);
  const int m = steps_of(c, g);
  const auto atlas = atlas_for(c, g, m);
  DmOptions opt;
  opt.mode = mode_of(c);
  opt.quadrature = quadrature_of(c);
  Outcome o;
  Json params = params_json(c, g);
  params["m"] = m;
  params["quadrature"] = c.quadrature;

  if (c.ball == "family") {
    std::vector<Ball> balls;
    for (auto& b : ball_family(g.space, radius_ladder(g.space)))
      if (b.mass > 0) balls.push_back(std::move(b));
    Rational C = c.C.empty() ? Rational(0) : parse_rational(c.C);
    auto ver = verify_dm(g.space, C, balls, atlas, opt);
    const double worst = ver.balls[ver.worst].c_star;
    o.report = report_header("dm_family");
    o.report["params"] = params;
    o.report["max_c_star"] = worst;
    o.report["worst_ball"] = ball_json(ver.balls[ver.worst].ball, g.space);
    Json rows = Json::array();
    for (const auto& b : ver.balls) {
      Json r;
      r["center"] = b.ball.center;
      r["radius"] = b.ball.radius;
      r["c_star"] = b.c_star;
      rows.push_back(std::move(r));
    }
    o.report["balls"] = std::move(rows);
    o.verdict = "dm: max C* = " + fmt(worst) + " over " + std::to_string(ver.balls.size()) + " balls";
    if (!c.C.empty()) {
      o.report["C"] = rational_json(C);
      o.report["passed"] = ver.passed;
      o.passed = ver.passed;
      o.verdict = std::string(o.passed ? "PASS " : "FAIL ") + o.verdict + " against C = " + c.C;
    }
    return o;
  }

  auto desc = BallDescriptor::parse(c.ball);
  Ball B = desc.whole ? whole_space_ball(g.space) : ball(g.space, desc.center, desc.radius);
  auto cert = dm_optimal_constant(g.space, B, atlas, opt);
  o.report = report_json(cert, g.space);
  o.report["params"] = params;
  if (!desc.whole) o.report["closed_ball_differs"] = closed_ball(g.space, B.center, B.radius).mass != B.mass;
  o.verdict = "dm: C* = " + fmt(cert.c_star_value()) + " (" + to_string(cert.c_star) + ")";
  if (!c.C.empty()) {
    Rational C = parse_rational(c.C);
    o.passed = cert.c_star <= C;
    o.report["C"] = rational_json(C);
    o.report["passed"] = o.passed;
    o.verdict += " against C = " + c.C;
  }
  if (c.N != "inf") {
    double N = parse_number(c.N, "--N");
    auto dens = density_bound_check(cert.plan, g.space, N, B.mass, c.slack);
    o.report["density_bound"] = report_json(dens);
    o.passed = o.passed && dens.passed;
    o.verdict += dens.passed ? ", density bound holds" : ", density bound fails";
  }
  o.verdict = std::string(o.passed ? "PASS " : "FAIL ") + o.verdict;
  return o;
}

std::vector<EntropyFunctional> battery_for(const Config& c, double N) {
  std::vector<EntropyFunctional> out;
  if (!c.functionals.empty()) {
    for (const auto& name : split(c.functionals, ';')) out.push_back(functional_by_name(name));
    return out;
  }
  for (double k : {1.5, 2.0, 3.0, 5.0, 10.0})
    if (k >= N) out.push_back(EntropyFunctional::sturm(k));
  if (N > 1.0 && N != 1.5 && N != 2.0 && N != 3.0 && N != 5.0 && N != 10.0)
    out.insert(out.begin(), EntropyFunctional::sturm(N));
  out.push_back(EntropyFunctional::boltzmann());
  out.push_back(EntropyFunctional::power(2.0));
  return out;
}

Outcome cmd_cd(const Config& c) {
  auto g = load(c);
  const int m = steps_of(c, g);
  const auto atlas = atlas_for(c, g, m);
  const double K = parse_number(c.K, "--K"), N = parse_number(c.N, "--N");
  CurvatureParams params{K, N};
  params.check();
  auto mu0 = parse_measure(g.space, c.mu0), mu1 = parse_measure(g.space, c.mu1);
  Json p = params_json(c, g);
  p["m"] = m;
  p["mu0"] = c.mu0;
  p["mu1"] = c.mu1;
  Outcome o;
  if (std::isinf(N)) {
    InftyOptions opt;
    opt.mode = mode_of(c);
    opt.tolerance = c.tolerance;
    opt.defect_tolerance = c.defect_tolerance;
    auto U = functional_by_name(c.functionals.empty() ? "Uinfty" : c.functionals);
    auto rep = verify_infty_convexity(g.space, K, mu0, mu1, U, atlas, opt);
    o.report = report_json(rep);
    o.report["params"] = p;
    o.report["params"]["tolerance"] = c.tolerance;
    o.passed = rep.passed;
    o.verdict = std::string(o.passed ? "PASS" : "FAIL") + " cd: " + U.name() + " convexity at K = " + fmt(K) +
                ", lambda = " + fmt(rep.lambda);
    if (!o.passed)
      for (const auto& ch : rep.checks)
        if (!ch.passed) {
          o.verdict += ", violated at t = " + fmt(ch.t);
          break;
        }
    return o;
  }
  CdOptions opt;
  opt.mode = mode_of(c);
  opt.tolerance = c.tolerance;
  auto rep = verify_cd(g.space, params, mu0, mu1, battery_for(c, N), atlas, opt);
  o.report = report_json(rep);
  o.report["params"] = p;
  if (K > 0.0 && N > 1.0) o.report["diameter_bound"] = report_json(diameter_bound_check(g.space, K, N));
  o.passed = rep.verdict == CdVerdict::certified;
  o.verdict = std::string(o.passed ? "PASS" : "FAIL") + " cd: " + to_string(rep.verdict) + " at (K, N) = (" +
              fmt(K) + ", " + fmt(N) + ")";
  if (const CdCheck* w = rep.witness())
    o.verdict += ", witness U = " + w->functional + ", t = " + fmt(w->t) + ", margin " + fmt(w->margin);
  return o;
}

Outcome cmd_poincare_local(const Config& c) {
  auto g = load(c);
  const double h = gradient_radius(c, g.space);
  const auto radii = radius_ladder(g.space);
  std::vector<Ball> balls;
  for (auto& b : ball_family(g.space, radii))
    if (b.mass > 0) balls.push_back(std::move(b));
  auto fields = field_battery(g);
  auto sweep = local_poincare_sweep(g.space, fields, balls, c.lambda, h);

  Outcome o;
  o.report = report_header("poincare_local_sweep");
  Json p = params_json(c, g);
  p["h"] = h;
  p["lambda"] = c.lambda;
  p["fields"] = fields.size();
  p["balls"] = balls.size();
  o.report["params"] = p;
  o.report["p_empirical"] = sweep.p_empirical;
  o.report["worst_field"] = sweep.worst_field;
  o.report["worst_ball"] = ball_json(balls[sweep.worst_ball], g.space);

  double P = 0.0;
  if (!c.P.empty()) {
    P = parse_number(c.P, "--P");
  } else {
    const int m = steps_of(c, g);
    const double D = doubling_constant(g.space, radii);
    double C = 0.0;
    if (!c.C.empty()) {
      C = parse_rational(c.C).get_d();
    } else {
      DmOptions opt;
      opt.mode = mode_of(c);
      auto ver = verify_dm(g.space, Rational(0), balls, atlas_for(c, g, m), opt);
      C = ver.balls[ver.worst].c_star;
    }
    P = 2.0 * C * D;
    o.report["c_star"] = C;
    o.report["doubling"] = D;
    o.report["m"] = m;
  }
  o.report["P"] = P;
  o.report["slack"] = c.slack;
  o.passed = sweep.p_empirical <= P * (1.0 + c.slack);
  o.report["passed"] = o.passed;
  o.verdict = std::string(o.passed ? "PASS" : "FAIL") + " poincare-local: P_empirical = " + fmt(sweep.p_empirical) +
              " against P = " + fmt(P);
  return o;
}

std::vector<double> chosen_field(const Config& c, const GeneratedSpace& g) {
  auto coords = coordinate_fields(g);
  std::string f = c.field;
  if (f.empty()) {
    if (coords.empty()) throw InputError("the space has no coordinates; pass --field d:<index>");
    return coords.back();
  }
  if (f.rfind("d:", 0) == 0) {
    Index p = std::stoul(f.substr(2));
    if (p >= g.space.size()) throw InputError("--field anchor out of range");
    std::vector<double> v(g.space.size());
    for (Index x = 0; x < g.space.size(); ++x) v[x] = g.space.d(p, x);
    return v;
  }
  const std::string names = "xyz";
  auto k = names.find(f);
  if (f.size() != 1 || k == std::string::npos || k >= coords.size())
    throw InputError("--field must be x, y, z (as available) or d:<index>");
  return coords[k];
}

Outcome cmd_poincare_global(const Config& c) {
  auto g = load(c);
  const double K = parse_number(c.K, "--K"), N = parse_number(c.N, "--N");
  const double h = gradient_radius(c, g.space);
  auto f = center_field(g.space, chosen_field(c, g));
  auto rep = global_poincare_check(g.space, N, K, f, h);
  auto sweep = rayleigh_sweep(g.space, c.samples, c.seed, h);
  Outcome o;
  o.report = report_json(rep);
  Json p = params_json(c, g);
  p["field"] = c.field.empty() ? "last coordinate" : c.field;
  p["samples"] = c.samples;
  p["slack"] = c.slack;
  o.report["params"] = p;
  Json s;
  s["samples"] = sweep.samples;
  s["seed"] = sweep.seed;
  s["max_ratio"] = sweep.max_ratio;
  s["argmax"] = sweep.argmax;
  s["passed"] = sweep.max_ratio <= rep.bound * (1.0 + c.slack);
  o.report["sweep"] = s;
  o.passed = rep.passed && s["passed"].get<bool>();
  o.verdict = std::string(o.passed ? "PASS" : "FAIL") + " poincare-global: ratio = " + fmt(rep.ratio) +
              ", sweep max = " + fmt(sweep.max_ratio) + ", bound = " + fmt(rep.bound);
  return o;
}

std::vector<double> density_of(const MetricMeasureSpace& space, const ProbMeasure& mu) {
  auto dec = lebesgue_decompose(space, mu);
  if (dec.singular_mass != 0) throw InputError("--mu0 must be absolutely continuous with respect to nu");
  return to_doubles(dec.density);
}

Outcome cmd_sobolev(const Config& c) {
  auto g = load(c);
  const double K = parse_number(c.K, "--K"), N = parse_number(c.N, "--N");
  const double h = gradient_radius(c, g.space);
  std::vector<double> rho;
  if (!c.field.empty() || c.mu0 == "uniform") {
    // Default: 1 + 0.1 * (last coordinate), renormalized.
    auto f = c.field.empty() ? coordinate_fields(g).back() : chosen_field(c, g);
    rho.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) rho[i] = 1.0 + 0.1 * f[i];
  } else {
    rho = density_of(g.space, parse_measure(g.space, c.mu0));
  }
  auto rep = sobolev_check_nonnegative(g.space, N, K, rho, h);
  Outcome o;
  o.report = report_json(rep);
  o.report["params"] = params_json(c, g);
  o.passed = rep.passed && rep.ordered;
  std::string extra;
  if (!c.embedding_N.empty()) {
    const double Ne = parse_number(c.embedding_N, "--embedding-N");
    auto coords = coordinate_fields(g);
    std::vector<double> f(g.space.size(), 1.0);
    if (!coords.empty())
      for (std::size_t i = 0; i < f.size(); ++i) f[i] = 1.0 + 0.2 * coords.back()[i];
    auto emb = sobolev_embedding_check(g.space, Ne, K, normalize_embedding_field(g.space, Ne, f), h);
    o.report["embedding"] = report_json(emb);
    o.passed = o.passed && emb.passed && emb.holder_passed;
    extra = ", embedding margin " + fmt(emb.margin);
  }
  o.verdict = std::string(o.passed ? "PASS" : "FAIL") + " sobolev: margin " + fmt(rep.margin) + ", relaxed margin " +
              fmt(rep.relaxed_margin) + (rep.ordered ? "" : ", right sides out of order") + extra;
  return o;
}

Outcome cmd_gh_stability(const Config& c) {
  if (c.levels.empty() || c.target.empty()) throw InputError("gh-stability needs --levels and --target");
  std::vector<SpaceSpec> levels;
  for (const auto& s : split(c.levels, ';')) levels.push_back(SpaceSpec::parse(s));
  StabilityOptions opt;
  opt.steps = c.steps_given ? c.steps : 8;
  opt.c_bound = c.c_bound;
  opt.required_decrease = c.required_decrease;
  opt.mode = mode_of(c);
  auto rep = dm_stability_experiment(levels, SpaceSpec::parse(c.target), BallDescriptor::parse(c.ball), opt);
  if (!c.csv.empty()) {
    std::ofstream out(c.csv);
    if (!out) throw InputError("cannot write '" + c.csv + "'");
    out << rep.to_csv();
  }
  Outcome o;
  o.report = report_json(rep);
  o.report["params"]["mode"] = c.mode;
  o.passed = rep.bounded && rep.decreasing;
  double worst = 0.0;
  for (const auto& l : rep.levels) worst = std::max(worst, l.c_star);
  o.verdict = std::string(o.passed ? "PASS" : "FAIL") + " gh-stability: max C* = " + fmt(worst) +
              ", W1 decrease " + fmt(100.0 * rep.w1_decrease) + "%";
  return o;
}

Outcome cmd_bounds(const Config& c) {
  if (c.samples < 1) throw InputError("--samples must be positive");
  std::vector<double> grid(c.samples), dims;
  const double pi = std::acos(-1.0);
  for (std::size_t k = 0; k < c.samples; ++k) grid[k] = pi * (k + 1) / (c.samples + 1);
  for (const auto& d : split(c.dims, ',')) dims.push_back(parse_number(d, "--dims"));
  auto rep = elementary_bounds_check(grid, dims);
  Outcome o;
  o.report = report_json(rep);
  // beta / tau table for the given (K, N, d).
  const double K = parse_number(c.K, "--K"), N = parse_number(c.N, "--N"), d = parse_number(c.d, "--d");
  const int m = c.steps;
  Json table = Json::array();
  for (int j = 0; j <= m; ++j) {
    double t = static_cast<double>(j) / m;
    Json row;
    row["t"] = t;
    double b = beta(K, N, t, d);
    row["beta"] = std::isfinite(b) ? Json(b) : Json("inf");
    if (!(std::isinf(N) && K != 0.0)) {
      double ta = tau(K, N, t, d);
      row["tau"] = std::isfinite(ta) ? Json(ta) : Json("inf");
    }
    table.push_back(std::move(row));
  }
  Json p;
  p["K"] = K;
  p["N"] = std::isfinite(N) ? Json(N) : Json("inf");
  p["d"] = d;
  p["m"] = m;
  p["samples"] = c.samples;
  o.report["params"] = p;
  o.report["coefficients"] = std::move(table);
  o.passed = rep.passed;
  o.verdict = std::string(o.passed ? "PASS" : "FAIL") + " bounds: min margins " + fmt(rep.min_margin_tan) + " (tan), " +
              fmt(rep.min_margin_sin) + " (sin) over " + std::to_string(rep.samples) + " points";
  return o;
}

void emit(const Config& c, const std::string& command, const Outcome& o) {
  const std::string text = o.report.dump(2) + "\n";
  if (c.emit == "-") {
    std::cout << text;
    std::cerr << o.verdict << "\n";
    return;
  }
  const std::string path = c.emit.empty() ? "cdkit-" + command + ".json" : c.emit;
  std::ofstream out(path);
  if (!out) throw InputError("cannot write report to '" + path + "'");
  out << text;
  std::cout << o.verdict << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cdkit: optimal-transport curvature and functional-inequality checks on finite spaces"};
  app.require_subcommand(1);
  Config c;

  auto common = [&](CLI::App* sub, bool needs_space = true) {
    sub->set_help_flag("--help", "print this help and exit");  // -h is the gradient radius
    if (needs_space) sub->add_option("--space", c.space, "generator spec (e.g. circle:n=16) or file:path.json")->required();
    sub->add_option("--mode", c.mode, "exact | float")->capture_default_str();
    sub->add_option("--emit", c.emit, "report path, '-' for stdout (default cdkit-<command>.json)");
    sub->add_option("--seed", c.seed, "seed for randomized helpers")->capture_default_str();
    sub->add_option_function<int>(
        "--m", [&](int m) {
          if (m < 1) throw CLI::ValidationError("--m", "must be positive");
          c.steps = m;
          c.steps_given = true;
        },
        "time steps of the grid t_j = j/m");
  };

  auto* validate = app.add_subcommand("validate", "check the metric-measure axioms");
  common(validate);

  auto* w2 = app.add_subcommand("w2", "2-Wasserstein distance with an LP certificate");
  common(w2);
  w2->add_option("--mu0", c.mu0, "measure: uniform | nu | delta:i | ball:i,r | density:file")->capture_default_str();
  w2->add_option("--mu1", c.mu1, "measure")->capture_default_str();

  auto* dm = app.add_subcommand("dm", "optimal democratic constant C* on a ball, or DM(C) verification");
  common(dm);
  dm->add_option("--tol-geo", c.tol_geo, "enumerate the atlas with this geodesic tolerance");
  dm->add_option("--ball", c.ball, "all | center,radius | family")->capture_default_str();
  dm->add_option("--C", c.C, "verify C* <= C (rational)");
  dm->add_option("--N", c.N, "dimension for the density bound check");
  dm->add_option("--slack", c.slack, "relative slack of the density bound")->capture_default_str();
  dm->add_option("--quadrature", c.quadrature, "uniform | trapezoid")->capture_default_str();

  auto* cd = app.add_subcommand("cd", "distorted displacement convexity along an optimal plan");
  common(cd);
  cd->add_option("--tol-geo", c.tol_geo, "enumerate the atlas with this geodesic tolerance");
  cd->add_option("--K", c.K, "curvature bound")->capture_default_str();
  cd->add_option("--N", c.N, "dimension bound (number or inf)")->capture_default_str();
  cd->add_option("--mu0", c.mu0, "measure")->capture_default_str();
  cd->add_option("--mu1", c.mu1, "measure")->capture_default_str();
  cd->add_option("--functionals", c.functionals, "';'-separated list, e.g. UN:N=2;Uinfty");
  cd->add_option("--tolerance", c.tolerance, "comparison tolerance")->capture_default_str();
  cd->add_option("--defect-tolerance", c.defect_tolerance, "relative slack on the N = inf defect term")
      ->capture_default_str();

  auto* pl = app.add_subcommand("poincare-local", "local Poincare sweep against P = 2 C* D");
  common(pl);
  pl->add_option("--tol-geo", c.tol_geo, "enumerate the atlas with this geodesic tolerance");
  pl->add_option("--lambda", c.lambda, "ball dilation")->capture_default_str();
  pl->add_option("--h", c.h, "gradient neighbourhood radius (default 2 mesh)");
  pl->add_option("--P", c.P, "Poincare constant to test (default 2 C* D)");
  pl->add_option("--C", c.C, "democratic constant to use instead of solving for it");
  pl->add_option("--slack", c.slack, "relative slack on P")->capture_default_str();

  auto* pg = app.add_subcommand("poincare-global", "sharp global Poincare inequality and a Rayleigh sweep");
  common(pg);
  pg->add_option("--K", c.K, "curvature bound")->capture_default_str();
  pg->add_option("--N", c.N, "dimension bound")->capture_default_str();
  pg->add_option("--h", c.h, "gradient neighbourhood radius (default 2 mesh)");
  pg->add_option("--field", c.field, "x | y | z | d:<index> (default last coordinate)");
  pg->add_option("--samples", c.samples, "random fields in the sweep")->capture_default_str();
  pg->add_option("--slack", c.slack, "relative slack for the sweep")->capture_default_str();

  auto* sob = app.add_subcommand("sobolev", "Sobolev inequality with its relaxed right side");
  common(sob);
  sob->add_option("--K", c.K, "curvature bound")->capture_default_str();
  sob->add_option("--N", c.N, "dimension bound")->capture_default_str();
  sob->add_option("--h", c.h, "gradient neighbourhood radius (default 2 mesh)");
  sob->add_option("--mu0", c.mu0, "measure whose density is tested (default 1 + 0.1 z)");
  sob->add_option("--field", c.field, "coordinate used for the default density");
  sob->add_option("--embedding-N", c.embedding_N, "also run the embedding inequality at this N > 2");

  auto* gh = app.add_subcommand("gh-stability", "C* and plan transport along a refinement sequence");
  common(gh, false);
  gh->add_option("--levels", c.levels, "';'-separated generator specs, coarsest first")->required();
  gh->add_option("--target", c.target, "target generator spec")->required();
  gh->add_option("--ball", c.ball, "all | center,radius in the target")->capture_default_str();
  gh->add_option("--c-bound", c.c_bound, "bound on every C*")->capture_default_str();
  gh->add_option("--required-decrease", c.required_decrease, "relative W1 decrease required")->capture_default_str();
  gh->add_option("--csv", c.csv, "also write the trend as CSV");

  auto* bounds = app.add_subcommand("bounds", "elementary trigonometric bounds and beta / tau tables");
  common(bounds, false);
  bounds->add_option("--samples", c.samples, "grid points in (0, pi)");
  bounds->add_option("--dims", c.dims, "comma-separated dimensions")->capture_default_str();
  bounds->add_option("--K", c.K, "K for the coefficient table")->capture_default_str();
  bounds->add_option("--N", c.N, "N for the coefficient table")->capture_default_str();
  bounds->add_option("--d", c.d, "distance for the coefficient table")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) return app.exit(e);
    std::cerr << "cdkit: " << e.what() << "\n\n" << app.help();
    return 2;
  }
  if (bounds->parsed() && bounds->count("--samples") == 0) c.samples = 10000;

  try {
    Outcome o;
    std::string name;
    if (validate->parsed()) o = cmd_validate(c), name = "validate";
    else if (w2->parsed()) o = cmd_w2(c), name = "w2";
    else if (dm->parsed()) o = cmd_dm(c), name = "dm";
    else if (cd->parsed()) o = cmd_cd(c), name = "cd";
    else if (pl->parsed()) o = cmd_poincare_local(c), name = "poincare-local";
    else if (pg->parsed()) o = cmd_poincare_global(c), name = "poincare-global";
    else if (sob->parsed()) o = cmd_sobolev(c), name = "sobolev";
    else if (gh->parsed()) o = cmd_gh_stability(c), name = "gh-stability";
    else o = cmd_bounds(c), name = "bounds";
    o.report["command"] = name;
    emit(c, name, o);
    return o.passed ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "cdkit: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "cdkit: " << e.what() << "\n";
    return 2;
  }
}
