#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stablekit/boundary.hpp"
#include "stablekit/fixtures.hpp"
#include "stablekit/homog.hpp"
#include "stablekit/integrability.hpp"
#include "stablekit/numerator.hpp"
#include "stablekit/numeric.hpp"
#include "stablekit/parse.hpp"
#include "stablekit/puiseux.hpp"
#include "stablekit/realization.hpp"
#include "stablekit/regularity.hpp"
#include "stablekit/report.hpp"
#include "stablekit/stability.hpp"

namespace fs = std::filesystem;
using namespace stablekit;
using report::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 64;

struct Flags {
  std::string den, num, fixture;
  std::string domain = "uhp";
  std::string center;
  int order = 12;
  int grid = 12;
  std::string t_list = "-1,0,1";
  std::string window = "0.1,1";
  std::string region;
  std::string exponents;
  std::string lambdas = "1";
  std::string points, horns, file;
  double slope = -1;
  int n0 = 0;
  int samples = 1000;
  bool check = false, split = false;
  bool json_out = false, pretty = false, timings = false;
  double tol = 1e-9;
  unsigned long seed = 1;
  int threads = 0;
};

class Timer {
 public:
  void stage(const std::string& name) {
    auto now = std::chrono::steady_clock::now();
    if (!current_.empty())
      times_[current_] = std::chrono::duration<double>(now - start_).count();
    current_ = name;
    start_ = now;
  }
  json finish() {
    stage("");
    json j = json::object();
    for (const auto& [k, v] : times_) j[k] = v;
    return j;
  }

 private:
  std::string current_;
  std::chrono::steady_clock::time_point start_;
  std::map<std::string, double> times_;
};

std::string read_input(const std::string& s) {
  if (!s.empty() && fs::is_regular_file(s)) {
    std::ifstream in(s);
    if (!in) throw std::runtime_error("cannot read " + s);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  return s;
}

std::vector<std::string> split(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& x : split(s)) out.push_back(std::stod(x));
  return out;
}

GaussRat parse_constant(const std::string& s) {
  Poly c = parse_poly(s);
  if (c.total_degree() > 0) throw std::invalid_argument("expected a constant, got " + s);
  return c.coeff(Exponent{});
}

std::vector<GaussRat> parse_center(const std::string& s, const std::vector<GaussRat>& fallback) {
  if (s.empty()) return fallback;
  auto parts = split(s);
  if (parts.size() != 2) throw std::invalid_argument("center needs two coordinates");
  return {parse_constant(parts[0]), parse_constant(parts[1])};
}

std::complex<double> parse_complex_pair(const std::string& s) {
  auto v = parse_list(s);
  if (v.size() == 1) return {v[0], 0};
  if (v.size() == 2) return {v[0], v[1]};
  throw std::invalid_argument("complex values are re or re:im");
}

struct Inputs {
  Poly p, q;
  bool has_q = false;
  Domain domain = Domain::HalfPlane;
};

Inputs load(const Flags& f) {
  Inputs in;
  std::string den = f.den, num = f.num;
  in.domain = parse_domain(f.domain);
  if (!f.fixture.empty()) {
    const auto& fx = fixtures::get(f.fixture);
    if (den.empty()) den = fx.den;
    if (num.empty()) num = fx.num;
    in.domain = fx.domain;
  }
  if (den.empty()) throw std::invalid_argument("--den is required");
  in.p = parse_poly(read_input(den));
  if (in.p.is_zero()) throw std::invalid_argument("zero polynomial");
  if (!num.empty()) {
    in.q = parse_poly(read_input(num));
    in.has_q = true;
  }
  return in;
}

// Local data in half-plane coordinates: disk inputs are rotated to (1,1) and
// mapped with the multidegree of p, so the local center becomes the origin.
struct Local {
  Poly P, Q;
  std::vector<GaussRat> center;
  std::vector<GaussRat> tau;
};

Local localize(const Inputs& in, const std::vector<GaussRat>& tau) {
  Local L;
  L.tau = tau;
  if (in.domain == Domain::HalfPlane) {
    L.P = in.p;
    L.Q = in.q;
    L.center = tau;
    return L;
  }
  if (tau[0].norm() != 1 || tau[1].norm() != 1)
    throw std::invalid_argument("disk centers must lie on the torus");
  auto n = in.p.with_nvars(2).multidegree();
  L.P = cayley_to_halfplane(rotate(in.p.with_nvars(2), tau), n);
  if (in.has_q) L.Q = cayley_to_halfplane(rotate(in.q.with_nvars(2), tau), n);
  L.center = {GaussRat(0), GaussRat(0)};
  return L;
}

std::vector<GaussRat> default_center(const Inputs& in) {
  if (in.domain == Domain::Disk) return {GaussRat(1), GaussRat(1)};
  return {GaussRat(0), GaussRat(0)};
}

json echo(const Flags& f, const Inputs& in) {
  json j = {{"den", to_string(in.p)}, {"domain", to_string(in.domain)}};
  if (in.has_q) j["num"] = to_string(in.q);
  if (!f.fixture.empty()) j["fixture"] = f.fixture;
  return j;
}

json tolerances(const Flags& f) {
  puiseux::Options po;
  stability::Options so;
  return {{"tol", report::number(f.tol)},
          {"puiseux_real_tol", report::number(po.real_tol)},
          {"puiseux_zero_tol", report::number(po.zero_tol)},
          {"stability_contact_tol", report::number(so.contact_tol)},
          {"quadrature", report::to_json(integrability::QuadratureParams{})}};
}

std::string pretty(const json& j, const std::string& prefix = "") {
  std::ostringstream os;
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object())
      os << pretty(*it, key);
    else
      os << key << ": " << it->dump() << "\n";
  }
  return os.str();
}

int emit(json out, const Flags& f, Timer& timer, int code) {
  if (f.timings) out["timings"] = timer.finish();
  out["version"] = report::kVersion;
  std::cout << (f.pretty ? pretty(out) : report::dump(out));
  return code;
}

puiseux::LocalFactorization factorize(const Local& L, int order) {
  puiseux::Options po;
  po.truncation = order;
  return puiseux::puiseux_factorize(L.P, L.center, po);
}

bool has_unclassified(const puiseux::LocalFactorization& f) {
  for (const auto& b : f.branches)
    if (b.type == puiseux::BranchType::Unclassified) return true;
  return false;
}

json local_homog(const Local& L) {
  auto norm = homog::normalize_lowest(L.P, L.center);
  int M = norm.decomposition.order;
  Poly A_M = norm.split.A.homogeneous_part(M);
  Poly B_next = norm.split.B.homogeneous_part(M + 1);
  json j = {{"M", M}, {"mu", report::complex(norm.mu)}, {"A_M", report::poly(A_M)},
            {"B_next", report::poly(B_next)}, {"decomposition", report::to_json(norm.decomposition)}};
  if (M >= 1) j["slopes_A"] = report::to_json(homog::tangent_slopes(A_M));
  if (M >= 1 && !B_next.is_zero()) {
    auto il = homog::interlacing_check(A_M, B_next);
    j["slopes_B"] = report::to_json(il.b);
    j["interlaced"] = il.holds;
    j["interlacing"] = report::to_json(il);
  }
  return j;
}

int cmd_stability(const Flags& f) {
  Timer timer;
  timer.stage("stability");
  Inputs in = load(f);
  stability::Options so;
  so.resolution = f.grid;
  auto r = stability::check_stable(in.p, in.domain, so);
  json out = {{"command", "stability"}, {"input", echo(f, in)}, {"tolerances", tolerances(f)}};
  out["stability"] = report::to_json(r);
  timer.stage("dichotomy");
  out["dichotomy"] = report::to_json(stability::dichotomy_split(in.p, in.domain));
  return emit(out, f, timer, r.verdict == stability::Verdict::Inconclusive ? kExitInconclusive : kExitOk);
}

int cmd_homog(const Flags& f) {
  Timer timer;
  timer.stage("homog");
  Inputs in = load(f);
  Local L = localize(in, parse_center(f.center, default_center(in)));
  json out = {{"command", "homog"}, {"input", echo(f, in)}, {"tolerances", tolerances(f)}};
  out["center"] = report::point(L.tau);
  out["homog"] = local_homog(L);
  return emit(out, f, timer, kExitOk);
}

int cmd_puiseux(const Flags& f) {
  Timer timer;
  timer.stage("puiseux");
  Inputs in = load(f);
  Local L = localize(in, parse_center(f.center, default_center(in)));
  auto fact = factorize(L, f.order);
  json out = {{"command", "puiseux"}, {"input", echo(f, in)}, {"tolerances", tolerances(f)}};
  out["center"] = report::point(L.tau);
  out["puiseux"] = report::to_json(fact);
  return emit(out, f, timer, has_unclassified(fact) ? kExitInconclusive : kExitOk);
}

json local_regularity(const Local& L, bool has_q, int k_max) {
  if (!has_q) return report::to_json(regularity::uco_regularity_crosscheck(L.P, L.center));
  auto r = regularity::analyze_regularity(L.Q, L.P, L.center, k_max);
  json j = report::to_json(r);
  if (r.limit && r.ck_order >= 0) {
    auto fan = regularity::jet_fan_check(L.Q, L.P, r);
    j["fan_bounded"] = fan.bounded;
  }
  return j;
}

int cmd_regularity(const Flags& f) {
  Timer timer;
  timer.stage("regularity");
  Inputs in = load(f);
  Local L = localize(in, parse_center(f.center, default_center(in)));
  json out = {{"command", "regularity"}, {"input", echo(f, in)}, {"tolerances", tolerances(f)}};
  out["center"] = report::point(L.tau);
  out["regularity"] = local_regularity(L, in.has_q, f.order);
  return emit(out, f, timer, kExitOk);
}

int cmd_numerator(const Flags& f) {
  Timer timer;
  timer.stage("numerator");
  Inputs in = load(f);
  if (!in.has_q) throw std::invalid_argument("--num is required");
  Local L = localize(in, parse_center(f.center, default_center(in)));
  auto r = numerator::is_locally_bounded(L.Q, L.P, L.center);
  json out = {{"command", "numerator"}, {"input", echo(f, in)}, {"tolerances", tolerances(f)}};
  out["center"] = report::point(L.tau);
  out["numerator"] = report::to_json(r);
  return emit(out, f, timer, r.verdict == numerator::Verdict::Unknown ? kExitInconclusive : kExitOk);
}

int cmd_integrability(const Flags& f) {
  Timer timer;
  timer.stage("indices");
  Inputs in = load(f);
  if (in.domain != Domain::Disk) throw std::invalid_argument("integrability needs --domain disk");
  json out = {{"command", "integrability"}, {"input", echo(f, in)}, {"tolerances", tolerances(f)}};
  out["integrability"] = report::to_json(integrability::derivative_integrability_indices(in.p));
  int code = kExitOk;
  if (!f.exponents.empty()) {
    if (!in.has_q) throw std::invalid_argument("--exponents needs --num");
    timer.stage("quadrature");
    json est = json::array();
    for (const auto& e : integrability::integrability_cutoff_estimate(in.q, in.p, parse_list(f.exponents))) {
      if (e.verdict == integrability::Verdict::Borderline) code = kExitInconclusive;
      est.push_back(report::to_json(e));
    }
    out["quadrature"] = est;
  }
  return emit(out, f, timer, code);
}

boundary::Window parse_window(const std::string& s) {
  auto v = parse_list(s);
  if (v.size() != 2 || !(v[0] > 0) || !(v[1] > 0)) throw std::invalid_argument("window is r,R");
  return {v[0], v[1]};
}

int cmd_trace(const Flags& f) {
  Timer timer;
  timer.stage("trace");
  Inputs in = load(f);
  if (in.domain != Domain::HalfPlane) throw std::invalid_argument("trace works on --domain uhp");
  auto window = parse_window(f.window);
  int n = f.grid < 2 ? 2 : f.grid * 16;
  if (!f.region.empty()) {
    auto s = parse_list(f.region);
    if (s.size() != 2) throw std::invalid_argument("region is s1,s2");
    auto reg = boundary::level_region(in.p, s[0], s[1], window, f.grid * 4);
    json out = {{"command", "trace"}, {"input", echo(f, in)}, {"tolerances", tolerances(f)}};
    out["level_region"] = report::to_json(reg);
    return emit(out, f, timer, reg.certified ? kExitOk : kExitInconclusive);
  }
  auto traces = boundary::trace_level_sets(in.p, parse_list(f.t_list), window, n);
  if (!f.json_out) {
    std::cout << report::traces_csv(traces);
    return kExitOk;
  }
  json out = {{"command", "trace"}, {"input", echo(f, in)}, {"tolerances", tolerances(f)}};
  json arr = json::array();
  for (const auto& t : traces)
    arr.push_back({{"t", report::number(t.t)}, {"branches", t.branches}, {"points", t.points.size()}, {"dropped", t.dropped}});
  out["traces"] = arr;
  out["csv"] = report::traces_csv(traces);
  return emit(out, f, timer, kExitOk);
}

std::vector<boundary::Point> read_points(const std::string& path) {
  std::vector<boundary::Point> pts;
  std::istringstream in(read_input(path));
  std::string line;
  while (std::getline(in, line)) {
    auto v = split(line);
    if (v.size() < 2) continue;
    try {
      pts.push_back({std::stod(v[0]), std::stod(v[1])});
    } catch (const std::invalid_argument&) {
      continue;  // header
    }
  }
  return pts;
}

int cmd_horn(const Flags& f) {
  Timer timer;
  timer.stage("horn");
  std::vector<boundary::Horn> horns;
  if (!f.horns.empty()) {
    json hj = json::parse(read_input(f.horns));
    if (hj.is_object()) hj = json::array({hj});
    for (const auto& h : hj) horns.push_back(report::horn_from_json(h));
  }
  json out = {{"command", "horn"}, {"tolerances", tolerances(f)}};
  bool trapped = true;
  if (!f.points.empty()) {
    if (horns.empty()) throw std::invalid_argument("--points needs --horns");
    auto v = boundary::horn_classify(read_points(f.points), horns, f.n0);
    out["classification"] = report::to_json(v);
    trapped = v.trapped;
  } else {
    Inputs in = load(f);
    if (!in.has_q) throw std::invalid_argument("torus level sets need --num");
    auto tau = parse_center(f.center, {GaussRat(1), GaussRat(1)});
    double r = parse_window(f.window).r;
    json sets = json::array();
    for (const auto& lam : split(f.lambdas, ';')) {
      auto pts = boundary::trace_torus_level_set(in.q, in.p, parse_complex_pair(lam), tau, r);
      double B = boundary::fit_horn_constant(pts, boundary::HornKind::NonTrivial, f.slope, r);
      json s = {{"lambda", lam}, {"points", pts.size()}, {"fitted_B", report::number(B)}};
      if (!horns.empty()) {
        auto v = boundary::horn_classify(pts, horns, 0);
        s["trapped"] = v.trapped;
        trapped = trapped && v.trapped;
      }
      sets.push_back(s);
    }
    out["input"] = echo(f, in);
    out["center"] = report::point(tau);
    out["slope"] = report::number(f.slope);
    out["level_sets"] = sets;
  }
  json hs = json::array();
  for (const auto& h : horns) hs.push_back(report::horn_to_json(h));
  out["horns"] = hs;
  return emit(out, f, timer, trapped ? kExitOk : kExitInconclusive);
}

int cmd_realize(const Flags& f) {
  Timer timer;
  timer.stage("realize");
  if (f.file.empty()) throw std::invalid_argument("--file is required");
  auto R = report::realization_from_json(json::parse(read_input(f.file)));
  json out = {{"command", "realize"}, {"tolerances", tolerances(f)}};
  out["realization"] = report::realization_to_json(R);
  int code = kExitOk;
  if (f.check || !f.split) {
    auto v = realization::validate_pip(R, f.samples, f.seed);
    out["validation"] = report::to_json(v);
    if (!v.valid) code = kExitInconclusive;
  }
  if (f.split) {
    auto s = realization::local_split(R, f.tol);
    out["split"] = report::to_json(s);
    if (s.rank.ambiguous) code = kExitInconclusive;
  }
  return emit(out, f, timer, code);
}

int cmd_full(const Flags& f) {
  Timer timer;
  Inputs in = load(f);
  json out = {{"command", "full"}, {"input", echo(f, in)}, {"tolerances", tolerances(f)}};
  bool inconclusive = false;

  timer.stage("stability");
  stability::Options so;
  so.resolution = f.grid;
  auto st = stability::check_stable(in.p, in.domain, so);
  out["stability"] = report::to_json(st);
  inconclusive = inconclusive || st.verdict == stability::Verdict::Inconclusive;

  timer.stage("dichotomy");
  auto dich = stability::dichotomy_split(in.p, in.domain);
  out["dichotomy"] = report::to_json(dich);

  std::vector<std::vector<GaussRat>> centers;
  if (in.domain == Domain::Disk) {
    timer.stage("zeros");
    int unresolved = 0;
    if (dich.pure) centers = integrability::locate_torus_zeros(in.p, &unresolved);
    out["unresolved_zeros"] = unresolved;
    inconclusive = inconclusive || unresolved > 0;
  } else {
    centers.push_back(parse_center(f.center, default_center(in)));
  }

  json zeros = json::array();
  for (const auto& tau : centers) {
    json z = {{"center", report::point(tau)}};
    Local L = localize(in, tau);
    z["halfplane_den"] = report::poly(L.P);
    timer.stage("homog");
    z["homog"] = local_homog(L);
    timer.stage("puiseux");
    try {
      auto fact = factorize(L, f.order);
      z["puiseux"] = report::to_json(fact);
      inconclusive = inconclusive || has_unclassified(fact);
    } catch (const std::exception& e) {
      z["puiseux"] = {{"error", e.what()}};
      inconclusive = true;
    }
    timer.stage("regularity");
    z["regularity"] = local_regularity(L, in.has_q, f.order);
    if (in.has_q) {
      timer.stage("numerator");
      auto nb = numerator::is_locally_bounded(L.Q, L.P, L.center);
      z["numerator"] = report::to_json(nb);
      inconclusive = inconclusive || nb.verdict == numerator::Verdict::Unknown;
    }
    zeros.push_back(z);
  }
  out["zeros"] = zeros;

  if (in.domain == Domain::Disk && dich.pure) {
    timer.stage("integrability");
    out["integrability"] = report::to_json(integrability::derivative_integrability_indices(in.p));
  }
  return emit(out, f, timer, inconclusive ? kExitInconclusive : kExitOk);
}

void add_input(CLI::App* sub, Flags& f) {
  sub->add_option("--den", f.den, "denominator p: FILE or inline expression");
  sub->add_option("--num", f.num, "numerator q: FILE or inline expression");
  sub->add_option("--fixture", f.fixture, "built-in fixture name");
  sub->add_option("--domain", f.domain, "disk or uhp")->check(CLI::IsMember({"disk", "uhp"}));
  sub->add_option("--center", f.center, "center \"a,b\" (torus point for disk inputs)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local analysis of stable polynomials and rational functions on the bidisk and bi-upper half-plane"};
  app.require_subcommand(1);
  Flags f;
  app.add_flag("--json", f.json_out, "JSON output (default for reports)");
  app.add_flag("--pretty", f.pretty, "flattened key: value view of the JSON report");
  app.add_flag("--timings", f.timings, "include wall-clock times per stage");
  app.add_option("--tol", f.tol, "numerical tolerance");
  app.add_option("--seed", f.seed, "random seed");
  app.add_option("--threads", f.threads, "worker threads, 0 for hardware concurrency");

  std::map<std::string, std::function<int(const Flags&)>> handlers;
  auto add = [&](const std::string& name, const std::string& help, std::function<int(const Flags&)> h) {
    CLI::App* sub = app.add_subcommand(name, help);
    handlers[name] = std::move(h);
    sub->fallthrough();
    return sub;
  };

  auto* s = add("stability", "stability check and dichotomy split", cmd_stability);
  add_input(s, f);
  s->add_option("--grid", f.grid, "radial levels per outer variable");

  add_input(add("homog", "homogeneous decomposition, tangents and interlacing", cmd_homog), f);

  s = add("puiseux", "Puiseux factorization at the center", cmd_puiseux);
  add_input(s, f);
  s->add_option("--order", f.order, "truncation order in z1");

  s = add("regularity", "non-tangential regularity of q/p", cmd_regularity);
  add_input(s, f);
  s->add_option("--order", f.order, "largest homogeneous degree examined");

  add_input(add("numerator", "boundedness of q/p near the center", cmd_numerator), f);

  s = add("integrability", "derivative integrability indices", cmd_integrability);
  add_input(s, f);
  s->add_option("--exponents", f.exponents, "exponents for the quadrature estimate");

  s = add("trace", "level sets of A - tB near the origin", cmd_trace);
  add_input(s, f);
  s->add_option("--t", f.t_list, "comma separated t values");
  s->add_option("--window", f.window, "r,R");
  s->add_option("--grid", f.grid, "grid density");
  s->add_option("--region", f.region, "s1,s2 level region instead of traces");

  s = add("horn", "horn membership of points or torus level sets", cmd_horn);
  add_input(s, f);
  s->add_option("--points", f.points, "CSV of x1,x2 rows");
  s->add_option("--horns", f.horns, "horn specs: JSON object or array");
  s->add_option("--n0", f.n0, "first index considered");
  s->add_option("--lambda", f.lambdas, "level values re[,im] separated by ';'");
  s->add_option("--slope", f.slope, "horn slope for the fitted constant");
  s->add_option("--window", f.window, "r,R; r bounds the torus angles");

  s = add("realize", "PIP realization checks", cmd_realize);
  s->add_option("--file", f.file, "realization JSON");
  s->add_flag("--check", f.check, "validate Im T, projection and Pick property");
  s->add_flag("--split", f.split, "kernel/range split and horn slopes");
  s->add_option("--samples", f.samples, "sample count for the Pick property");

  s = add("full", "stability, local analysis at each boundary zero and integrability", cmd_full);
  add_input(s, f);
  s->add_option("--order", f.order, "truncation order");
  s->add_option("--grid", f.grid, "stability grid resolution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  set_num_threads(f.threads);
  try {
    for (auto* sub : app.get_subcommands()) return handlers.at(sub->get_name())(f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}
