#include "stablekit/report.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "stablekit/parse.hpp"

namespace stablekit::report {

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json complex(std::complex<double> z) { return {{"re", number(z.real())}, {"im", number(z.imag())}}; }

json exact(const GaussRat& g) { return g.to_string(); }

json poly(const Poly& p) { return to_string(p); }

json point(const std::vector<GaussRat>& z) {
  json a = json::array();
  for (const auto& g : z) a.push_back(exact(g));
  return a;
}

json point(const std::vector<std::complex<double>>& z) {
  json a = json::array();
  for (const auto& c : z) a.push_back(complex(c));
  return a;
}

namespace {

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

json complexes(const std::vector<std::complex<double>>& v) { return point(v); }

json polys(const std::vector<Poly>& v) {
  json a = json::array();
  for (const auto& p : v) a.push_back(poly(p));
  return a;
}

json slope(const homog::Slope& s) {
  json j = {{"infinite", s.infinite}};
  if (!s.infinite) j["value"] = complex(s.value);
  if (s.exact) j["exact"] = s.exact->get_str();
  return j;
}

std::complex<double> parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_object()) return {j.value("re", 0.0), j.value("im", 0.0)};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw std::invalid_argument("complex numbers are {\"re\": x, \"im\": y}");
}

realization::Vec parse_vector(const json& j, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw std::invalid_argument("vector length does not match n");
  realization::Vec v(n);
  for (int k = 0; k < n; ++k) v(k) = parse_complex(j[k]);
  return v;
}

realization::Mat parse_matrix(const json& j, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw std::invalid_argument("matrix row count does not match n");
  realization::Mat M(n, n);
  for (int r = 0; r < n; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != n)
      throw std::invalid_argument("matrix column count does not match n");
    for (int c = 0; c < n; ++c) M(r, c) = parse_complex(j[r][c]);
  }
  return M;
}

}  // namespace

json to_json(const stability::Result& r) {
  json j = {{"verdict", stability::to_string(r.verdict)},
            {"slices", r.slices},
            {"reason", r.reason},
            {"boundary_contacts", r.boundary_contacts.size()}};
  if (!r.witness.empty()) j["witness"] = complexes(r.witness);
  return j;
}

json to_json(const stability::DichotomySplit& d) {
  return {{"symmetric_part", poly(d.symmetric_part)},
          {"pure_part", poly(d.pure_part)},
          {"unimodular_const", exact(d.unimodular_const)},
          {"pure", d.pure}};
}

json to_json(const homog::HomogeneousDecomposition& d) {
  json parts = json::array();
  for (std::size_t k = 0; k < d.parts.size(); ++k)
    parts.push_back({{"degree", d.order + static_cast<int>(k)}, {"poly", poly(d.parts[k])}});
  return {{"center", point(d.center)}, {"order", d.order}, {"parts", parts}};
}

json to_json(const homog::SlopeProfile& s) {
  json slopes = json::array();
  for (const auto& x : s.slopes) slopes.push_back(slope(x));
  return {{"c", exact(s.c)},
          {"infinite_multiplicity", s.infinite_multiplicity},
          {"slopes", slopes},
          {"residual", number(s.residual)}};
}

json to_json(const homog::InterlacingResult& r) {
  json common = json::array();
  for (const auto& x : r.common) common.push_back(slope(x));
  return {{"holds", r.holds}, {"reason", r.reason}, {"r", r.r},         {"s", r.s},
          {"a", to_json(r.a)}, {"b", to_json(r.b)},    {"common", common}};
}

json to_json(const puiseux::Branch& b) {
  json j = {{"ramification", b.ramification},
            {"order", b.order},
            {"type", puiseux::to_string(b.type)},
            {"series", complexes(b.series)}};
  if (!b.note.empty()) j["note"] = b.note;
  if (b.series_exact) j["series_exact"] = point(*b.series_exact);
  if (b.type == puiseux::BranchType::Pure) {
    j["cutoff"] = b.cutoff;
    j["segment"] = numbers(b.segment);
    if (b.segment_exact) j["segment_poly"] = poly(b.segment_poly());
    j["psi"] = complexes(b.psi);
    j["psi0"] = complex(b.psi0());
  }
  if (b.segment_exact) {
    json s = json::array();
    for (const auto& q : *b.segment_exact) s.push_back(q.get_str());
    j["segment_exact"] = s;
  }
  return j;
}

json to_json(const puiseux::LocalFactorization& f) {
  json branches = json::array();
  for (const auto& b : f.branches) branches.push_back(to_json(b));
  json j = {{"center", point(f.center)},
          {"order", f.order},
          {"z1_power", f.z1_power},
          {"z2_power", f.z2_power},
          {"exact", f.exact},
          {"truncation", f.truncation},
          {"unit_at_center", complex(f.unit_at_center)},
          {"reconstruction_residual", number(f.reconstruction_residual)},
          {"total_multiplicity", f.total_multiplicity()},
          {"branches", branches}};
  bool pure = !f.branches.empty();
  for (const auto& b : f.branches) pure = pure && b.type == puiseux::BranchType::Pure;
  if (pure) {
    auto co = puiseux::contact_orders(f);
    j["K"] = co.K;
    j["K_min"] = co.K_min;
  }
  return j;
}

json to_json(const regularity::Report& r) {
  json parts = json::array();
  for (const auto& F : r.parts) {
    json p = {{"degree", F.degree}, {"num", poly(F.num)}, {"den", poly(F.den)}, {"polynomial", F.polynomial}};
    if (F.value) p["value"] = poly(*F.value);
    parts.push_back(p);
  }
  json j = {{"center", point(r.center)},
            {"M", r.M},
            {"N", r.N == kOrderInf ? json("inf") : json(r.N)},
            {"nt_bounded", r.nt_bounded},
            {"P_M", poly(r.P_M)},
            {"gradient_exists", r.gradient_exists},
            {"ck_order", r.ck_order},
            {"ck_at_least", r.ck_at_least},
            {"k_max", r.k_max},
            {"parts", parts}};
  if (r.limit) {
    j["limit"] = exact(*r.limit);
    j["directional_num"] = poly(r.directional_num);
  }
  if (r.jet) j["jet"] = poly(*r.jet);
  return j;
}

json to_json(const regularity::UcoCrosscheck& u) {
  return {{"K_min", u.K_min},     {"K", u.K},         {"ck_order", u.ck_order},
          {"ck_at_least", u.ck_at_least}, {"holds", u.holds}, {"tight", u.tight},
          {"vacuous", u.vacuous}, {"label", u.label}, {"report", to_json(u.report)}};
}

json to_json(const numerator::IdealPresentation& I) {
  json segs = json::array();
  for (const auto& s : I.segments) {
    json js = {{"cutoff", s.cutoff}, {"multiplicity", s.multiplicity}, {"q", numbers(s.qf)}};
    if (s.q) js["q_exact"] = poly(*s.q);
    segs.push_back(js);
  }
  json j = {{"segments", segs},
            {"tag", numerator::to_string(I.tag)},
            {"exact", I.exact},
            {"division_order", I.division_order},
            {"bounds", I.bounds}};
  if (I.exact) j["generators"] = polys(I.generators);
  if (I.tag == numerator::CaseTag::DoublePoint) {
    j["K"] = I.K;
    j["N"] = I.N;
  }
  return j;
}

json to_json(const numerator::BoundednessReport& r) {
  json curves = json::array();
  for (const auto& c : r.curves)
    curves.push_back({{"curve", c.curve}, {"segment", c.segment}, {"t", number(c.t)}, {"slope", number(c.slope)}});
  json nf = {{"tag", numerator::to_string(r.normal_form.tag)},
             {"bounds", r.normal_form.bounds},
             {"residual_zero", r.normal_form.residual_zero},
             {"exact", r.normal_form.exact},
             {"dimension", r.normal_form.dimension}};
  if (r.normal_form.exact) nf["coefficients"] = polys(r.normal_form.coefficients);
  return {{"verdict", numerator::to_string(r.verdict)},
          {"conjectural", r.conjectural},
          {"reason", r.reason},
          {"ideal", to_json(r.ideal)},
          {"normal_form", nf},
          {"curves", curves},
          {"witness", r.witness},
          {"ar_sup_coarse", number(r.ar_sup_coarse)},
          {"ar_sup_fine", number(r.ar_sup_fine)},
          {"sampling_agrees", r.sampling_agrees}};
}

json to_json(const integrability::Profile& p) {
  json zeros = json::array();
  for (const auto& z : p.zeros) {
    json idx = json::array();
    for (const auto& i : z.indices) idx.push_back(i.to_string());
    zeros.push_back({{"tau", point(z.tau)},
                     {"order", z.order},
                     {"K", z.K},
                     {"K_min", z.K_min},
                     {"N", z.N},
                     {"upper_bound_only", z.upper_bound_only},
                     {"indices", idx},
                     {"r", poly(z.r)},
                     {"r_power", z.r_power},
                     {"r_variable", z.r_variable}});
  }
  json idx = json::array(), wit = json::array();
  for (std::size_t k = 0; k < p.indices.size(); ++k) {
    idx.push_back(p.indices[k].to_string());
    wit.push_back({{"index", p.indices[k].to_string()},
                   {"zero", p.witness_zero[k]},
                   {"q", poly(p.witnesses[k])}});
  }
  return {{"zeros", zeros}, {"indices", idx}, {"witnesses", wit}, {"notes", p.notes}, {"total_N", p.total_N}};
}

json to_json(const integrability::Estimate& e) {
  return {{"exponent", number(e.exponent)},
          {"verdict", integrability::to_string(e.verdict)},
          {"rate", number(e.rate)},
          {"shell_sums", numbers(e.shell_sums)},
          {"shells_used", e.shells_used},
          {"diagnostics", e.diagnostics}};
}

json to_json(const integrability::QuadratureParams& q) {
  return {{"window", number(q.window)},           {"shells", q.shells},
          {"outer_nodes", q.outer_nodes},         {"inner_nodes", q.inner_nodes},
          {"fit_shells", q.fit_shells},           {"rate_threshold", number(q.rate_threshold)},
          {"precision_floor", number(q.precision_floor)}};
}

json to_json(const boundary::LevelRegion& r) {
  json slices = json::array();
  for (const auto& s : r.slices)
    slices.push_back({{"x1", number(s.x1)},
                      {"lower", numbers(s.lower)},
                      {"upper", numbers(s.upper)},
                      {"alternates", s.alternates},
                      {"sandwich", s.sandwich}});
  return {{"s1", number(r.s1)},
          {"s2", number(r.s2)},
          {"window", {{"r", number(r.window.r)}, {"R", number(r.window.R)}}},
          {"A", poly(r.A)},
          {"B", poly(r.B)},
          {"branches", r.branches},
          {"certified", r.certified},
          {"pinch_exponent", numbers(r.pinch_exponent)},
          {"pinch_constant", numbers(r.pinch_constant)},
          {"slices", slices}};
}

json to_json(const boundary::SequenceVerdict& v) {
  return {{"member", v.member}, {"trapped", v.trapped}, {"first_violation", v.first_violation}};
}

json to_json(const realization::ValidationReport& r) {
  json j = {{"valid", r.valid},
            {"min_eig_im_T", number(r.min_eig_im_T)},
            {"projection_error", number(r.projection_error)},
            {"min_im_g", number(r.min_im_g)},
            {"samples", r.samples},
            {"limit_finite", r.limit_finite},
            {"beta_kernel_mass", number(r.beta_kernel_mass)},
            {"problems", r.problems}};
  if (r.limit_finite) j["limit"] = complex(r.limit);
  return j;
}

json to_json(const realization::LocalSplit& s) {
  json horns = json::array();
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    boundary::HornKind kind = s.t[k] < 1e-9 ? boundary::HornKind::TrivialAlongX1
                              : std::isinf(s.horn_slopes[k]) ? boundary::HornKind::TrivialAlongX2
                                                             : boundary::HornKind::NonTrivial;
    horns.push_back({{"t", number(s.t[k])}, {"slope", number(s.horn_slopes[k])}, {"kind", boundary::to_string(kind)}});
  }
  json j = {{"rank", s.rank.rank},
            {"ambiguous", s.rank.ambiguous},
            {"candidate_ranks", s.rank.candidates},
            {"singular_values", numbers(s.rank.singular_values)},
            {"kernel_dimension", s.kernel_basis.cols()},
            {"horns", horns},
            {"kernel_symmetry", number(s.kernel_symmetry)},
            {"alpha_kernel", number(s.alpha_kernel)},
            {"beta_kernel", number(s.beta_kernel)},
            {"s_hat_min_im_eig", number(s.s_hat_min_im_eig)},
            {"s_hat_inv_norm", number(s.s_hat_inv_norm)},
            {"alpha_norm", number(s.alpha_norm)},
            {"beta_norm", number(s.beta_norm)},
            {"invariants_hold", s.invariants_hold}};
  if (s.invariants_hold) j["limit"] = complex(s.limit);
  return j;
}

std::string traces_csv(const std::vector<boundary::Trace>& traces) {
  std::ostringstream os;
  os.precision(17);
  os << "t,x1,branch_index,x2\n";
  for (const auto& tr : traces)
    for (const auto& p : tr.points) os << tr.t << ',' << p.x1 << ',' << p.branch << ',' << p.x2 << '\n';
  return os.str();
}

boundary::Horn horn_from_json(const json& j) {
  boundary::Horn h;
  const json& s = j.at("slope");
  if (s.is_string()) {
    if (s.get<std::string>() != "inf") throw std::invalid_argument("slope must be a number or \"inf\"");
    h.kind = boundary::HornKind::TrivialAlongX2;
  } else {
    h.slope = s.get<double>();
    h.kind = h.slope == 0 ? boundary::HornKind::TrivialAlongX1 : boundary::HornKind::NonTrivial;
  }
  h.B = j.at("B").get<double>();
  h.radius = j.value("radius", 1.0);
  if (!(h.B > 0)) throw std::invalid_argument("B must be positive");
  return h;
}

json horn_to_json(const boundary::Horn& h) {
  json slope = h.kind == boundary::HornKind::TrivialAlongX2 ? json("inf")
               : h.kind == boundary::HornKind::TrivialAlongX1 ? json(0)
                                                              : number(h.slope);
  return {{"slope", slope}, {"B", number(h.B)}, {"radius", number(h.radius)}};
}

realization::PipRealization realization_from_json(const json& j) {
  realization::PipRealization R;
  R.n = j.at("n").get<int>();
  if (R.n < 0) throw std::invalid_argument("n must be non-negative");
  R.c = parse_complex(j.at("c"));
  R.alpha = parse_vector(j.at("alpha"), R.n);
  R.beta = parse_vector(j.at("beta"), R.n);
  R.S = parse_matrix(j.at("S"), R.n);
  R.P = parse_matrix(j.at("P"), R.n);
  return R;
}

json realization_to_json(const realization::PipRealization& R) {
  json a = json::array(), b = json::array(), S = json::array(), P = json::array();
  for (int k = 0; k < R.n; ++k) {
    a.push_back(complex(R.alpha(k)));
    b.push_back(complex(R.beta(k)));
    json sr = json::array(), pr = json::array();
    for (int c = 0; c < R.n; ++c) {
      sr.push_back(complex(R.S(k, c)));
      pr.push_back(complex(R.P(k, c)));
    }
    S.push_back(sr);
    P.push_back(pr);
  }
  return {{"n", R.n}, {"c", complex(R.c)}, {"alpha", a}, {"beta", b}, {"S", S}, {"P", P}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace stablekit::report
