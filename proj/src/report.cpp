#include "lorentz/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace lorentz {

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json number(double x) {
  if (x == 0.0) return 0.0;  // drop the sign of zero
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

Json to_json(const Vec& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}

Json to_json(const Mat& m) {
  Json a = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
    a.push_back(row);
  }
  return a;
}

Json to_json(const Tolerances& t) {
  return Json{{"tau_zero", t.tau_zero}, {"tau_c", t.tau_c},       {"eps_geo", t.eps_geo},
              {"tau_trap", t.tau_trap}, {"tau_cond", t.tau_cond}};
}

Json to_json(const ConditionReport& r) {
  Json j{{"condition", r.condition},   {"verdict", to_string(r.verdict)}, {"strict", r.strict},
         {"holds", r.holds()},         {"min_margin", number(r.min_margin)}, {"samples", r.samples},
         {"certified", "on samples"}};
  if (r.witness) {
    Json w{{"point", to_json(r.witness->p)}, {"value", number(r.witness->value)}};
    if (r.witness->v) w["v"] = to_json(*r.witness->v);
    if (r.witness->w) w["w"] = to_json(*r.witness->w);
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json to_json(const AuditReport& r) {
  Json imps = Json::array();
  for (const Implication& i : r.implications)
    imps.push_back({{"implication", i.name}, {"checked", i.checked}, {"premise_true", i.premise_true},
                    {"violations", i.violations}});
  Json vs = Json::array();
  for (const AuditViolation& v : r.violations)
    vs.push_back({{"implication", v.implication}, {"point", to_json(v.p)}, {"v", to_json(v.v)},
                  {"ricci", number(v.ricci)}, {"riem", number(v.riem)}, {"tidal", number(v.tidal)}});
  return Json{{"condition", "inclusions"}, {"samples", r.samples},     {"violation_count", r.violation_count},
              {"ok", r.ok()},              {"implications", imps},     {"violations", vs}};
}

Json to_json(const TrappedVerdict& v) {
  Json recs = Json::array();
  for (const TrappedRecord& r : v.records) {
    Json j{{"u", to_json(r.u)},
           {"x", to_json(r.x)},
           {"g_HH", number(r.g_HH)},
           {"g_HX", number(r.g_HX)},
           {"H_norm", number(r.H_norm)},
           {"H_causal", to_string(r.h_causal)},
           {"H_orientation", to_string(r.h_orientation)}};
    if (r.theta_plus) j["theta_plus"] = number(*r.theta_plus);
    if (r.theta_minus) j["theta_minus"] = number(*r.theta_minus);
    recs.push_back(j);
  }
  auto opt = [](const std::optional<std::size_t>& o) { return o ? Json(*o) : Json(nullptr); };
  const char* set = v.cls == TrappedClass::future_trapped          ? "A"
                    : v.cls == TrappedClass::weakly_future_trapped ? "FA"
                                                                   : "none";
  return Json{{"class", to_string(v.cls)},
              {"set", set},
              {"subtype", to_string(v.subtype)},
              {"margin", number(v.margin)},
              {"witness_not_trapped", opt(v.witness_not_trapped)},
              {"witness_not_weakly_trapped", opt(v.witness_not_weak)},
              {"records", recs}};
}

Json to_json(const PerturbationFamily& f) {
  Json certs = Json::array();
  for (const Certificate& c : f.certificates)
    certs.push_back({{"n", c.n},
                     {"closed_form", number(c.closed_form)},
                     {"direct", number(c.direct)},
                     {"printed", number(c.printed)},
                     {"agreement", number(c.agreement)},
                     {"deviation", number(c.deviation)},
                     {"sign_ok", c.sign_ok}});
  Json sem = Json::array();
  for (const SeminormRow& r : f.seminorms)
    sem.push_back({{"n", r.n}, {"c0", number(r.c0)}, {"c1", number(r.c1)}, {"c2", number(r.c2)}});
  Json j{{"construction", f.construction},
         {"expected_sign", f.expected_sign},
         {"printed_formula", f.printed_formula},
         {"point", to_json(f.p)},
         {"v", to_json(f.v)}};
  if (f.w.size()) j["w"] = to_json(f.w);
  if (f.m) j["m"] = f.m;
  j["bump_radius"] = f.phi ? number(f.phi->radius()) : Json(nullptr);
  j["all_signs_ok"] = f.all_signs_ok();
  j["monotone_to_zero"] = f.monotone_to_zero();
  j["certificates"] = certs;
  j["seminorms"] = sem;
  j["seminorm_slope"] = number(f.seminorm_slope);
  j["support_warning"] = f.support_warning;
  return j;
}

Json to_json(const GsResult& r) {
  Json samples = Json::array();
  for (std::size_t i = 0; i < r.s.size(); ++i) samples.push_back({number(r.s[i]), number(r.trace[i])});
  return Json{{"min_trace", number(r.min_trace)},
              {"s_at_min", number(r.s_at_min)},
              {"first_negative", r.first_negative ? number(*r.first_negative) : Json(nullptr)},
              {"chart_exit", r.chart_exit},
              {"samples", samples}};
}

Json to_json(const GeodesicSolution& s, const std::vector<std::vector<Vec>>* transported) {
  Json pts = Json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    Json p{{"s", number(s.s[i])}, {"x", to_json(s.points[i])}, {"velocity", to_json(s.velocities[i])}};
    if (transported) {
      Json t = Json::array();
      for (const Vec& v : (*transported)[i]) t.push_back(to_json(v));
      p["transported"] = t;
    }
    pts.push_back(p);
  }
  return Json{{"requested_length", number(s.requested_length)},
              {"final_s", number(s.final_s())},
              {"chart_exit", s.chart_exit},
              {"accepted_steps", s.steps.size()},
              {"rejected_steps", s.rejected_steps},
              {"initial_norm", number(s.initial_norm)},
              {"max_norm_drift", number(s.max_norm_drift)},
              {"samples", pts}};
}

Json envelope(const ReportHeader& h, Json results, std::optional<Json> error) {
  Json j{{"tool", kToolName},
         {"version", kToolVersion},
         {"schema", kReportSchema},
         {"command", h.command},
         {"input_digest", h.input_digest},
         {"seed", h.seed},
         {"tolerances", to_json(h.tolerances)},
         {"results", std::move(results)}};
  if (error) j["error"] = *error;
  if (h.wall_time_s) j["wall_time_s"] = *h.wall_time_s;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string family_csv(const PerturbationFamily& f) {
  std::ostringstream os;
  os.precision(17);
  os << "n,closed_form,direct,printed,agreement,deviation,sign_ok\n";
  for (const Certificate& c : f.certificates)
    os << c.n << ',' << c.closed_form << ',' << c.direct << ',' << c.printed << ',' << c.agreement << ','
       << c.deviation << ',' << (c.sign_ok ? 1 : 0) << '\n';
  if (!f.seminorms.empty()) {
    os << "\nn,c0,c1,c2\n";
    for (const SeminormRow& r : f.seminorms) os << r.n << ',' << r.c0 << ',' << r.c1 << ',' << r.c2 << '\n';
  }
  return os.str();
}

}  // namespace lorentz
