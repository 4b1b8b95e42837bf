#include "lorentz/cli.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "lorentz/catalog.hpp"
#include "lorentz/conditions.hpp"
#include "lorentz/errors.hpp"
#include "lorentz/geodesic.hpp"
#include "lorentz/geometry.hpp"
#include "lorentz/perturb.hpp"
#include "lorentz/report.hpp"
#include "lorentz/spacetime_file.hpp"

namespace lorentz {

namespace {

// Raised while preparing inputs; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const char* error_type(const std::exception& e) {
#define LORENTZ_ERR(T) \
  if (dynamic_cast<const T*>(&e)) return #T;
  LORENTZ_ERR(SyntaxError)
  LORENTZ_ERR(UnknownSymbol)
  LORENTZ_ERR(DomainError)
  LORENTZ_ERR(SlotError)
  LORENTZ_ERR(SingularMetric)
  LORENTZ_ERR(OrientationError)
  LORENTZ_ERR(StepFailure)
  LORENTZ_ERR(FrameNotOrthonormal)
  LORENTZ_ERR(InversionFailure)
  LORENTZ_ERR(NotCausal)
  LORENTZ_ERR(DegenerateEmbedding)
  LORENTZ_ERR(NotSpacelike)
  LORENTZ_ERR(WrongCodimension)
  LORENTZ_ERR(OrientationHintDegenerate)
  LORENTZ_ERR(NotApplicable)
  LORENTZ_ERR(RadiusError)
  LORENTZ_ERR(UnknownSpacetime)
  LORENTZ_ERR(ParamError)
  LORENTZ_ERR(FormatError)
  LORENTZ_ERR(DimensionError)
#undef LORENTZ_ERR
  return "Error";
}

struct Globals {
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string format = "json";
  bool timing = false;
  std::vector<std::string> params;
};

std::map<std::string, double> parse_param_list(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const std::string& it : items) {
    const auto eq = it.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects name=value, got '" + it + "'");
    std::size_t used = 0;
    double v = 0;
    const std::string rhs = it.substr(eq + 1);
    try {
      v = std::stod(rhs, &used);
    } catch (const std::exception&) {
      throw UsageError("--param value is not a number: '" + it + "'");
    }
    if (used != rhs.size()) throw UsageError("--param value is not a number: '" + it + "'");
    out[it.substr(0, eq)] = v;
  }
  return out;
}

Vec vector_arg(const std::string& text, int dim, const std::string& what) {
  try {
    return parse_vector(text, dim);
  } catch (const FormatError& e) {
    throw UsageError(what + ": " + e.what());
  }
}

// "default", a region name, or "lo:hi,lo:hi,..."
Region region_arg(const Spacetime& st, const std::string& text) {
  if (text.find(':') == std::string::npos) {
    try {
      return st.region(text);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
  }
  const int n = st.metric->dim();
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string p;
  while (std::getline(ss, p, ',')) parts.push_back(p);
  if (static_cast<int>(parts.size()) != n) throw UsageError("--region box needs " + std::to_string(n) + " lo:hi pairs");
  Box b{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < n; ++i) {
    const auto c = parts[i].find(':');
    if (c == std::string::npos) throw UsageError("--region entries are lo:hi");
    const Vec lh = vector_arg(parts[i].substr(0, c) + "," + parts[i].substr(c + 1), 2, "--region");
    if (!(lh(0) <= lh(1))) throw UsageError("--region has lo > hi");
    b.lo[i] = lh(0);
    b.hi[i] = lh(1);
  }
  Region r;
  r.box = b;
  return r;
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  // Load phase (usage errors) then compute phase (embedded errors).
  int execute(const std::string& command, const std::string& spec, const Json& arguments,
              const std::function<Json(const LoadedSpacetime&, int& code)>& body, const Globals& g,
              const std::function<std::string(const Json&)>& csv = nullptr) {
    if (g.format == "csv" && !csv) {
      err_ << "error: --format csv is only available for perturb tables\n";
      return kExitUsage;
    }
    LoadedSpacetime loaded;
    try {
      loaded = load_spacetime(spec, parse_param_list(g.params));
    } catch (const UsageError& e) {
      err_ << "error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const Error& e) {
      err_ << "error: " << error_type(e) << ": " << e.what() << "\n";
      return kExitUsage;
    }
    ReportHeader h;
    h.command = command;
    h.input_digest = fnv1a_hex(loaded.canonical_input);
    h.seed = g.seed;
    const auto t0 = std::chrono::steady_clock::now();
    int code = kExitOk;
    Json results;
    std::optional<Json> error;
    try {
      results = body(loaded, code);
    } catch (const UsageError& e) {
      err_ << "error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const Error& e) {
      error = Json{{"type", error_type(e)}, {"message", e.what()}};
      code = kExitViolation;
    }
    if (g.timing) h.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Json report = envelope(h, Json{{"arguments", arguments}, {"spacetime", loaded.spacetime.name}, {"output", results}},
                           error);
    if (g.format == "csv" && csv && !error) {
      out_ << csv(results);
    } else {
      out_ << dump(report);
    }
    return code;
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
};

Json analyze(const Spacetime& st, const Point& p, const std::optional<Vec>& v) {
  const LocalGeometry geo = local_geometry(*st.metric, p);
  const int n = geo.dim();
  Json gam = Json::array(), riem = Json::array();
  for (int k = 0; k < n; ++k) {
    Json a = Json::array();
    for (int i = 0; i < n; ++i) {
      Json b = Json::array();
      for (int j = 0; j < n; ++j) b.push_back(number(geo.gamma(k, i, j)));
      a.push_back(b);
    }
    gam.push_back(a);
  }
  for (int i = 0; i < n; ++i) {
    Json a = Json::array();
    for (int j = 0; j < n; ++j) {
      Json b = Json::array();
      for (int k = 0; k < n; ++k) {
        Json c = Json::array();
        for (int l = 0; l < n; ++l) c.push_back(number(geo.riem(i, j, k, l)));
        b.push_back(c);
      }
      a.push_back(b);
    }
    riem.push_back(a);
  }
  Json j{{"point", to_json(p)},
         {"coordinates", st.metric->coordinates()},
         {"signature_negative", signature(*st.metric, p)},
         {"metric", to_json(geo.metric().g())},
         {"christoffel", gam},
         {"riemann", riem},
         {"ricci", to_json(geo.ricci())},
         {"ricci_scalar", number(geo.ricci_scalar())},
         {"kretschmann", number(geo.kretschmann())},
         {"conventions",
          "Gamma[k][i][j] = Gamma^k_ij; riemann[i][j][k][l] = g(R(d_i,d_j)d_k, d_l), "
          "R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]; ricci_jk = R^i_ijk"}};
  if (v) {
    const CausalClass cc = causal_class(*st.metric, {p, *v}, *st.orientation);
    Json vj{{"vector", to_json(*v)}, {"causal", to_string(cc.causal)}, {"orientation", to_string(cc.orientation)}};
    if (cc.causal == Causal::timelike || cc.causal == Causal::null) {
      const TidalOperator t = tidal(geo, *v, true);
      vj["tidal_eigenvalues"] = to_json(t.eigenvalues);
      vj["tidal_matrix"] = to_json(t.matrix);
    }
    j["vector"] = vj;
  }
  return j;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lorentzian geometry toolkit: curvature, trapped submanifolds, curvature conditions and conformal "
               "perturbation families",
               "lorentz"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "seed for all sampling (default 0)");
  app.add_option("--jobs", g.jobs, "worker threads for sampling")->check(CLI::Range(1, 256));
  app.add_option("--format", g.format, "json or csv (csv: perturbation tables)")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--timing", g.timing, "include wall time (reports are then not byte-identical)");
  app.add_option("--param", g.params, "override a spacetime parameter, name=value (repeatable)")->allow_extra_args(false);

  Runner runner(out, err);
  std::function<int()> action;

  // catalog
  auto* cat = app.add_subcommand("catalog", "built-in spacetimes");
  cat->require_subcommand(1);
  auto* cat_list = cat->add_subcommand("list", "list built-in spacetimes");
  auto* cat_verify = cat->add_subcommand("verify", "recompute every known fact of a built-in spacetime");
  std::string verify_name;
  cat_verify->add_option("name", verify_name, "spacetime name")->required();
  cat_list->callback([&] {
    action = [&] {
      if (g.format == "csv") {
        err << "error: --format csv is only available for perturb tables\n";
        return kExitUsage;
      }
      Json list = Json::array();
      for (const CatalogEntry& e : catalog_entries()) {
        const Spacetime st = load(e.name);
        Json subs = Json::array(), facts = Json::array(), regions = Json::array();
        for (const auto& s : st.submanifolds)
          subs.push_back({{"name", s.name}, {"description", s.description}, {"codim", s.embedding->codim()}});
        for (const auto& f : st.facts) facts.push_back({{"id", f.id}, {"statement", f.statement}});
        for (const auto& [rn, r] : st.regions) regions.push_back(rn);
        Json params = Json::object();
        for (const auto& [k, v] : e.defaults) params[k] = v;
        list.push_back({{"name", e.name},
                        {"summary", e.summary},
                        {"parameters", params},
                        {"chart", st.chart},
                        {"coordinates", st.metric->coordinates()},
                        {"regions", regions},
                        {"submanifolds", subs},
                        {"known_facts", facts}});
      }
      ReportHeader h;
      h.command = "catalog list";
      h.input_digest = fnv1a_hex("catalog");
      h.seed = g.seed;
      out << dump(envelope(h, Json{{"spacetimes", list}}));
      return kExitOk;
    };
  });
  cat_verify->callback([&] {
    action = [&] {
      return runner.execute(
          "catalog verify", "builtin:" + verify_name, Json{{"name", verify_name}},
          [&](const LoadedSpacetime& l, int& code) {
            Json facts = Json::array();
            for (const FactResult& r : verify_facts(l.spacetime, g.seed, g.jobs)) {
              if (!r.holds) code = kExitViolation;
              facts.push_back({{"id", r.id}, {"holds", r.holds}, {"detail", r.detail}});
            }
            return Json{{"facts", facts}};
          },
          g);
    };
  });

  // analyze
  auto* an = app.add_subcommand("analyze", "signature, connection and curvature at a point");
  std::string an_spec, an_at, an_vec;
  an->add_option("spec", an_spec, "builtin:<name> or definition file")->required();
  an->add_option("--at", an_at, "point, comma separated")->required();
  an->add_option("--vector", an_vec, "optional tangent vector: causal character and tidal operator");
  an->callback([&] {
    action = [&] {
      return runner.execute("analyze", an_spec, Json{{"at", an_at}, {"vector", an_vec}},
                            [&](const LoadedSpacetime& l, int&) {
                              const int n = l.spacetime.metric->dim();
                              const Point p = vector_arg(an_at, n, "--at");
                              std::optional<Vec> v;
                              if (!an_vec.empty()) v = vector_arg(an_vec, n, "--vector");
                              if (!l.spacetime.metric->in_domain(p)) throw UsageError("--at lies outside the chart domain");
                              return analyze(l.spacetime, p, v);
                            },
                            g);
    };
  });

  // classify
  auto* cl = app.add_subcommand("classify", "trapped-submanifold classification");
  std::string cl_spec, cl_sub, cl_grid, cl_expect;
  cl->add_option("spec", cl_spec)->required();
  cl->add_option("--submanifold", cl_sub, "submanifold name")->required();
  cl->add_option("--grid", cl_grid, "grid sizes per parameter, comma separated");
  cl->add_option("--expect", cl_expect, "expected class; exit 1 on mismatch")
      ->check(CLI::IsMember({"future_trapped", "weakly_future_trapped", "not_weakly_trapped"}));
  cl->callback([&] {
    action = [&] {
      return runner.execute("classify", cl_spec, Json{{"submanifold", cl_sub}, {"grid", cl_grid}, {"expect", cl_expect}},
                            [&](const LoadedSpacetime& l, int& code) {
                              const Spacetime& st = l.spacetime;
                              EmbeddingPtr e;
                              try {
                                e = st.submanifold_ptr(cl_sub);
                              } catch (const DomainError& x) {
                                throw UsageError(x.what());
                              }
                              Embedding emb = *e;
                              if (!cl_grid.empty()) {
                                const Vec gv = vector_arg(cl_grid, emb.param_dim(), "--grid");
                                std::vector<int> grid;
                                for (int i = 0; i < gv.size(); ++i) {
                                  if (gv(i) < 1 || gv(i) != std::floor(gv(i))) throw UsageError("--grid needs positive integers");
                                  grid.push_back(static_cast<int>(gv(i)));
                                }
                                emb = emb.with_grid(grid);
                              }
                              const TrappedVerdict v = classify(*st.metric, *st.orientation, emb, {}, g.jobs);
                              if (!cl_expect.empty() && cl_expect != to_string(v.cls)) code = kExitViolation;
                              Json j = to_json(v);
                              j["closed"] = emb.closed();
                              j["codim"] = emb.codim();
                              return j;
                            },
                            g);
    };
  });

  // check
  auto* ck = app.add_subcommand("check", "curvature conditions and causal certificates on a sampled region");
  std::string ck_spec, ck_cond, ck_region = "default", ck_field;
  bool ck_strict = false, ck_timelike = false;
  int ck_points = 16, ck_density = 64;
  ck->add_option("spec", ck_spec)->required();
  ck->add_option("--condition", ck_cond)
      ->required()
      ->check(CLI::IsMember({"E", "SE", "P", "FP", "O", "inclusions", "orientation", "temporal"}));
  ck->add_option("--region", ck_region, "region name or box lo:hi,lo:hi,...");
  ck->add_flag("--strict", ck_strict, "E -> SE, FP -> P");
  ck->add_flag("--timelike-only", ck_timelike, "restrict P/FP to timelike directions");
  ck->add_option("--points", ck_points, "sample points in a box region")->check(CLI::Range(1, 100000));
  ck->add_option("--density", ck_density, "causal directions per point (>= 8)")->check(CLI::Range(8, 100000));
  ck->add_option("--field", ck_field, "temporal: scalar expression; orientation: comma separated components");
  ck->callback([&] {
    action = [&] {
      Json args{{"condition", ck_cond}, {"region", ck_region}, {"strict", ck_strict}, {"timelike_only", ck_timelike},
                {"points", ck_points},   {"density", ck_density}, {"field", ck_field}};
      return runner.execute("check", ck_spec, args, [&](const LoadedSpacetime& l, int& code) {
        const Spacetime& st = l.spacetime;
        Region r = region_arg(st, ck_region);
        if (r.points.empty()) r.point_count = ck_points;
        r.density = ck_density;
        r.seed = g.seed;
        r.jobs = g.jobs;
        std::string c = ck_cond;
        if (ck_strict && c == "E") c = "SE";
        if (ck_strict && c == "FP") c = "P";
        if (c == "inclusions") {
          const AuditReport a = inclusion_audit(*st.metric, r);
          if (!a.ok()) code = kExitViolation;
          return to_json(a);
        }
        ConditionReport rep;
        if (c == "E" || c == "SE") {
          rep = ricci_condition(*st.metric, r, c == "SE");
        } else if (c == "P" || c == "FP") {
          rep = riem_condition(*st.metric, r, c == "P", ck_timelike);
        } else if (c == "O") {
          rep = tidal_condition(*st.metric, r);
        } else if (c == "orientation") {
          VectorFieldPtr X = st.orientation;
          if (!ck_field.empty()) {
            std::vector<std::string> comps;
            std::stringstream ss(ck_field);
            std::string part;
            while (std::getline(ss, part, ',')) comps.push_back(part);
            try {
              X = make_expr_vector(st.metric->coordinates(), comps, st.params);
            } catch (const Error& e) {
              throw UsageError(std::string("--field: ") + e.what());
            }
            if (X->dim() != st.metric->dim()) throw UsageError("--field needs one component per coordinate");
          }
          rep = temporal_cert(*st.metric, *X, r);
        } else {
          ScalarFieldPtr t = st.temporal;
          if (!ck_field.empty()) {
            try {
              t = make_expr_scalar(st.metric->coordinates(), ck_field, st.params);
            } catch (const Error& e) {
              throw UsageError(std::string("--field: ") + e.what());
            }
          }
          if (!t) throw UsageError("no temporal function: pass --field");
          rep = temporal_cert(*st.metric, *t, r);
        }
        if (!rep.holds()) code = kExitViolation;
        return to_json(rep);
      }, g);
    };
  });

  // gs
  auto* gs = app.add_subcommand("gs", "trace of Riem(γ', E_a, E_b, γ') along a normal geodesic of a submanifold");
  std::string gs_spec, gs_sub, gs_at, gs_dir = "timelike";
  double gs_len = 1.0;
  gs->add_option("spec", gs_spec)->required();
  gs->add_option("--submanifold", gs_sub)->required();
  gs->add_option("--at", gs_at, "parameter point u0")->required();
  gs->add_option("--dir", gs_dir, "ambient vector, or plus / minus / timelike");
  gs->add_option("--length", gs_len, "affine length")->check(CLI::PositiveNumber);
  gs->callback([&] {
    action = [&] {
      return runner.execute("gs", gs_spec, Json{{"submanifold", gs_sub}, {"at", gs_at}, {"dir", gs_dir}, {"length", gs_len}},
                            [&](const LoadedSpacetime& l, int& code) {
                              const Spacetime& st = l.spacetime;
                              EmbeddingPtr e;
                              try {
                                e = st.submanifold_ptr(gs_sub);
                              } catch (const DomainError& x) {
                                throw UsageError(x.what());
                              }
                              const Vec u = vector_arg(gs_at, e->param_dim(), "--at");
                              Vec d;
                              if (gs_dir == "plus" || gs_dir == "minus" || gs_dir == "timelike")
                                d = normal_direction(*st.metric, *st.orientation, *e, u, gs_dir);
                              else
                                d = vector_arg(gs_dir, st.metric->dim(), "--dir");
                              const GsResult r = gs_trace(*st.metric, *st.orientation, *e, u, d, gs_len);
                              if (r.first_negative) code = kExitViolation;
                              Json j = to_json(r);
                              j["direction"] = to_json(d);
                              j["base_point"] = to_json(e->point(u));
                              return j;
                            },
                            g);
    };
  });

  // perturb
  auto* pt = app.add_subcommand("perturb", "conformal perturbation family with certificates and seminorm table");
  std::string pt_spec, pt_kind, pt_at, pt_sub;
  std::vector<std::string> pt_witness;
  int pt_nmax = 8, pt_grid = 9;
  double pt_radius = 0.0;
  bool pt_no_sem = false;
  PerturbationFamily pt_family;
  pt->add_option("spec", pt_spec)->required();
  pt->add_option("--construction", pt_kind, "trapped (destroy weak trappedness) or curvature (destroy FP)")
      ->required()
      ->check(CLI::IsMember({"trapped", "curvature"}));
  pt->add_option("--at", pt_at, "trapped: parameter point on the submanifold; curvature: spacetime point");
  pt->add_option("--submanifold", pt_sub, "submanifold (trapped construction)");
  pt->add_option("--witness", pt_witness, "v=<vector> w=<vector> (curvature construction; searched if omitted)");
  pt->add_option("--nmax", pt_nmax, "family members 1..N")->check(CLI::Range(1, 1000));
  pt->add_option("--radius", pt_radius, "bump radius (default: automatic)");
  pt->add_option("--seminorm-grid", pt_grid, "grid points per axis for C^s seminorms")->check(CLI::Range(2, 64));
  pt->add_flag("--no-seminorms", pt_no_sem, "skip the seminorm table");
  pt->callback([&] {
    action = [&] {
      Json args{{"construction", pt_kind}, {"at", pt_at},          {"submanifold", pt_sub}, {"witness", pt_witness},
                {"nmax", pt_nmax},         {"radius", pt_radius},  {"seminorm_grid", pt_grid}, {"seminorms", !pt_no_sem}};
      return runner.execute(
          "perturb", pt_spec, args,
          [&](const LoadedSpacetime& l, int& code) {
            const Spacetime& st = l.spacetime;
            FamilyOptions opt;
            opt.n_max = pt_nmax;
            opt.seminorm_grid = pt_grid;
            opt.seminorms = !pt_no_sem;
            if (pt_radius > 0) opt.radius = pt_radius;
            PerturbationFamily fam;
            Json extra = Json::object();
            if (pt_kind == "trapped") {
              if (pt_sub.empty()) throw UsageError("--submanifold is required for the trapped construction");
              EmbeddingPtr e;
              try {
                e = st.submanifold_ptr(pt_sub);
              } catch (const DomainError& x) {
                throw UsageError(x.what());
              }
              Vec u;
              if (!pt_at.empty())
                u = vector_arg(pt_at, e->param_dim(), "--at");
              else if (st.marked_parameter && st.marked_parameter->size() == e->param_dim())
                u = *st.marked_parameter;
              else
                u = e->range().center();
              fam = trapped_family(st.metric, *st.orientation, *e, u, opt);
              extra["u"] = to_json(u);
            } else {
              const int n = st.metric->dim();
              if (pt_at.empty()) throw UsageError("--at is required for the curvature construction");
              const Point p = vector_arg(pt_at, n, "--at");
              std::optional<Vec> v, w;
              for (const std::string& item : pt_witness) {
                if (item.rfind("v=", 0) == 0) v = vector_arg(item.substr(2), n, "--witness v");
                else if (item.rfind("w=", 0) == 0) w = vector_arg(item.substr(2), n, "--witness w");
                else throw UsageError("--witness entries are v=<vector> or w=<vector>");
              }
              if (v.has_value() != w.has_value()) throw UsageError("--witness needs both v and w");
              if (!v) {
                const auto found = find_witness(*st.metric, p, g.seed);
                if (!found) throw NotApplicable("no vanishing Riem(w,v,v,w) found at the point");
                v = found->v;
                w = found->w;
                extra["witness_search"] = Json{{"v", to_json(*v)}, {"w", to_json(*w)}, {"value", number(found->value)}};
              }
              fam = curvature_family(st.metric, p, *v, *w, opt);
            }
            if (!fam.all_signs_ok() || !fam.monotone_to_zero()) code = kExitViolation;
            pt_family = fam;
            Json j = to_json(fam);
            for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
            return j;
          },
          g, [&](const Json&) { return family_csv(pt_family); });
    };
  });

  // geodesic
  auto* geo = app.add_subcommand("geodesic", "integrate a geodesic, optionally transporting vectors");
  std::string ge_spec, ge_from, ge_dir;
  std::vector<std::string> ge_transport;
  double ge_len = 1.0;
  geo->add_option("spec", ge_spec)->required();
  geo->add_option("--from", ge_from, "start point")->required();
  geo->add_option("--dir", ge_dir, "initial velocity")->required();
  geo->add_option("--length", ge_len, "affine length")->check(CLI::PositiveNumber);
  geo->add_option("--transport", ge_transport, "vector to parallel-transport (repeatable)");
  geo->callback([&] {
    action = [&] {
      return runner.execute("geodesic", ge_spec,
                            Json{{"from", ge_from}, {"dir", ge_dir}, {"length", ge_len}, {"transport", ge_transport}},
                            [&](const LoadedSpacetime& l, int&) {
                              const MetricField& gm = *l.spacetime.metric;
                              const int n = gm.dim();
                              const Point p = vector_arg(ge_from, n, "--from");
                              const Vec v = vector_arg(ge_dir, n, "--dir");
                              std::vector<Vec> w;
                              for (const auto& t : ge_transport) w.push_back(vector_arg(t, n, "--transport"));
                              if (!gm.in_domain(p)) throw UsageError("--from lies outside the chart domain");
                              GeodesicOptions opt;
                              const GeodesicSolution sol = geodesic(gm, p, v, ge_len, opt);
                              if (w.empty()) return to_json(sol);
                              const auto tr = parallel_transport(gm, sol, w);
                              return to_json(sol, &tr);
                            },
                            g);
    };
  });

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!action) {
    err << "error: no command given\n";
    return kExitUsage;
  }
  try {
    return action();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << error_type(e) << ": " << e.what() << "\n";
    return kExitViolation;
  }
}

}  // namespace lorentz
