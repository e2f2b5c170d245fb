#include "hypertoric/report.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "hypertoric/asymptotics.hpp"
#include "hypertoric/errors.hpp"
#include "hypertoric/metric.hpp"
#include "hypertoric/quadratic.hpp"
#include "hypertoric/strata.hpp"

namespace hypertoric {
namespace {

// ---------------------------------------------------------------- parsing

[[noreturn]] void fail(const std::string& ptr, const std::string& what) {
  throw Error(ErrorCode::ParseError,
              "at " + (ptr.empty() ? std::string("/") : ptr) + ": " + what);
}

std::string join_ptr(const std::string& ptr, const std::string& key) {
  return ptr + "/" + key;
}

std::string join_ptr(const std::string& ptr, std::size_t index) {
  return ptr + "/" + std::to_string(index);
}

void check_keys(const Json& j, const std::string& ptr,
                std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) fail(join_ptr(ptr, it.key()), "unknown field");
  }
}

const Json& need(const Json& j, const std::string& ptr, const char* key) {
  if (!j.is_object()) fail(ptr, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(join_ptr(ptr, key), "missing required field");
  return *it;
}

const Json* find(const Json& j, const std::string& ptr, const char* key) {
  if (!j.is_object()) fail(ptr, "expected an object");
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

long as_long(const Json& j, const std::string& ptr) {
  if (!j.is_number_integer()) fail(ptr, "expected an integer");
  return j.get<long>();
}

double as_double(const Json& j, const std::string& ptr) {
  if (!j.is_number()) fail(ptr, "expected a number");
  return j.get<double>();
}

bool as_bool(const Json& j, const std::string& ptr) {
  if (!j.is_boolean()) fail(ptr, "expected a boolean");
  return j.get<bool>();
}

std::string as_string(const Json& j, const std::string& ptr) {
  if (!j.is_string()) fail(ptr, "expected a string");
  return j.get<std::string>();
}

// Exact scalars arrive as decimal strings; plain JSON integers are also
// accepted for convenience since they carry no rounding.
Int as_exact_int(const Json& j, const std::string& ptr) {
  try {
    if (j.is_number_integer()) return Int(j.get<long long>());
    if (j.is_string()) return parse_int(j.get<std::string>());
  } catch (const Error& e) {
    fail(ptr, e.what());
  }
  fail(ptr, "expected an integer or a decimal string");
}

Rat as_exact_rat(const Json& j, const std::string& ptr) {
  try {
    if (j.is_number_integer()) return Rat(Int(j.get<long long>()));
    if (j.is_string()) return parse_rat(j.get<std::string>());
  } catch (const Error& e) {
    fail(ptr, e.what());
  }
  fail(ptr, "expected a rational as integer or string (\"p\" or \"p/q\")");
}

std::vector<double> as_double_list(const Json& j, const std::string& ptr) {
  if (!j.is_array()) fail(ptr, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(as_double(j[i], join_ptr(ptr, i)));
  return out;
}

SubtorusSpec parse_subtorus(const Json& j, const std::string& ptr) {
  check_keys(j, ptr, {"n", "d", "U"});
  long n = as_long(need(j, ptr, "n"), join_ptr(ptr, "n"));
  long d = as_long(need(j, ptr, "d"), join_ptr(ptr, "d"));
  if (n <= 0 || d <= 0) fail(ptr, "n and d must be positive");
  const Json& rows = need(j, ptr, "U");
  std::string uptr = join_ptr(ptr, "U");
  if (!rows.is_array() || static_cast<long>(rows.size()) != n)
    fail(uptr, "expected " + std::to_string(n) + " rows");
  IMat U(n, d);
  for (long i = 0; i < n; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    std::string rptr = join_ptr(uptr, static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<long>(row.size()) != d)
      fail(rptr, "expected " + std::to_string(d) + " entries");
    for (long k = 0; k < d; ++k)
      U.at(i, k) = as_exact_int(row[static_cast<std::size_t>(k)],
                                join_ptr(rptr, static_cast<std::size_t>(k)));
  }
  SubtorusSpec spec;
  spec.n = n;
  spec.d = d;
  spec.U = U;
  return spec;
}

ZetaLift parse_tau(const Json& j, const std::string& ptr, long d) {
  if (!j.is_array() || static_cast<long>(j.size()) != d)
    fail(ptr, "expected " + std::to_string(d) + " level triples");
  ZetaLift tau = ZetaLift::zero(d);
  for (long k = 0; k < d; ++k) {
    const Json& trip = j[static_cast<std::size_t>(k)];
    std::string tptr = join_ptr(ptr, static_cast<std::size_t>(k));
    if (!trip.is_array() || trip.size() != 3)
      fail(tptr, "expected a triple");
    for (int i = 0; i < 3; ++i)
      tau.tau[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] =
          as_exact_rat(trip[static_cast<std::size_t>(i)],
                       join_ptr(tptr, static_cast<std::size_t>(i)));
  }
  return tau;
}

SigmaSpec parse_sigma(const Json& j, const std::string& ptr, long d) {
  check_keys(j, ptr, {"symbols", "coeffs"});
  SigmaSpec sigma;
  const Json& syms = need(j, ptr, "symbols");
  std::string sptr = join_ptr(ptr, "symbols");
  if (!syms.is_array() || syms.empty()) fail(sptr, "expected a nonempty array");
  for (std::size_t i = 0; i < syms.size(); ++i) {
    const Json& s = syms[i];
    std::string eptr = join_ptr(sptr, i);
    check_keys(s, eptr, {"name", "value"});
    SigmaSymbol symbol;
    symbol.name = as_string(need(s, eptr, "name"), join_ptr(eptr, "name"));
    symbol.value =
        as_double(need(s, eptr, "value"), join_ptr(eptr, "value"));
    sigma.symbols.push_back(symbol);
  }
  if (sigma.symbols[0].name != "1")
    fail(join_ptr(sptr, std::size_t{0}), "the first symbol must be \"1\"");
  long J = static_cast<long>(sigma.symbols.size());
  const Json& coeffs = need(j, ptr, "coeffs");
  std::string cptr = join_ptr(ptr, "coeffs");
  if (!coeffs.is_array() || static_cast<long>(coeffs.size()) != d)
    fail(cptr, "expected " + std::to_string(d) + " coefficient rows");
  sigma.coeffs = QMat(d, J);
  for (long p = 0; p < d; ++p) {
    const Json& row = coeffs[static_cast<std::size_t>(p)];
    std::string rptr = join_ptr(cptr, static_cast<std::size_t>(p));
    if (!row.is_array() || static_cast<long>(row.size()) != J)
      fail(rptr, "expected " + std::to_string(J) + " entries");
    for (long q = 0; q < J; ++q)
      sigma.coeffs.at(p, q) =
          as_exact_rat(row[static_cast<std::size_t>(q)],
                       join_ptr(rptr, static_cast<std::size_t>(q)));
  }
  return sigma;
}

ProbeRequest parse_probe(const Json& j, const std::string& ptr, long d) {
  check_keys(j, ptr,
             {"kind", "deformed", "project", "point", "direction", "radii",
              "quantity"});
  ProbeRequest probe;
  probe.kind = as_string(need(j, ptr, "kind"), join_ptr(ptr, "kind"));
  if (probe.kind != "metric" && probe.kind != "curvature" &&
      probe.kind != "decay")
    fail(join_ptr(ptr, "kind"),
         "expected \"metric\", \"curvature\" or \"decay\"");
  if (const Json* v = find(j, ptr, "deformed"))
    probe.deformed = as_bool(*v, join_ptr(ptr, "deformed"));
  if (const Json* v = find(j, ptr, "project"))
    probe.project = as_bool(*v, join_ptr(ptr, "project"));
  probe.point =
      as_double_list(need(j, ptr, "point"), join_ptr(ptr, "point"));
  if (static_cast<long>(probe.point.size()) != 4 * d)
    fail(join_ptr(ptr, "point"),
         "expected " + std::to_string(4 * d) + " flat coordinates");
  if (probe.kind == "decay") {
    probe.direction =
        as_double_list(need(j, ptr, "direction"), join_ptr(ptr, "direction"));
    if (static_cast<long>(probe.direction.size()) != 4 * d)
      fail(join_ptr(ptr, "direction"),
           "expected " + std::to_string(4 * d) + " flat coordinates");
    probe.radii = as_double_list(need(j, ptr, "radii"), join_ptr(ptr, "radii"));
    if (const Json* v = find(j, ptr, "quantity")) {
      probe.quantity = as_string(*v, join_ptr(ptr, "quantity"));
      if (probe.quantity != "V1" && probe.quantity != "MAX_SECTIONAL")
        fail(join_ptr(ptr, "quantity"),
             "expected \"V1\" or \"MAX_SECTIONAL\"");
    }
  } else if (find(j, ptr, "direction") || find(j, ptr, "radii") ||
             find(j, ptr, "quantity")) {
    fail(ptr, "direction, radii and quantity apply only to decay probes");
  }
  return probe;
}

// ---------------------------------------------------------- serialization

Json int_matrix_json(const IMat& M) {
  Json rows = Json::array();
  for (long i = 0; i < M.rows(); ++i) {
    Json row = Json::array();
    for (long j = 0; j < M.cols(); ++j) row.push_back(to_string(M.at(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Json rat_matrix_json(const QMat& M) {
  Json rows = Json::array();
  for (long i = 0; i < M.rows(); ++i) {
    Json row = Json::array();
    for (long j = 0; j < M.cols(); ++j) row.push_back(to_string(M.at(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Json subset_json(const IndexSubset& I) {
  Json out = Json::array();
  for (long p : I.members) out.push_back(p);
  return out;
}

Json maybe_subset_json(const std::optional<IndexSubset>& I) {
  return I ? subset_json(*I) : Json(nullptr);
}

Json tau_json(const ZetaLift& tau) {
  Json out = Json::array();
  for (const auto& trip : tau.tau) {
    Json t = Json::array();
    for (const Rat& v : trip) t.push_back(to_string(v));
    out.push_back(t);
  }
  return out;
}

Json triples_json(const std::vector<std::array<Rat, 3>>& levels) {
  Json out = Json::array();
  for (const auto& trip : levels) {
    Json t = Json::array();
    for (const Rat& v : trip) t.push_back(to_string(v));
    out.push_back(t);
  }
  return out;
}

Json sigma_json(const SigmaSpec& sigma) {
  Json out;
  Json syms = Json::array();
  for (const auto& s : sigma.symbols) {
    Json e;
    e["name"] = s.name;
    e["value"] = s.value;
    syms.push_back(e);
  }
  out["symbols"] = syms;
  out["coeffs"] = rat_matrix_json(sigma.coeffs);
  return out;
}

Json request_json(const AnalysisRequest& request) {
  Json out;
  out["format_version"] = kFormatVersion;
  Json sub;
  sub["n"] = request.subtorus.n;
  sub["d"] = request.subtorus.d;
  sub["U"] = int_matrix_json(request.subtorus.U);
  out["subtorus"] = sub;
  out["seed"] = request.seed;
  Json z;
  if (request.sample_zeta) {
    z["mode"] = "sample";
    z["bound"] = request.sample_bound;
  } else {
    z["mode"] = "explicit";
    z["tau"] = tau_json(request.tau);
  }
  out["zeta"] = z;
  out["sigma"] = request.sigma ? sigma_json(*request.sigma) : Json(nullptr);
  Json probes = Json::array();
  for (const auto& p : request.probes) {
    Json e;
    e["kind"] = p.kind;
    e["deformed"] = p.deformed;
    e["project"] = p.project;
    e["point"] = p.point;
    if (p.kind == "decay") {
      e["direction"] = p.direction;
      e["radii"] = p.radii;
      e["quantity"] = p.quantity;
    }
    probes.push_back(e);
  }
  out["probes"] = probes;
  return out;
}

Json unimodular_json(const UnimodularVerdict& v) {
  Json out;
  out["holds"] = v.holds;
  out["witness"] = maybe_subset_json(v.witness);
  out["witness_det"] =
      v.witness_det ? Json(to_string(*v.witness_det)) : Json(nullptr);
  return out;
}

Json smoothness_json(const SmoothnessVerdict& v) {
  Json out;
  out["smooth"] = v.smooth;
  out["distinct"] = v.distinct;
  out["duplicate_pair"] = maybe_subset_json(v.duplicate_pair);
  out["excess_flat"] = maybe_subset_json(v.excess_flat);
  out["bad_flat"] = maybe_subset_json(v.bad_flat);
  return out;
}

Json strata_json(const std::vector<StratumRecord>& strata) {
  Json out = Json::array();
  for (const auto& s : strata) {
    Json e;
    e["I"] = subset_json(s.I);
    e["dim_stabilizer"] = s.dim_stabilizer;
    e["dim_V"] = s.dim_V;
    out.push_back(e);
  }
  return out;
}

Json descriptor_json(const CompactificationDescriptor& desc) {
  Json out;
  out["kind"] = desc.kind;
  out["ambient_dim"] = desc.ambient_dim;
  Json faces = Json::array();
  for (const auto& h : desc.hypersurfaces) {
    Json e;
    e["id"] = h.id;
    e["label"] = h.label;
    e["base"] = h.base_desc;
    e["base_dim"] = h.base_dim;
    e["fiber"] = h.fiber_model;
    e["fiber_dim"] = h.fiber_dim;
    e["weight"] = to_string(h.weight);
    e["foliated"] = h.foliated;
    e["equations"] = h.equations;
    e["stratum"] = maybe_subset_json(h.stratum);
    faces.push_back(e);
  }
  out["hypersurfaces"] = faces;
  Json order = Json::array();
  for (const auto& [lo, hi] : desc.order)
    order.push_back(Json::array({lo, hi}));
  out["order"] = order;
  out["bdf_rule"] = desc.bdf_rule;
  return out;
}

Json sigma_analysis_json(const SigmaAnalysis& an) {
  Json out;
  out["zero_set"] = subset_json(an.I_sigma);
  out["dim_T_sigma"] = an.dim_T_sigma;
  out["dim_T_sigma_cap_N"] = an.dim_T_sigma_cap_N;
  out["transversal"] = an.transversal;
  return out;
}

Json invariants_json(const InvariantReport& inv) {
  Json out;
  out["dim_M"] = inv.dim_M;
  out["metric_class"] = to_string(inv.metric_class);
  out["volume_growth_undeformed"] = inv.volume_growth_undeformed;
  out["volume_growth_deformed"] = inv.volume_growth_deformed;
  out["cone_dim_undeformed"] = inv.cone_dim_undeformed;
  out["cone_dim_deformed"] = inv.cone_dim_deformed;
  out["cone_descriptor"] = inv.cone_descriptor;
  out["decay_class"] = to_string(inv.decay_class);
  out["sigma"] = sigma_analysis_json(inv.sigma);
  return out;
}

Json error_json(const Error& e) {
  Json out;
  out["code"] = error_code_name(e.code());
  out["message"] = e.what();
  return out;
}

Json finite_or_null(double v) {
  return std::isfinite(v) ? Json(v) : Json(nullptr);
}

Json matrix_json(const Eigen::MatrixXd& M) {
  Json rows = Json::array();
  for (long i = 0; i < M.rows(); ++i) {
    Json row = Json::array();
    for (long j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(row);
  }
  return rows;
}

// -------------------------------------------------------------- probes

ProbeConfig base_probe_config(const SubtorusSpec& spec, const ZetaLift& tau,
                              const std::optional<SigmaSpec>& sigma) {
  ProbeConfig cfg;
  cfg.spec = spec;
  auto levels = level_coordinates(spec, tau);
  cfg.zeta = Eigen::VectorXd(3 * static_cast<long>(levels.size()));
  for (long j = 0; j < static_cast<long>(levels.size()); ++j)
    for (long i = 0; i < 3; ++i)
      cfg.zeta(3 * j + i) = levels[static_cast<std::size_t>(j)]
                                  [static_cast<std::size_t>(i)]
                                      .convert_to<double>();
  if (sigma) {
    auto a = sigma_numeric(*sigma);
    cfg.a = Eigen::VectorXd(static_cast<long>(a.size()));
    for (long k = 0; k < cfg.a.size(); ++k)
      cfg.a(k) = a[static_cast<std::size_t>(k)];
  } else {
    cfg.a = Eigen::VectorXd::Zero(spec.d);
  }
  return cfg;
}

Json run_probe(const ProbeRequest& probe, const ProbeConfig& base,
               bool have_sigma) {
  if (probe.deformed && !have_sigma)
    throw Error(ErrorCode::PreconditionViolated,
                "a deformed probe needs the direction vector sigma");
  if (probe.kind == "decay" && probe.quantity == "V1" && !have_sigma)
    throw Error(ErrorCode::PreconditionViolated,
                "the inverse-potential quantity needs the direction vector "
                "sigma");
  ProbeConfig cfg = base;
  cfg.deformed = probe.deformed;

  AmbientPoint m = AmbientPoint::from_flat(Eigen::Map<const Eigen::VectorXd>(
      probe.point.data(), static_cast<long>(probe.point.size())));
  if (probe.project) m = level_project(m, cfg);

  if (probe.kind == "metric") {
    MetricSample sample = metric_at(m, cfg);
    Json out;
    out["xi_norm2"] = sample.xi_norm2;
    out["V1"] = finite_or_null(sample.V1);
    out["tn_fiber_norm2"] = sample.tn_fiber_norm2;
    out["slice_dim"] = sample.G.rows();
    out["G"] = matrix_json(sample.G);
    return out;
  }
  if (probe.kind == "curvature") {
    CurvatureReport rep = curvature_probe(m, cfg);
    Json out;
    out["dim"] = rep.dim;
    out["max_abs_sectional"] = rep.max_abs_sectional();
    out["ricci_norm"] = rep.ricci_norm;
    out["bianchi_residual"] = rep.bianchi_residual;
    out["symmetry_residual"] = rep.symmetry_residual;
    out["kretschmann"] = rep.kretschmann;
    Json sec = Json::array();
    for (const auto& s : rep.sectional) {
      Json e;
      e["a"] = s.a;
      e["b"] = s.b;
      e["value"] = s.value;
      sec.push_back(e);
    }
    out["sectional"] = sec;
    return out;
  }
  // decay
  RaySpec ray;
  ray.base = m;
  ray.direction = Eigen::Map<const Eigen::VectorXd>(
      probe.direction.data(), static_cast<long>(probe.direction.size()));
  DecayQuantity q = probe.quantity == "V1" ? DecayQuantity::V1
                                           : DecayQuantity::MAX_SECTIONAL;
  DecayFit fit = decay_fit(cfg, ray, q, probe.radii);
  Json out;
  out["degenerate"] = fit.degenerate;
  out["exponent"] = fit.degenerate ? Json(nullptr) : Json(fit.exponent);
  out["r2"] = fit.degenerate ? Json(nullptr) : Json(fit.r2);
  Json samples = Json::array();
  for (const auto& s : fit.samples)
    samples.push_back(Json::array({s.first, s.second}));
  out["samples"] = samples;
  return out;
}

Json probes_json(const AnalysisRequest& request, const ZetaLift& tau,
                 int jobs) {
  const auto& probes = request.probes;
  std::vector<Json> results(probes.size());
  if (!probes.empty()) {
    ProbeConfig base =
        base_probe_config(request.subtorus, tau, request.sigma);
    auto one = [&](std::size_t i) {
      Json entry;
      entry["index"] = i;
      entry["kind"] = probes[i].kind;
      try {
        entry["result"] = run_probe(probes[i], base, request.sigma.has_value());
        entry["error"] = nullptr;
      } catch (const Error& e) {
        entry["result"] = nullptr;
        entry["error"] = error_json(e);
      }
      results[i] = std::move(entry);
    };
    long workers = std::min<long>(jobs < 1 ? 1 : jobs,
                                  static_cast<long>(probes.size()));
    if (workers <= 1) {
      for (std::size_t i = 0; i < probes.size(); ++i) one(i);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      for (long w = 0; w < workers; ++w)
        pool.emplace_back([&] {
          for (std::size_t i = next.fetch_add(1); i < probes.size();
               i = next.fetch_add(1))
            one(i);
        });
      for (auto& t : pool) t.join();
    }
  }
  Json out = Json::array();
  for (auto& r : results) out.push_back(std::move(r));
  return out;
}

Json slopes_json(const SubtorusSpec& spec, const SigmaSpec& sigma) {
  Json out;
  try {
    auto entries = kronecker_slopes(spec, sigma);
    Json list = Json::array();
    for (const auto& e : entries) {
      Json row;
      row["pair"] = Json::array({e.pair.first, e.pair.second});
      row["slope"] = format_slope(e.slope);
      list.push_back(row);
    }
    out["entries"] = list;
    out["skipped"] = nullptr;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnsupportedNumberField) throw;
    out["entries"] = nullptr;
    out["skipped"] = e.what();
  }
  return out;
}

std::string slope_summary(const std::vector<SlopeEntry>& entries) {
  std::string text;
  for (const auto& e : entries) {
    if (!text.empty()) text += "; ";
    text += "a" + std::to_string(e.pair.second) + "/a" +
            std::to_string(e.pair.first) + "=" + format_slope(e.slope);
  }
  return text;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace

AnalysisRequest parse_request(const Json& doc) {
  if (!doc.is_object()) fail("", "expected a request object");
  check_keys(doc, "",
             {"format_version", "subtorus", "seed", "zeta", "sigma", "probes"});
  if (const Json* v = find(doc, "", "format_version")) {
    if (as_long(*v, "/format_version") != kFormatVersion)
      fail("/format_version",
           "unsupported version (expected " + std::to_string(kFormatVersion) +
               ")");
  }
  AnalysisRequest request;
  request.subtorus = parse_subtorus(need(doc, "", "subtorus"), "/subtorus");
  if (const Json* v = find(doc, "", "seed")) {
    if (!v->is_number_integer() || v->get<long long>() < 0)
      fail("/seed", "expected a nonnegative integer");
    request.seed = v->get<std::uint64_t>();
  }
  request.tau = ZetaLift::zero(request.subtorus.d);
  if (const Json* z = find(doc, "", "zeta")) {
    check_keys(*z, "/zeta", {"mode", "tau", "bound"});
    std::string mode = as_string(need(*z, "/zeta", "mode"), "/zeta/mode");
    if (mode == "sample") {
      request.sample_zeta = true;
      if (const Json* b = find(*z, "/zeta", "bound")) {
        request.sample_bound = as_long(*b, "/zeta/bound");
        if (request.sample_bound <= 0)
          fail("/zeta/bound", "expected a positive integer");
      }
      if (find(*z, "/zeta", "tau"))
        fail("/zeta/tau", "tau is not allowed in sample mode");
    } else if (mode == "explicit") {
      if (const Json* t = find(*z, "/zeta", "tau"))
        request.tau = parse_tau(*t, "/zeta/tau", request.subtorus.d);
      if (find(*z, "/zeta", "bound"))
        fail("/zeta/bound", "bound is only allowed in sample mode");
    } else {
      fail("/zeta/mode", "expected \"explicit\" or \"sample\"");
    }
  }
  if (const Json* s = find(doc, "", "sigma")) {
    if (!s->is_null())
      request.sigma = parse_sigma(*s, "/sigma", request.subtorus.d);
  }
  if (const Json* p = find(doc, "", "probes")) {
    if (!p->is_array()) fail("/probes", "expected an array");
    for (std::size_t i = 0; i < p->size(); ++i)
      request.probes.push_back(
          parse_probe((*p)[i], join_ptr("/probes", i), request.subtorus.d));
  }
  return request;
}

AnalysisRequest parse_request_text(const std::string& text) {
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded())
    throw Error(ErrorCode::ParseError, "request is not valid JSON");
  return parse_request(doc);
}

Json run_analysis(const AnalysisRequest& request, int jobs) {
  require_valid(request.subtorus);
  const SubtorusSpec& spec = request.subtorus;

  ZetaLift tau = request.tau;
  long attempts = 0;
  if (request.sample_zeta) {
    SampledLevel sampled =
        sample_generic_zeta(spec, request.seed, request.sample_bound);
    tau = sampled.tau;
    attempts = sampled.attempts;
  }

  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["tool_version"] = kToolVersion;
  doc["seed"] = request.seed;
  doc["request"] = request_json(request);

  Json zeta;
  zeta["mode"] = request.sample_zeta ? "sample" : "explicit";
  zeta["attempts"] = request.sample_zeta ? Json(attempts) : Json(nullptr);
  zeta["tau"] = tau_json(tau);
  zeta["level_coordinates"] = triples_json(level_coordinates(spec, tau));
  doc["zeta"] = zeta;

  UnimodularVerdict uni = check_hypothesis_unimodular(spec);
  UnimodularVerdict ac = check_ac_condition(spec);
  SmoothnessVerdict smooth = smoothness_check(spec, tau);
  Json verdicts;
  verdicts["unimodular"] = unimodular_json(uni);
  verdicts["ac"] = unimodular_json(ac);
  verdicts["smoothness"] = smoothness_json(smooth);
  doc["verdicts"] = verdicts;

  doc["strata"] = strata_json(enumerate_strata(spec));

  Json comp;
  comp["qac"] = descriptor_json(qac_compactification(spec));
  comp["tn"] = request.sigma
                   ? descriptor_json(tn_compactification(spec, *request.sigma))
                   : Json(nullptr);
  doc["compactifications"] = comp;

  if (request.sigma) {
    InvariantReport inv = invariant_report(spec, tau, *request.sigma);
    doc["invariants"] = invariants_json(inv);
    DecayDetail detail = decay_class_detail(spec, *request.sigma);
    Json decay;
    decay["class"] = to_string(detail.decay_class);
    decay["bound"] = detail.bound;
    decay["flag"] = detail.flag.empty() ? Json(nullptr) : Json(detail.flag);
    doc["decay"] = decay;
    doc["slopes"] = slopes_json(spec, *request.sigma);
  } else {
    long dim_M = 4 * (spec.d - kernel_sublattice(spec).rank());
    Json inv;
    inv["dim_M"] = dim_M;
    MetricClass cls = !smooth.smooth ? MetricClass::SINGULAR
                      : ac.holds     ? MetricClass::AC
                                     : MetricClass::QAC;
    inv["metric_class"] = to_string(cls);
    inv["volume_growth_undeformed"] = dim_M;
    inv["volume_growth_deformed"] = nullptr;
    inv["cone_dim_undeformed"] = dim_M;
    inv["cone_dim_deformed"] = nullptr;
    inv["cone_descriptor"] = nullptr;
    inv["decay_class"] = nullptr;
    inv["sigma"] = nullptr;
    doc["invariants"] = inv;
    doc["decay"] = nullptr;
    doc["slopes"] = nullptr;
  }

  doc["probes"] = probes_json(request, tau, jobs);
  return doc;
}

bool report_is_singular(const Json& report) {
  auto inv = report.find("invariants");
  if (inv == report.end() || !inv->is_object()) return false;
  auto cls = inv->find("metric_class");
  return cls != inv->end() && cls->is_string() &&
         cls->get<std::string>() == "SINGULAR";
}

std::vector<ScanRow> run_sigma_scan(const SubtorusSpec& spec) {
  std::vector<std::pair<std::string, SigmaSpec>> family;
  for (const auto& entry : scan_sigma_cone_dims(spec))
    family.emplace_back(entry.family, entry.sigma);
  return run_sigma_scan(spec, family);
}

std::vector<ScanRow> run_sigma_scan(
    const SubtorusSpec& spec,
    const std::vector<std::pair<std::string, SigmaSpec>>& family) {
  require_valid(spec);
  long dim_M = 4 * (spec.d - kernel_sublattice(spec).rank());
  std::vector<ScanRow> rows;
  for (const auto& [label, sigma] : family) {
    ScanRow row;
    row.family = label;
    try {
      SigmaAnalysis an = sigma_analysis(spec, sigma);
      row.zero_set = an.I_sigma.to_string();
      row.dim_T_sigma = an.dim_T_sigma;
      row.transversal = an.transversal;
      if (an.transversal) {
        row.cone_dim = dim_M - an.dim_T_sigma + an.dim_T_sigma_cap_N;
        DecayDetail detail = decay_class_detail(spec, sigma);
        row.decay_class = to_string(detail.decay_class);
        try {
          row.slopes = slope_summary(kronecker_slopes(spec, sigma));
        } catch (const Error& e) {
          if (e.code() != ErrorCode::UnsupportedNumberField) throw;
          row.slopes = "";
        }
      }
    } catch (const Error& e) {
      row.error = e.what(); // already prefixed with the error-code name
    }
    rows.push_back(row);
  }
  return rows;
}

std::string csv_field(const std::string& raw) {
  bool needs_quotes = raw.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs_quotes) return raw;
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::string out =
      "family,zero_set,dim_T_sigma,transversal,cone_dim,decay_class,slopes,"
      "error\r\n";
  for (const auto& row : rows) {
    out += csv_field(row.family) + ",";
    out += csv_field(row.zero_set) + ",";
    out += (row.dim_T_sigma >= 0 ? std::to_string(row.dim_T_sigma) : "") + ",";
    out += (row.error.empty() ? (row.transversal ? "true" : "false") : "");
    out += ",";
    out += (row.cone_dim >= 0 ? std::to_string(row.cone_dim) : "") + ",";
    out += csv_field(row.decay_class) + ",";
    out += csv_field(row.slopes) + ",";
    out += csv_field(row.error) + "\r\n";
  }
  return out;
}

SlopeClasses classify_slopes(const std::vector<std::string>& slopes) {
  SlopeClasses out;
  std::vector<QuadraticSlope> representatives;
  for (const auto& text : slopes) {
    QuadraticSlope value = parse_slope(text);
    bool placed = false;
    for (std::size_t c = 0; c < representatives.size(); ++c) {
      if (serret_equivalent(representatives[c], value)) {
        out.classes[c].push_back(format_slope(value));
        placed = true;
        break;
      }
    }
    if (!placed) {
      representatives.push_back(value);
      out.classes.push_back({format_slope(value)});
    }
  }
  return out;
}

Json classes_json(const SlopeClasses& classes) {
  Json out;
  Json list = Json::array();
  for (const auto& members : classes.classes) {
    Json e;
    e["representative"] = members.front();
    e["members"] = members;
    list.push_back(e);
  }
  out["classes"] = list;
  out["count"] = classes.classes.size();
  return out;
}

std::string decay_csv(const DecayFit& fit) {
  std::string out = "rho,value\r\n";
  for (const auto& [rho, value] : fit.samples)
    out += format_double(rho) + "," + format_double(value) + "\r\n";
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream stream(tmp, std::ios::binary | std::ios::trunc);
    stream.write(content.data(), static_cast<std::streamsize>(content.size()));
    stream.flush();
    if (!stream.good()) {
      std::error_code ignore;
      fs::remove(tmp, ignore);
      throw Error(ErrorCode::PreconditionViolated,
                  "cannot write to " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignore;
    fs::remove(tmp, ignore);
    throw Error(ErrorCode::PreconditionViolated,
                "cannot move report into place at " + path + ": " +
                    ec.message());
  }
}

} // namespace hypertoric
