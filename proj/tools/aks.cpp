// aks: command-line front end for almost Kähler structures on Lie algebras.
//
//   aks validate  FILE        structural checks (exit 2 when invalid)
//   aks curvature FILE        Ricci, moment map and Chern-Ricci data
//   aks minimal   FILE        Gram criterion and the minimal metric (exit 3 / 4)
//   aks certify   FILE        soliton certificate
//   aks catalog list|verify   bundled tables and examples (exit 5 on mismatch)

#include "aks/catalog.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>

namespace {

enum Exit : int { ok = 0, failure = 1, invalid = 2, no_minimal = 3, not_nice = 4, mismatch = 5 };

struct Options {
  std::string file;
  std::vector<std::string> params;
  double tol = 1e-9;
  bool tol_given = false;
  int seed = 42;
  int trials = 5;
  int max_iter = 200;
  std::string format = "text";
  std::vector<std::string> entries;
  std::string catalog = aks::default_catalog_path();
  std::string filter;
  bool at_minimal = false;
};

aks::ParamMap parse_overrides(const std::vector<std::string>& kv) {
  aks::ParamMap out;
  for (const auto& s : kv) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw aks::Error("--param expects name=value, got '" + s + "'");
    try {
      out[s.substr(0, eq)] = aks::eval_expr(s.substr(eq + 1));
    } catch (const aks::ExprError& e) {
      throw aks::Error("--param " + s + ": " + e.what());
    }
  }
  return out;
}

aks::MinimalMetricOptions minimal_options(const Options& o) {
  aks::MinimalMetricOptions m;
  m.max_iter = o.max_iter;
  m.tol = o.tol;
  m.residual_tol = o.tol;
  m.trials = o.trials;
  m.seed = static_cast<std::uint64_t>(o.seed);
  return m;
}

// ---------------------------------------------------------------- output

void print_text(const aks::Json& j, const std::string& indent, std::ostream& os);

bool is_matrix(const aks::Json& j) {
  if (!j.is_array() || j.empty()) return false;
  for (const auto& r : j)
    if (!r.is_array() || r.empty() || !r[0].is_number()) return false;
  return true;
}

std::string scalar_text(const aks::Json& j) {
  if (j.is_number_float()) {
    std::ostringstream os;
    os << std::setprecision(10) << j.get<double>();
    return os.str();
  }
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

void print_value(const aks::Json& v, const std::string& indent, std::ostream& os) {
  if (is_matrix(v)) {
    os << '\n';
    for (const auto& row : v) {
      os << indent << "  ";
      for (const auto& x : row) os << std::setw(14) << scalar_text(x);
      os << '\n';
    }
  } else if (v.is_array() && std::none_of(v.begin(), v.end(), [](const aks::Json& x) { return x.is_structured(); })) {
    os << " [";
    for (std::size_t n = 0; n < v.size(); ++n) os << (n ? ", " : "") << scalar_text(v[n]);
    os << "]\n";
  } else if (v.is_object() && std::none_of(v.begin(), v.end(), [](const aks::Json& x) { return x.is_structured(); })) {
    std::string sep = " ";
    for (const auto& [k, x] : v.items()) {
      os << sep << k << '=' << scalar_text(x);
      sep = ", ";
    }
    os << '\n';
  } else if (v.is_structured()) {
    os << '\n';
    print_text(v, indent + "  ", os);
  } else {
    os << ' ' << scalar_text(v) << '\n';
  }
}

void print_text(const aks::Json& j, const std::string& indent, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      os << indent << k << ':';
      print_value(v, indent, os);
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      os << indent << "-";
      print_value(v, indent, os);
    }
  } else {
    os << indent << scalar_text(j) << '\n';
  }
}

void emit(const aks::Json& report, const Options& o) {
  if (o.format == "json") std::cout << aks::dump_json(report) << '\n';
  else print_text(report, "", std::cout);
}

aks::Json params_json(const aks::ParamMap& p) {
  aks::Json j = aks::Json::object();
  for (const auto& [k, v] : p) j[k] = v;
  return j;
}

aks::Json diag_json(const aks::Matrix& m) { return aks::to_json(aks::Vector(m.diagonal())); }

// ---------------------------------------------------------------- commands

struct Loaded {
  aks::Algebra alg;
  aks::Json report;
  bool valid = false;
};

Loaded load_and_validate(const Options& o) {
  Loaded l;
  l.alg = aks::load_algebra(o.file, parse_overrides(o.params));
  const auto& mu = l.alg.mu;
  const auto& w = l.alg.omega;
  const double jac = aks::jacobi_defect(mu);
  const double closed = aks::closedness_defect(w, mu);
  const bool nondeg = aks::is_nondegenerate(w);
  const auto step = aks::nilpotency_step(mu);
  const auto uni = aks::is_unimodular(mu, o.tol);
  l.valid = jac <= o.tol && closed <= o.tol && nondeg;
  aks::Json& r = l.report;
  r["dim"] = mu.dim();
  r["jacobi_defect"] = jac;
  r["closedness_defect"] = closed;
  r["nondegenerate"] = nondeg;
  r["nilpotency_step"] = step ? aks::Json(*step) : aks::Json(nullptr);
  r["unimodular"] = uni.unimodular;
  r["unimodular_defect"] = uni.defect;
  r["canonical_form"] = aks::is_canonical_form(w);
  r["valid"] = l.valid;
  if (!l.alg.params.empty()) r["params"] = params_json(l.alg.params);
  return l;
}

int cmd_validate(const Options& o) {
  const auto l = load_and_validate(o);
  emit(l.report, o);
  return l.valid ? ok : invalid;
}

int cmd_curvature(const Options& o) {
  auto l = load_and_validate(o);
  if (!l.valid) {
    emit(l.report, o);
    return invalid;
  }
  const auto c = aks::compute_curvature(l.alg.mu, l.alg.omega, l.alg.metric);
  aks::Json r;
  r["mm_gl"] = aks::to_json(c.mm_gl);
  r["ricci"] = aks::to_json(c.ric);
  r["scal"] = c.scal;
  r["ric_ac"] = aks::to_json(c.ric_ac);
  r["h_hat"] = aks::to_json(c.h_hat);
  r["h_mean"] = aks::to_json(c.h_mean);
  r["chern_op"] = aks::to_json(c.chern_op);
  r["chern_form"] = aks::to_json(c.chern_form.matrix());
  r["chern_op_nilpotency_defect"] = c.chern_nilpotency_defect;
  r["chern_op_derivation_defect"] = aks::derivation_defect(c.chern_op, l.alg.mu);
  r["j_compatibility_defect"] = c.j_defect;
  emit(r, o);
  return ok;
}

// Brings (mu, omega) to a Darboux frame when omega is not already omega_cn.
struct Normalized {
  aks::LieBracket mu;
  aks::TwoForm omega;
  std::optional<aks::Matrix> frame;
};

Normalized to_darboux(const aks::Algebra& a) {
  if (aks::is_canonical_form(a.omega)) return {a.mu, a.omega, std::nullopt};
  const aks::Matrix g = aks::darboux_normalize(a.omega);
  return {aks::act_basis_change(g, a.mu), aks::act_form(g, a.omega), g};
}

int cmd_minimal(const Options& o) {
  auto l = load_and_validate(o);
  if (!l.valid) {
    emit(l.report, o);
    return invalid;
  }
  const auto nz = to_darboux(l.alg);
  const auto res = aks::minimal_metric_solve(nz.mu, nz.omega, minimal_options(o));
  aks::Json r;
  r["status"] = aks::to_string(res.status);
  r["exists"] = res.exists;
  if (nz.frame) {
    r["darboux_frame"] = aks::to_json(*nz.frame);
    r["bracket_in_frame"] = aks::to_json(nz.mu);
  }
  r["nice_defect"] = res.nice_defect;
  aks::Json ws = aks::Json::array();
  for (std::size_t p = 0; p < res.weights.size(); ++p) {
    aks::Json sup = aks::Json::array();
    for (const auto& s : res.weights.support[p]) sup.push_back({s[0], s[1], s[2]});
    ws.push_back({{"diag", aks::to_json(res.weights.weights[p])}, {"support", sup}});
  }
  r["weights"] = ws;
  if (res.weights.size() > 0) r["gram"] = aks::to_json(res.weights.gram);
  if (res.x) r["solution"] = aks::to_json(*res.x);
  if (res.status == aks::MinimalStatus::found || res.status == aks::MinimalStatus::not_converged) {
    r["beta"] = aks::to_json(res.beta);
    r["beta_norm_sq"] = res.beta_norm_sq;
  }
  if (res.y_diag) r["y_diag"] = aks::to_json(*res.y_diag);
  if (res.a_diag) r["a_diag"] = aks::to_json(*res.a_diag);
  if (res.mu_critical) {
    const auto& mc = *res.mu_critical;
    const auto j = aks::j_operator(nz.omega);
    const aks::Matrix mm_sp = aks::proj_sp(aks::moment_map_gl(mc), j);
    const double c = -res.beta_norm_sq;
    r["critical_bracket"] = aks::to_json(mc);
    r["critical_norm"] = aks::mu_norm(mc);
    r["critical_scal"] = aks::scalar_curvature(mc);
    r["mm_sp_critical"] = aks::to_json(mm_sp);
    r["decomposition"] = {{"c", c}, {"derivation_diag", diag_json(mm_sp - c * aks::Matrix::Identity(mc.dim(), mc.dim()))}};
    r["residual"] = res.residual;
    r["iterations"] = res.iterations;
  }
  emit(r, o);
  switch (res.status) {
    case aks::MinimalStatus::found: return ok;
    case aks::MinimalStatus::no_positive_solution: return no_minimal;
    case aks::MinimalStatus::not_nice:
    case aks::MinimalStatus::not_nilpotent: return not_nice;
    case aks::MinimalStatus::not_converged: return failure;
  }
  return failure;
}

int cmd_certify(const Options& o) {
  auto l = load_and_validate(o);
  if (!l.valid) {
    emit(l.report, o);
    return invalid;
  }
  aks::Json r;
  aks::LieBracket mu = l.alg.mu;
  aks::TwoForm omega = l.alg.omega;
  std::optional<aks::Matrix> metric = l.alg.metric;
  if (o.at_minimal) {
    const auto nz = to_darboux(l.alg);
    const auto res = aks::minimal_metric_solve(nz.mu, nz.omega, minimal_options(o));
    r["minimal_status"] = aks::to_string(res.status);
    if (!res.mu_critical) {
      emit(r, o);
      if (res.status == aks::MinimalStatus::no_positive_solution) return no_minimal;
      return res.status == aks::MinimalStatus::not_converged ? failure : not_nice;
    }
    mu = *res.mu_critical;
    omega = nz.omega;
    metric.reset();
    r["critical_bracket"] = aks::to_json(mu);
  }
  const auto cert = aks::certify_soliton(mu, omega, metric, std::max(o.tol, 1e-8));
  r["verdict"] = aks::to_string(cert.verdict);
  r["soliton"] = aks::is_soliton(cert.verdict);
  r["residual"] = cert.residual;
  r["chern_op"] = aks::to_json(cert.chern_op);
  r["ric_ac"] = aks::to_json(cert.ric_ac);
  if (aks::is_soliton(cert.verdict)) {
    aks::Json parts = aks::Json::array();
    for (std::size_t p = 0; p < cert.c_values.size(); ++p)
      parts.push_back({{"c", cert.c_values[p]}, {"derivation", aks::to_json(cert.d_witnesses[p])}});
    r["decomposition"] = parts;
    r["c"] = cert.c();
  }
  emit(r, o);
  return ok;
}

aks::Tolerances catalog_tolerances(const Options& o) {
  aks::Tolerances t;
  t.minimal = minimal_options(o);
  t.minimal.tol = 1e-9;
  t.minimal.residual_tol = 1e-9;
  if (o.tol_given) {
    // An explicit --tol replaces every comparison tolerance.
    t.value = t.zero = t.derivation = t.input = t.solver = o.tol;
  }
  return t;
}

int cmd_catalog_list(const Options& o) {
  const auto cat = aks::Catalog::load(o.catalog);
  aks::Json r = aks::Json::array();
  for (const auto& id : aks::list_entries(cat, o.filter)) {
    const auto& e = cat.at(id);
    r.push_back({{"id", id}, {"tags", e.tags}, {"origin", e.origin}, {"samples", e.samples.size()}});
  }
  if (o.format == "json") {
    std::cout << aks::dump_json(r) << '\n';
  } else {
    for (const auto& e : r) std::cout << e["id"].get<std::string>() << "  (" << e["origin"].get<std::string>() << ")\n";
  }
  return ok;
}

int cmd_catalog_verify(const Options& o) {
  const auto cat = aks::Catalog::load(o.catalog);
  std::vector<std::string> ids;
  if (!o.entries.empty()) {
    for (const auto& id : o.entries) cat.at(id);
    ids = o.entries;
  } else {
    ids = aks::list_entries(cat, o.filter);
  }
  const auto reports = aks::verify_entries(cat, ids, catalog_tolerances(o));
  std::size_t passed = 0;
  aks::Json out = aks::Json::array();
  for (const auto& rep : reports) {
    if (rep.passed()) ++passed;
    aks::Json samples = aks::Json::array();
    for (const auto& s : rep.samples) {
      aks::Json checks = aks::Json::array();
      for (const auto& c : s.checks)
        checks.push_back({{"field", c.field}, {"passed", c.passed}, {"error", c.error}, {"detail", c.detail}});
      aks::Json sj = {{"params", params_json(s.params)}, {"passed", s.passed()}, {"checks", checks}};
      if (!s.error.empty()) sj["error"] = s.error;
      samples.push_back(std::move(sj));
    }
    out.push_back({{"id", rep.id}, {"passed", rep.passed()}, {"samples", samples}});
  }
  if (o.format == "json") {
    std::cout << aks::dump_json({{"entries", out}, {"passed", passed}, {"total", reports.size()}}) << '\n';
  } else {
    for (const auto& rep : reports) {
      std::cout << (rep.passed() ? "PASS " : "FAIL ") << rep.id << '\n';
      for (const auto& s : rep.samples) {
        std::string where;
        for (const auto& [k, v] : s.params) where += " " + k + "=" + aks::detail::short_num(v);
        if (!s.error.empty()) std::cout << "     error" << where << ": " << s.error << '\n';
        for (const auto& c : s.checks)
          if (!c.passed) std::cout << "     " << c.field << where << ": " << c.detail << '\n';
      }
    }
    std::cout << passed << "/" << reports.size() << " entries passed\n";
  }
  return passed == reports.size() ? ok : mismatch;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Almost Kähler structures on Lie algebras: curvature, minimal metrics, solitons"};
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* c) {
    auto* t = c->add_option("--tol", o.tol, "numerical tolerance")->default_val(1e-9);
    c->add_option("--seed", o.seed, "seed for nice-basis sampling")->default_val(42);
    c->add_option("--trials", o.trials, "random samples in the nice-basis check")->default_val(5);
    c->add_option("--max-iter", o.max_iter, "Newton iterations")->default_val(200);
    c->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}))->default_val("text");
    c->callback([&o, t] { o.tol_given = t->count() > 0; });
  };
  auto file_cmd = [&](const char* name, const char* help) {
    auto* c = app.add_subcommand(name, help);
    c->add_option("file", o.file, "algebra JSON file")->required();
    c->add_option("--param", o.params, "parameter override name=value");
    common(c);
    return c;
  };

  auto* validate = file_cmd("validate", "Jacobi, closedness, nondegeneracy, nilpotency, unimodularity");
  auto* curvature = file_cmd("curvature", "Ricci, moment map, Ric^ac, H-hat and the Chern-Ricci operator");
  auto* minimal = file_cmd("minimal", "nice-basis Gram criterion and the minimal compatible metric");
  auto* certify = file_cmd("certify", "soliton certificate");
  certify->add_flag("--at-minimal", o.at_minimal, "certify at the minimal metric instead of the given one");

  auto* catalog = app.add_subcommand("catalog", "bundled tables and worked examples");
  catalog->require_subcommand(1);
  catalog->add_option("--catalog", o.catalog, "catalog file")->default_val(aks::default_catalog_path());
  auto* list = catalog->add_subcommand("list", "list entries");
  list->add_option("filter", o.filter, "tag or id prefix");
  list->add_option("--format", o.format)->check(CLI::IsMember({"text", "json"}))->default_val("text");
  auto* verify = catalog->add_subcommand("verify", "recompute and compare every expected value");
  verify->add_option("filter", o.filter, "tag or id prefix");
  verify->add_option("--entry", o.entries, "entry id (repeatable)");
  common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? ok : invalid;
  }

  try {
    if (*validate) return cmd_validate(o);
    if (*curvature) return cmd_curvature(o);
    if (*minimal) return cmd_minimal(o);
    if (*certify) return cmd_certify(o);
    if (*list) return cmd_catalog_list(o);
    if (*verify) return cmd_catalog_verify(o);
  } catch (const aks::Error& e) {
    std::cerr << "aks: " << e.what() << '\n';
    return invalid;
  } catch (const std::exception& e) {
    std::cerr << "aks: " << e.what() << '\n';
    return failure;
  }
  return failure;
}
