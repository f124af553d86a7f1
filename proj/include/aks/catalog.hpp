#pragma once

// The algebra catalog: loading, instantiation at parameter samples, and the
// field-by-field verification of every expected value an entry declares.

#include "aks/git_engine.hpp"
#include "aks/io.hpp"
#include "aks/soliton.hpp"

#include <algorithm>
#include <future>
#include <numeric>

namespace aks {

struct CatalogEntry {
  std::string id;
  std::vector<std::string> tags;
  std::string origin;
  std::string note;
  Json algebra;
  /// Parameter samples; a single empty sample when the entry has no parameters.
  std::vector<ParamMap> samples;
  Json expected;

  bool has_tag(const std::string& t) const { return std::find(tags.begin(), tags.end(), t) != tags.end(); }
  Algebra instantiate(const ParamMap& sample) const { return parse_algebra(algebra, sample); }
};

class Catalog {
public:
  static Catalog from_json(const Json& doc) {
    Catalog c;
    const Json& arr = detail::member(doc, "entries", "<root>");
    if (!arr.is_array()) detail::parse_fail("entries", "expected an array");
    for (std::size_t n = 0; n < arr.size(); ++n) {
      const std::string path = "entries[" + std::to_string(n) + "]";
      const Json& e = arr[n];
      CatalogEntry ce;
      ce.id = detail::member(e, "id", path).get<std::string>();
      if (e.contains("tags"))
        for (const auto& t : e["tags"]) ce.tags.push_back(t.get<std::string>());
      ce.origin = e.value("origin", "");
      ce.note = e.value("note", "");
      ce.algebra = detail::member(e, "algebra", path);
      if (e.contains("samples")) {
        for (std::size_t s = 0; s < e["samples"].size(); ++s) {
          ParamMap pm;
          for (const auto& [k, v] : e["samples"][s].items())
            pm[k] = detail::read_real(v, path + ".samples[" + std::to_string(s) + "]." + k, {});
          ce.samples.push_back(std::move(pm));
        }
      }
      if (ce.samples.empty()) ce.samples.push_back({});
      ce.expected = e.value("expected", Json::object());
      if (c.index_.count(ce.id)) detail::parse_fail(path + ".id", "duplicate id '" + ce.id + "'");
      c.index_[ce.id] = c.entries_.size();
      c.entries_.push_back(std::move(ce));
    }
    return c;
  }

  static Catalog load(const std::string& path) { return from_json(load_json_file(path)); }

  const std::vector<CatalogEntry>& entries() const { return entries_; }

  const CatalogEntry& at(const std::string& id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) throw Error("unknown catalog entry '" + id + "'");
    return entries_[it->second];
  }

  bool contains(const std::string& id) const { return index_.count(id) > 0; }

private:
  std::vector<CatalogEntry> entries_;
  std::map<std::string, std::size_t> index_;
};

#ifdef AKS_DEFAULT_CATALOG
inline std::string default_catalog_path() { return AKS_DEFAULT_CATALOG; }
#else
inline std::string default_catalog_path() { return "data/catalog.json"; }
#endif

/// Ids carrying the tag (or starting with it), in catalog order; all ids when empty.
inline std::vector<std::string> list_entries(const Catalog& cat, const std::string& filter = "") {
  std::vector<std::string> out;
  for (const auto& e : cat.entries())
    if (filter.empty() || e.has_tag(filter) || e.id.rfind(filter, 0) == 0) out.push_back(e.id);
  return out;
}

/// dim {D in Der(mu) : omega(Dx, y) + omega(x, Dy) = 0}.
inline int dim_aut(const LieBracket& mu, const TwoForm& omega) {
  detail::require(omega.dim() == mu.dim(), "dim_aut: dimension mismatch");
  const int n = mu.dim();
  const Matrix w = omega.matrix();
  const Matrix der = detail::leibniz_system(mu);
  // (D^T W + W D)(a, b) for a < b, linear in vec(D) (column-major).
  Matrix sp = Matrix::Zero(n * (n - 1) / 2, n * n);
  int r = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b, ++r)
      for (int k = 0; k < n; ++k) {
        sp(r, static_cast<Eigen::Index>(a) * n + k) += w(k, b);
        sp(r, static_cast<Eigen::Index>(b) * n + k) += w(a, k);
      }
  Matrix all(der.rows() + sp.rows(), n * n);
  all << der, sp;
  return n * n - numerical_rank(all, kRankRelTol, 1e-13 * std::max(1.0, mu_norm(mu)));
}

struct Tolerances {
  double value = 1e-8;       // agreement with reference values
  double zero = 1e-10;       // quantities that vanish identically
  double derivation = 1e-9;  // Leibniz defects
  double input = 1e-12;      // Jacobi and closedness of stored data
  double solver = 1e-7;      // solver output against closed forms
  MinimalMetricOptions minimal;
};

struct Check {
  std::string field;
  bool passed = false;
  double error = 0.0;
  std::string detail;
};

struct SampleReport {
  ParamMap params;
  std::vector<Check> checks;
  std::string error;

  bool passed() const {
    return error.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }
};

struct EntryReport {
  std::string id;
  std::vector<SampleReport> samples;

  bool passed() const {
    return std::all_of(samples.begin(), samples.end(), [](const SampleReport& s) { return s.passed(); });
  }
};

namespace detail {

/// Expected matrix: {"zero": true}, {"diag": [...]}, {"entries": [{i, j, c}]}; diag and entries add up.
inline Matrix expected_matrix(const Json& spec, int n, const ParamMap& vars, const std::string& path) {
  Matrix m = Matrix::Zero(n, n);
  if (spec.contains("diag")) {
    const Json& d = spec["diag"];
    if (!d.is_array() || static_cast<int>(d.size()) != n) parse_fail(path + ".diag", "expected " + std::to_string(n) + " entries");
    for (int i = 0; i < n; ++i) m(i, i) += read_real(d[static_cast<std::size_t>(i)], path + ".diag", vars);
  }
  if (spec.contains("entries"))
    for (const auto& e : spec["entries"]) {
      const int i = read_index(member(e, "i", path), path + ".i"), j = read_index(member(e, "j", path), path + ".j");
      if (i < 1 || i > n || j < 1 || j > n) parse_fail(path, "entry index out of range");
      m(i - 1, j - 1) += read_real(member(e, "c", path), path + ".c", vars);
    }
  return m;
}

inline Vector expected_vector(const Json& arr, const ParamMap& vars, const std::string& path) {
  if (!arr.is_array()) parse_fail(path, "expected an array");
  Vector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = read_real(arr[i], path, vars);
  return v;
}

inline double bracket_distance(const LieBracket& a, const LieBracket& b) {
  double worst = 0.0;
  for (int i = 0; i < a.dim(); ++i) worst = std::max(worst, max_abs(a.ad_basis(i) - b.ad_basis(i)));
  return worst;
}

inline std::string short_num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

/// Permutation p with gram(p[a], p[b]) == target(a, b), if one exists.
inline std::optional<std::vector<int>> match_gram(const Matrix& gram, const Matrix& target, double tol) {
  if (gram.rows() != target.rows()) return std::nullopt;
  std::vector<int> p(static_cast<std::size_t>(gram.rows()));
  std::iota(p.begin(), p.end(), 0);
  do {
    bool ok = true;
    for (Eigen::Index a = 0; a < gram.rows() && ok; ++a)
      for (Eigen::Index b = 0; b < gram.rows() && ok; ++b)
        ok = std::abs(gram(p[a], p[b]) - target(a, b)) <= tol;
    if (ok) return p;
  } while (std::next_permutation(p.begin(), p.end()));
  return std::nullopt;
}

class Verifier {
public:
  Verifier(const Algebra& alg, const Json& expected, const ParamMap& sample, const Tolerances& tol)
      : a_(alg), x_(expected), sample_(sample), tol_(tol), n_(alg.mu.dim()) {}

  std::vector<Check> run() {
    input_checks();
    if (x_.value("critical", false)) critical_checks();
    if (x_.contains("dim_aut")) dim_aut_check();
    if (x_.contains("chern_op")) matrix_check("chern_op", chern_op(), x_["chern_op"]);
    if (x_.value("critical", false) && x_.contains("chern_op"))
      bound("chern_op_derivation", derivation_defect(chern_op(), a_.mu), tol_.derivation);
    if (x_.value("soliton", false)) soliton_check();
    if (x_.contains("verdict")) verdict_check();
    if (x_.contains("nice")) nice_check();
    if (x_.contains("gram_doubled")) gram_checks();
    if (x_.contains("weights")) weights_check();
    if (x_.contains("minimal_exists")) minimal_checks();
    if (x_.contains("unimodular")) {
      const auto u = is_unimodular(a_.mu, tol_.minimal.tol);
      add("unimodular", u.unimodular == x_["unimodular"].get<bool>(), u.defect, u.unimodular ? "true" : "false");
    }
    if (x_.contains("ricci")) matrix_check("ricci", curv().ric, x_["ricci"]);
    if (x_.contains("ric_ac")) matrix_check("ric_ac", curv().ric_ac, x_["ric_ac"]);
    if (x_.contains("h_hat")) vector_check("h_hat", curv().h_hat, expected_vector(x_["h_hat"], a_.params, "h_hat"));
    if (x_.value("chern_form_zero", false)) bound("chern_form", max_abs(curv().chern_form.matrix()), tol_.zero);
    if (x_.contains("ric_ac_decomposition")) decomposition_check();
    if (x_.contains("nijenhuis")) nijenhuis_check();
    return std::move(checks_);
  }

private:
  void add(const std::string& field, bool ok, double err, const std::string& detail = "") {
    checks_.push_back({field, ok, err, detail});
  }

  void bound(const std::string& field, double err, double tol) {
    add(field, err <= tol, err, "observed " + short_num(err) + ", tolerance " + short_num(tol));
  }

  void matrix_check(const std::string& field, const Matrix& got, const Json& spec) {
    const Matrix want = expected_matrix(spec, n_, a_.params, field);
    const bool zero = spec.value("zero", false);
    const double err = max_abs(got - want);
    bound(field, err, zero ? tol_.zero : tol_.value);
  }

  void vector_check(const std::string& field, const Vector& got, const Vector& want) {
    if (got.size() != want.size()) {
      add(field, false, 0.0, "length mismatch");
      return;
    }
    bound(field, max_abs(got - want), tol_.value);
  }

  const CurvatureReport& curv() {
    if (!curv_) curv_ = compute_curvature(a_.mu, a_.omega, a_.metric);
    return *curv_;
  }

  Matrix chern_op() { return curv().chern_op; }

  const MinimalMetricResult& minimal() {
    if (!minimal_) minimal_ = minimal_metric_solve(a_.mu, a_.omega, tol_.minimal);
    return *minimal_;
  }

  void input_checks() {
    const double scale = std::max(1.0, mu_norm(a_.mu));
    bound("jacobi", jacobi_defect(a_.mu), tol_.input * scale * scale);
    bound("closed", closedness_defect(a_.omega, a_.mu), tol_.input * scale);
  }

  void mm_sp_check(const std::string& field, const LieBracket& mu) {
    const double b2 = read_real(x_["beta_norm_sq"], "beta_norm_sq", a_.params);
    const Vector d = expected_vector(x_["derivation_diag"], a_.params, "derivation_diag");
    const Matrix mmsp = proj_sp(moment_map_gl(mu), j_operator(a_.omega));
    const Matrix want = -b2 * Matrix::Identity(n_, n_) + Matrix(d.asDiagonal());
    bound(field, max_abs(mmsp - want), tol_.value);
    bound(field + "_derivation", derivation_defect(d.asDiagonal(), mu), tol_.derivation);
  }

  void critical_checks() {
    bound("norm", std::abs(mu_norm(a_.mu) - 1.0), tol_.value);
    bound("scal", std::abs(scalar_curvature(a_.mu) + 0.25), tol_.value);
    mm_sp_check("mm_sp", a_.mu);
  }

  void dim_aut_check() {
    int want = x_["dim_aut"].get<int>();
    if (x_.contains("dim_aut_exceptional"))
      for (const auto& ex : x_["dim_aut_exceptional"]) {
        bool match = !sample_.empty();
        for (const auto& [k, v] : ex["at"].items()) {
          const auto it = sample_.find(k);
          match = match && it != sample_.end() && std::abs(it->second - v.get<double>()) <= 1e-12;
        }
        if (match) want = ex["dim_aut"].get<int>();
      }
    const int got = dim_aut(a_.mu, a_.omega);
    add("dim_aut", got == want, std::abs(got - want), "observed " + std::to_string(got) + ", expected " + std::to_string(want));
  }

  void soliton_check() {
    const auto cert = certify_soliton(a_.mu, a_.omega, a_.metric, tol_.value);
    add("soliton", is_soliton(cert.verdict), cert.residual, to_string(cert.verdict));
  }

  void verdict_check() {
    const std::string want = x_["verdict"].get<std::string>();
    const auto cert = certify_soliton(a_.mu, a_.omega, a_.metric, tol_.value);
    const std::string got = to_string(cert.verdict);
    const bool ok = want == "soliton" ? is_soliton(cert.verdict) : got == want;
    add("verdict", ok, cert.residual, "observed " + got + ", expected " + want);
  }

  void nice_check() {
    const auto nc = nice_basis_check(a_.mu, a_.omega, tol_.minimal.trials, tol_.minimal.seed, tol_.minimal.tol);
    const bool want = x_["nice"].get<bool>();
    add("nice", nc.nice == want, nc.max_defect, nc.nice ? "nice" : "not nice");
  }

  void gram_checks() {
    const WeightSystem ws = weight_set(a_.mu, a_.omega);
    const Json& g = x_["gram_doubled"];
    Matrix target(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(g.size()));
    for (std::size_t r = 0; r < g.size(); ++r)
      for (std::size_t c = 0; c < g.size(); ++c) target(r, c) = g[r][c].get<int>();
    // Doubled Gram entries are integers; compare after rounding.
    const Matrix doubled = 2.0 * ws.gram;
    const Matrix rounded = doubled.array().round().matrix();
    const double rounding = max_abs(doubled - rounded);
    const auto perm = match_gram(rounded, target, 0.0);
    add("gram_doubled", perm.has_value() && rounding <= tol_.value, rounding,
        perm ? "matches up to weight order" : "no weight order reproduces the reference matrix");
    if (!perm || !x_.contains("gram_solution")) return;
    const Vector xs = expected_vector(x_["gram_solution"], a_.params, "gram_solution");
    // Reference order a corresponds to computed weight perm[a].
    Vector x(xs.size());
    for (Eigen::Index a = 0; a < xs.size(); ++a) x((*perm)[a]) = xs(a);
    const double resid = max_abs(ws.gram * x - Vector::Ones(x.size()));
    add("gram_solution", resid <= tol_.value && x.minCoeff() > 0.0, resid, "reference vector solves U x = 1");
    const auto sol = positive_solution(ws.gram, tol_.minimal.tol);
    add("gram_positive", sol.has_value(), sol ? sol->margin : 0.0, sol ? "positive solution found" : "none");
  }

  void weights_check() {
    const WeightSystem ws = weight_set(a_.mu, a_.omega);
    const Json& w = x_["weights"];
    bool ok = ws.size() == w.size();
    double err = 0.0;
    for (std::size_t p = 0; ok && p < w.size(); ++p) {
      const Vector want = expected_vector(w[p], a_.params, "weights");
      err = std::max(err, max_abs(ws.weights[p] - want));
    }
    add("weights", ok && err <= tol_.value, err, std::to_string(ws.size()) + " weights");
  }

  void minimal_checks() {
    const bool want = x_["minimal_exists"].get<bool>();
    const auto& res = minimal();
    if (!want) {
      add("minimal_exists", res.status == MinimalStatus::no_positive_solution, 0.0, to_string(res.status));
      return;
    }
    add("minimal_exists", res.status == MinimalStatus::found, res.residual, to_string(res.status));
    if (res.status != MinimalStatus::found) return;
    if (x_.contains("beta_norm_sq"))
      bound("beta_norm_sq", std::abs(res.beta_norm_sq - read_real(x_["beta_norm_sq"], "beta_norm_sq", a_.params)), tol_.value);
    const LieBracket& crit = *res.mu_critical;
    bound("critical_norm", std::abs(mu_norm(crit) - 1.0), tol_.value);
    bound("critical_scal", std::abs(scalar_curvature(crit) + 0.25), tol_.value);
    if (x_.contains("derivation_diag") && x_.contains("beta_norm_sq")) mm_sp_check("critical_mm_sp", crit);
    if (x_.contains("critical_bracket")) {
      const LieBracket want = parse_brackets(x_["critical_bracket"], n_, a_.params, "critical_bracket");
      bound("critical_bracket", bracket_distance(crit, want), tol_.solver);
    }
    if (x_.contains("y_diag")) {
      const Vector y = expected_vector(x_["y_diag"], a_.params, "y_diag");
      const LieBracket closed_form = act_diagonal(y.array().exp().matrix(), a_.mu);
      bound("y_diag_gauge", bracket_distance(crit, closed_form), tol_.solver);
    }
    if (x_.contains("mm_gl_critical")) matrix_check("mm_gl_critical", moment_map_gl(crit), x_["mm_gl_critical"]);
    if (x_.contains("chern_op_critical"))
      matrix_check("chern_op_critical", chern_ricci_operator(crit, a_.omega), x_["chern_op_critical"]);
  }

  void decomposition_check() {
    const Json& d = x_["ric_ac_decomposition"];
    const double c = read_real(d["c"], "ric_ac_decomposition.c", a_.params);
    const Matrix dm = expected_matrix(d["d"], n_, a_.params, "ric_ac_decomposition.d");
    const auto got = scalar_plus_derivation(curv().ric_ac, a_.mu, tol_.value);
    if (!got) {
      add("ric_ac_decomposition", false, 0.0, "no decomposition");
      return;
    }
    const double err = std::max(std::abs(got->c - c), max_abs(got->d - dm));
    bound("ric_ac_decomposition", err, tol_.value);
  }

  void nijenhuis_check() {
    const auto j = j_operator(a_.omega, a_.metric);
    double err = 0.0;
    for (const auto& e : x_["nijenhuis"]) {
      const int xi = e["x"].get<int>(), yi = e["y"].get<int>();
      const Vector want = expected_vector(e["value"], a_.params, "nijenhuis.value");
      err = std::max(err, max_abs(nijenhuis(a_.mu, j, basis_vector(n_, xi - 1), basis_vector(n_, yi - 1)) - want));
    }
    bound("nijenhuis", err, tol_.value);
  }

  const Algebra& a_;
  const Json& x_;
  const ParamMap& sample_;
  const Tolerances& tol_;
  int n_;
  std::optional<CurvatureReport> curv_;
  std::optional<MinimalMetricResult> minimal_;
  std::vector<Check> checks_;
};

} // namespace detail

inline SampleReport verify_sample(const CatalogEntry& e, const ParamMap& sample, const Tolerances& tol = {}) {
  SampleReport r;
  r.params = sample;
  try {
    const Algebra a = e.instantiate(sample);
    r.params = a.params;
    r.checks = detail::Verifier(a, e.expected, sample, tol).run();
  } catch (const std::exception& ex) {
    r.error = ex.what();
  }
  return r;
}

inline EntryReport verify_entry(const CatalogEntry& e, const Tolerances& tol = {}) {
  EntryReport r;
  r.id = e.id;
  for (const auto& s : e.samples) r.samples.push_back(verify_sample(e, s, tol));
  return r;
}

inline EntryReport verify_entry(const Catalog& cat, const std::string& id, const Tolerances& tol = {}) {
  return verify_entry(cat.at(id), tol);
}

/// Verifies the given ids concurrently; results keep the order of `ids`.
inline std::vector<EntryReport> verify_entries(const Catalog& cat, const std::vector<std::string>& ids,
                                               const Tolerances& tol = {}) {
  std::vector<std::future<EntryReport>> jobs;
  for (const auto& id : ids) {
    const CatalogEntry& e = cat.at(id);
    jobs.push_back(std::async(std::launch::async, [&e, &tol] { return verify_entry(e, tol); }));
  }
  std::vector<EntryReport> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

/// Every table row and every row without a minimal metric.
inline std::vector<EntryReport> reproduce_tables(const Catalog& cat, const Tolerances& tol = {}) {
  std::vector<std::string> ids;
  for (const auto& e : cat.entries())
    if (e.has_tag("table3step") || e.has_tag("table2step") || e.has_tag("nonexistence")) ids.push_back(e.id);
  return verify_entries(cat, ids, tol);
}

} // namespace aks
