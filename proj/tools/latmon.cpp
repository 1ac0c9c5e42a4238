// latmon command-line front end: machine-readable access to the lattice-sum
// evaluators, monotonicity certificates, dimension-bound calculator, and the
// orthonormal-family fuzzers.
//
// Exit codes: 0 = all assertions hold, 1 = a mathematical assertion failed
// (report preserved), 2 = usage/domain error, 3 = internal accuracy failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "latmon/detail/parallel.hpp"
#include "latmon/latmon.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitAssertFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitAccuracy = 3;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct CsvRow {
  std::string record;
  double value = 0.0;
  double error_bound = 0.0;
  double terms_used = 0.0;
};

void emit_csv(const std::vector<CsvRow>& rows) {
  std::cout << "record,value,error_bound,terms_used\n";
  for (const auto& r : rows)
    std::cout << r.record << ',' << fmt17(r.value) << ',' << fmt17(r.error_bound)
              << ',' << fmt17(r.terms_used) << '\n';
}

double default_tol() {
  if (const char* env = std::getenv("LATMON_DEFAULT_TOL")) {
    try {
      const double v = std::stod(env);
      if (v > 0.0) return v;
    } catch (...) {
    }
  }
  return 1e-10;
}

struct Emit {
  bool csv = false;
  json doc;
  std::vector<CsvRow> rows;

  void add(const std::string& record, double value, double err = 0.0,
           double terms = 0.0) {
    rows.push_back({record, value, err, terms});
  }
  void flush() {
    if (csv)
      emit_csv(rows);
    else
      std::cout << doc.dump(2) << '\n';
  }
};

latmon::ShellTable load_or_build_table(int dim, std::uint64_t need,
                                       const std::string& cache_dir) {
  if (!cache_dir.empty()) {
    const std::string path = cache_dir + "/latshell_d" + std::to_string(dim) +
                             "_k" + std::to_string(need) + ".bin";
    if (std::filesystem::exists(path)) {
      auto t = latmon::read_shell_cache(path);
      if (t.dimension == dim && t.max_norm_sq >= need) return t;
    }
    auto t = latmon::build_shell_table(dim, need);
    std::filesystem::create_directories(cache_dir);
    latmon::write_shell_cache(t, path);
    return t;
  }
  return latmon::build_shell_table(dim, need);
}

// ---------------------------------------------------------------------------

int cmd_latsum(int dim, double p, double m, const std::string& method,
               double tol, Emit& em, const std::string& cache_dir) {
  using namespace latmon;
  LatticeSumQuery q{dim, p, m, Tolerance::both(tol, tol)};
  q.validate();

  std::vector<std::string> methods;
  if (method == "all") {
    methods = {"direct", "theta"};
    if (dim == 2) methods.push_back("bessel");
  } else {
    methods = {method};
  }
  if (dim == 3 && method == "bessel")
    throw std::domain_error("bessel method is available only for --dim 2");
  if (m > 0.0 && m < 0.05 && (method == "bessel" || method == "all"))
    std::cerr << "latmon: warning: bessel series needs many shells for m < 0.05\n";

  // table sized for both direct (tapered cutoff) and bessel (shell arguments)
  std::uint64_t need = 1;
  std::vector<MethodResult> results;
  if (m == 0.0) {
    // prefactor vanishes identically; every representation gives 0
    for (const auto& name : methods)
      results.push_back({0.0, 0.0, 0,
                         name == "direct" ? SumMethod::direct
                         : name == "theta" ? SumMethod::theta_integral
                                           : SumMethod::bessel_series});
  } else {
    std::optional<ShellTable> table;
    auto table_for = [&](std::uint64_t k) -> const ShellTable& {
      if (!table || table->max_norm_sq < k) table = load_or_build_table(dim, k, cache_dir);
      return *table;
    };
    for (const auto& name : methods) {
      if (name == "direct") {
        const double k1 =
            std::max({4096.0 * std::cbrt(3e-9 / std::min(tol, 3e-9)), 1024.0,
                      4.0 * m * m});
        const auto k2 = std::uint64_t(2.0 * k1) + 4;
        results.push_back(direct_sum(q, table_for(std::max<std::uint64_t>(k2, 65536))));
      } else if (name == "theta") {
        results.push_back(theta_integral(q));
      } else {
        const double arg = 2.0 * kPi * m;
        const double kneed = std::pow((42.0 + p * 4.0) / arg, 2.0) + 16.0;
        results.push_back(bessel_series(q, table_for(std::max<std::uint64_t>(
                                               std::uint64_t(kneed), 65536))));
      }
    }
  }

  const double bound_rhs = q.limit_value();
  bool assertions = true;
  double max_delta = 0.0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (m > 0.0 && !(results[i].value < bound_rhs)) assertions = false;
    for (std::size_t j = i + 1; j < results.size(); ++j)
      max_delta = std::max(max_delta,
                           std::fabs(results[i].value - results[j].value));
  }
  double vmean = 0.0;
  for (const auto& r : results) vmean += r.value / double(results.size());
  const double agree_tol = std::max(1e-9, 2.0 * tol) * std::max(1.0, std::fabs(vmean));
  if (results.size() > 1 && max_delta > agree_tol) assertions = false;

  em.doc["params"] = {{"dim", dim}, {"p", p}, {"m", m}, {"tol", tol},
                      {"method", method}};
  em.doc["results"] = json::array();
  for (const auto& r : results) {
    em.doc["results"].push_back({{"method", to_string(r.method)},
                                 {"value", r.value},
                                 {"error_bound", r.error_bound},
                                 {"terms_used", r.terms_used}});
    em.add(to_string(r.method), r.value, r.error_bound, double(r.terms_used));
  }
  em.doc["checks"] = {{"bound_rhs", bound_rhs},
                      {"max_pairwise_delta", max_delta},
                      {"agreement_tol", agree_tol},
                      {"all_assertions_hold", assertions}};
  em.add("bound_rhs", bound_rhs);
  em.add("max_pairwise_delta", max_delta);
  em.add("all_assertions_hold", assertions ? 1.0 : 0.0);
  return assertions ? kExitOk : kExitAssertFailed;
}

int cmd_certify(const std::string& condition, double y_min, double y_max,
                long samples, bool refine, Emit& em) {
  using namespace latmon;
  CertCondition cond;
  if (condition == "condmon")
    cond = CertCondition::condmon_2d;
  else if (condition == "suff3")
    cond = CertCondition::suff3_3d;
  else
    throw std::domain_error("certify: unknown condition " + condition);

  const auto rep = certify(cond, y_min, y_max, samples, refine);

  em.doc["params"] = {{"condition", condition}, {"y_min", y_min},
                      {"y_max", y_max}, {"samples", samples}, {"refine", refine}};
  em.doc["results"] = {
      {"min_value", rep.min_value},
      {"min_location", rep.min_location},
      {"violations", rep.violations.size()},
      {"named_constants",
       {{"y_star", rep.named_constants.y_star},
        {"g_at_pi", rep.named_constants.g_at_pi},
        {"h_at_y_star", rep.named_constants.h_at_y_star}}}};
  em.add("min_value", rep.min_value);
  em.add("min_location", rep.min_location);
  em.add("violations", double(rep.violations.size()));
  em.add("y_star", rep.named_constants.y_star);
  em.add("g_at_pi", rep.named_constants.g_at_pi);
  em.add("h_at_y_star", rep.named_constants.h_at_y_star);
  return rep.violations.empty() ? kExitOk : kExitAssertFailed;
}

int cmd_dimbound(const std::string& model, const std::string& bc,
                 double nu, double area, double f_norm, double gamma,
                 double alpha, double g_norm, double curl_g_norm,
                 const std::string& clt_name, bool q_table, Emit& em) {
  using namespace latmon;
  em.doc["params"] = {{"model", model}};

  if (model == "ns2d") {
    if (!(nu > 0.0) || !(area > 0.0) || !(f_norm >= 0.0))
      throw std::domain_error("ns2d model needs --nu > 0, --area > 0, --f-norm >= 0");
    double clt;
    const auto& cands = constants::clt_candidates();
    auto it = cands.find(clt_name);
    if (it != cands.end()) {
      clt = it->second;
    } else {
      try {
        clt = std::stod(clt_name);
      } catch (...) {
        throw std::domain_error("unknown --clt value: " + clt_name);
      }
      if (!(clt >= constants::clt_lower()))
        throw std::domain_error("--clt below the classical lower bound 1/(2 pi)");
    }
    PhysicalParams params;
    params.nu = nu;
    params.area = area;
    params.f_l2 = f_norm;
    const double G = grashof(params);
    const double li = dim_bound_ns2d(params, clt, Ns2dVariant::li_yau);
    const double no_li = dim_bound_ns2d(params, clt, Ns2dVariant::no_li_yau);
    const double pre = dim_bound_ns2d(params, constants::clad_upper(),
                                      Ns2dVariant::pre_lt);
    em.doc["params"].update({{"nu", nu}, {"area", area}, {"f_norm", f_norm},
                             {"clt", clt}});
    em.doc["results"] = {{"grashof", G}, {"li_yau", li}, {"no_li_yau", no_li},
                         {"pre_lt", pre}};
    em.add("grashof", G);
    em.add("clt", clt);
    em.add("li_yau", li);
    em.add("no_li_yau", no_li);
    em.add("pre_lt", pre);
    if (q_table) {
      const QCurve curve = q_lt_curve(params, clt);
      const long n0 = find_sign_change(curve);
      const auto lres = n_lifschitz(curve, n0);
      json rows = json::array();
      for (long n = std::max(0L, n0 - 2); n <= n0 + 3; ++n) {
        rows.push_back({{"n", n}, {"q", curve(double(n))}});
        em.add("q(" + std::to_string(n) + ")", curve(double(n)));
      }
      em.doc["results"]["q_table"] = rows;
      em.doc["results"]["n_lifschitz"] = lres.n_l;
      em.doc["results"]["n_star"] = lres.n_star;
      em.add("n_lifschitz", lres.n_l);
      em.add("n_star", lres.n_star);
    }
    return kExitOk;
  }

  if (model == "alpha2d" || model == "alpha3d") {
    if (!(gamma > 0.0) || !(alpha > 0.0))
      throw std::domain_error(model + " model needs --gamma > 0 and --alpha > 0");
    PhysicalParams params;
    params.gamma = gamma;
    params.alpha = alpha;
    if (g_norm >= 0.0) params.g_l2 = g_norm;
    if (curl_g_norm >= 0.0) params.curl_g_l2 = curl_g_norm;
    const int dim = model == "alpha2d" ? 2 : 3;
    AlphaBc bcv = AlphaBc::no_boundary;
    if (dim == 2) {
      if (bc == "proper")
        bcv = AlphaBc::proper_domain;
      else if (bc != "no-boundary" && !bc.empty())
        throw std::domain_error("--bc must be no-boundary or proper");
      if (bcv == AlphaBc::no_boundary && !params.curl_g_l2 && params.g_l2)
        std::cerr << "latmon: warning: no --curl-g-norm; min degenerates to the"
                     " ||g|| branch\n";
    }
    const double bound = dim_bound_alpha(dim, bcv, params);
    em.doc["params"].update({{"gamma", gamma}, {"alpha", alpha}});
    if (params.g_l2) em.doc["params"]["g_norm"] = *params.g_l2;
    if (params.curl_g_l2) em.doc["params"]["curl_g_norm"] = *params.curl_g_l2;
    if (dim == 2) em.doc["params"]["bc"] = bcv == AlphaBc::proper_domain ? "proper" : "no-boundary";
    em.doc["results"] = {{"dim_bound", bound}};
    em.add("dim_bound", bound);
    return kExitOk;
  }

  throw std::domain_error("unknown --model: " + model);
}

int cmd_fuzz(const std::string& check, long trials, std::uint64_t seed, int n,
             double m, double p, double q, double alpha, int modes, Emit& em) {
  using namespace latmon;
  long passes = 0;
  double max_ratio = 0.0;
  std::optional<std::uint64_t> first_fail;
  double bound = 0.0;

  if (check == "liebd2") {
    if (n < 1 || !(m > 0.0) || !(p >= 1.0))
      throw std::domain_error("fuzz liebd2 needs --n >= 1, --m > 0, --p >= 1");
    bound = constants::b_p(p) * std::pow(m, -2.0 / p) *
            std::pow(double(n), 1.0 / p);
    std::vector<double> ratios(trials, 0.0);
    std::vector<char> ok(trials, 0);
    detail::parallel_for(std::size_t(trials), [&](std::size_t i) {
      const auto fam = random_ortho_family(n, m, modes, seed + i);
      const auto r = check_liebd2(fam, p);
      ratios[i] = r.lhs / r.rhs;
      ok[i] = r.holds ? 1 : 0;
    });
    for (long i = 0; i < trials; ++i) {
      max_ratio = std::max(max_ratio, ratios[i]);
      if (ok[i]) ++passes;
      else if (!first_fail) first_fail = seed + i;
    }
  } else if (check == "gagnir") {
    if (!(q >= 2.0)) throw std::domain_error("fuzz gagnir needs --q >= 2");
    bound = gagnir_constant(q, GagSpace::torus);
    std::vector<double> ratios(trials, 0.0);
    std::vector<char> ok(trials, 0);
    detail::parallel_for(std::size_t(trials), [&](std::size_t i) {
      detail::GaussianGen gen(seed + i);
      const auto f = detail::random_field(modes, true, gen);
      const auto r = check_gagnir(f, q);
      ratios[i] = r.ratio;
      ok[i] = (r.holds && r.additive_holds) ? 1 : 0;
    });
    for (long i = 0; i < trials; ++i) {
      max_ratio = std::max(max_ratio, ratios[i]);
      if (ok[i]) ++passes;
      else if (!first_fail) first_fail = seed + i;
    }
  } else if (check == "alpha") {
    if (n < 1 || !(alpha > 0.0))
      throw std::domain_error("fuzz alpha needs --n >= 1 and --alpha > 0");
    bound = 1.0 / (2.0 * std::sqrt(constants::pi)) * std::sqrt(double(n) / alpha);
    std::vector<double> ratios(trials, 0.0);
    std::vector<char> ok(trials, 0);
    detail::parallel_for(std::size_t(trials), [&](std::size_t i) {
      const auto r = check_alpha_consistency(n, alpha, seed + i, modes);
      ratios[i] = r.lhs / r.rhs;
      ok[i] = (r.holds && r.holds == r.holds_m && r.rescale_rel_diff < 1e-12) ? 1 : 0;
    });
    for (long i = 0; i < trials; ++i) {
      max_ratio = std::max(max_ratio, ratios[i]);
      if (ok[i]) ++passes;
      else if (!first_fail) first_fail = seed + i;
    }
  } else {
    throw std::domain_error("unknown --check: " + check);
  }

  em.doc["params"] = {{"check", check}, {"trials", trials}, {"seed", seed},
                      {"n", n}, {"m", m}, {"p", p}, {"q", q},
                      {"alpha", alpha}, {"modes", modes}};
  em.doc["results"] = {{"passes", passes},
                       {"failures", trials - passes},
                       {"max_ratio", max_ratio},
                       {"bound", bound}};
  if (first_fail) em.doc["results"]["first_fail_seed"] = *first_fail;
  em.add("passes", double(passes));
  em.add("failures", double(trials - passes));
  em.add("max_ratio", max_ratio);
  em.add("bound", bound);
  if (first_fail) em.add("first_fail_seed", double(*first_fail));
  return passes == trials ? kExitOk : kExitAssertFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latmon: lattice-sum evaluators, monotonicity certificates, "
               "attractor-dimension bounds, and torus inequality fuzzing"};
  app.require_subcommand(1);
  app.set_version_flag("--version", latmon::kVersion);

  bool use_json = false, use_csv = false;
  std::string cache_dir;
  app.add_flag("--json", use_json, "emit a JSON document (default)");
  app.add_flag("--csv", use_csv, "emit CSV records instead of JSON");
  app.add_option("--cache-dir", cache_dir, "shell-table binary cache directory");

  // latsum
  auto* ls = app.add_subcommand("latsum", "evaluate the lattice sum I_p(m)");
  int ls_dim = 2;
  double ls_p = 2.0, ls_m = 1.0, ls_tol = default_tol();
  std::string ls_method = "all";
  ls->add_option("--dim", ls_dim, "dimension (2 or 3)")->required();
  ls->add_option("--p", ls_p, "exponent p")->required();
  ls->add_option("--m", ls_m, "spectral shift m")->required();
  ls->add_option("--method", ls_method, "direct|theta|bessel|all")
      ->check(CLI::IsMember({"direct", "theta", "bessel", "all"}));
  ls->add_option("--tol", ls_tol, "accuracy target (abs and rel)");

  // certify
  auto* ct = app.add_subcommand("certify", "scan a monotonicity condition");
  std::string ct_cond;
  double ct_ymin = 1e-3, ct_ymax = 100.0;
  long ct_samples = 100000;
  bool ct_refine = false;
  ct->add_option("--condition", ct_cond, "condmon|suff3")->required();
  ct->add_option("--y-min", ct_ymin, "lower end of the scan")->required();
  ct->add_option("--y-max", ct_ymax, "upper end of the scan")->required();
  ct->add_option("--samples", ct_samples, "log-spaced sample count")->required();
  ct->add_flag("--refine", ct_refine, "golden-section refinement of the minimum");

  // dimbound
  auto* db = app.add_subcommand("dimbound", "attractor-dimension bounds");
  std::string db_model, db_bc, db_clt = "fhjn";
  double db_nu = -1, db_area = -1, db_f = -1, db_gamma = -1, db_alpha = -1,
         db_g = -1, db_curl = -1;
  bool db_qtable = false;
  db->add_option("--model", db_model, "ns2d|alpha2d|alpha3d")->required();
  db->add_option("--nu", db_nu, "viscosity");
  db->add_option("--area", db_area, "domain area |Omega|");
  db->add_option("--f-norm", db_f, "L2 norm of the forcing");
  db->add_option("--gamma", db_gamma, "Ekman damping");
  db->add_option("--alpha", db_alpha, "filter parameter");
  db->add_option("--g-norm", db_g, "L2 norm of g");
  db->add_option("--curl-g-norm", db_curl, "L2 norm of curl g");
  db->add_option("--bc", db_bc, "no-boundary|proper (2D alpha model)");
  db->add_option("--clt", db_clt, "fhjn|dll|hlw|lt|<value>");
  db->add_flag("--q-table", db_qtable, "print the q(n) table around the root");

  // fuzz
  auto* fz = app.add_subcommand("fuzz", "randomized inequality checks");
  std::string fz_check;
  long fz_trials = 100;
  std::uint64_t fz_seed = 1;
  int fz_n = 4, fz_modes = 8;
  double fz_m = 1.0, fz_p = 2.0, fz_q = 4.0, fz_alpha = 0.25;
  fz->add_option("--check", fz_check, "liebd2|gagnir|alpha")->required();
  fz->add_option("--trials", fz_trials, "number of random instances")->required();
  fz->add_option("--seed", fz_seed, "base seed");
  fz->add_option("--n", fz_n, "family size");
  fz->add_option("--m", fz_m, "spectral shift of the inner product");
  fz->add_option("--p", fz_p, "L^p exponent for liebd2");
  fz->add_option("--q", fz_q, "L^q exponent for gagnir");
  fz->add_option("--alpha", fz_alpha, "filter parameter for the alpha check");
  fz->add_option("--modes", fz_modes, "wavevector cutoff k_max");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return kExitUsage;
  }

  Emit em;
  em.csv = use_csv && !use_json;
  em.doc["tool"] = "latmon";
  em.doc["version"] = latmon::kVersion;

  const auto t0 = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    if (ls->parsed()) {
      em.doc["command"] = "latsum";
      code = cmd_latsum(ls_dim, ls_p, ls_m, ls_method, ls_tol, em, cache_dir);
    } else if (ct->parsed()) {
      em.doc["command"] = "certify";
      code = cmd_certify(ct_cond, ct_ymin, ct_ymax, ct_samples, ct_refine, em);
    } else if (db->parsed()) {
      em.doc["command"] = "dimbound";
      code = cmd_dimbound(db_model, db_bc, db_nu, db_area, db_f, db_gamma,
                          db_alpha, db_g, db_curl, db_clt, db_qtable, em);
    } else if (fz->parsed()) {
      em.doc["command"] = "fuzz";
      code = cmd_fuzz(fz_check, fz_trials, fz_seed, fz_n, fz_m, fz_p, fz_q,
                      fz_alpha, fz_modes, em);
    }
  } catch (const latmon::accuracy_error& e) {
    std::cerr << "latmon: accuracy failure: " << e.what() << '\n';
    return kExitAccuracy;
  } catch (const latmon::insufficient_cutoff_error& e) {
    std::cerr << "latmon: accuracy failure: " << e.what() << '\n';
    return kExitAccuracy;
  } catch (const std::exception& e) {
    std::cerr << "latmon: error: " << e.what() << '\n';
    return kExitUsage;
  }

  const auto t1 = std::chrono::steady_clock::now();
  em.doc["wall_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  em.flush();
  return code;
}
