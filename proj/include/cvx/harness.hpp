#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cvx/convex_distance.hpp"
#include "cvx/counting_oracle.hpp"
#include "cvx/discrete_function.hpp"
#include "cvx/function_io.hpp"
#include "cvx/generators.hpp"
#include "cvx/rational.hpp"
#include "cvx/rng.hpp"
#include "cvx/testers.hpp"

namespace cvx {

// ---------------------------------------------------------------------------
// Wilson score intervals, computed in exact rational arithmetic with the
// single square root taken at fixed precision 1e-9 (integer sqrt of the
// scaled radicand), so results replay byte-identically everywhere.

namespace detail {
inline Rational wilson_z(const Rational& confidence) {
  // two-sided normal quantiles, pinned as exact decimal constants
  static const std::vector<std::pair<Rational, Rational>> table = {
      {Rational(9, 10), Rational::parse("1.6448536269514722")},
      {Rational(19, 20), Rational::parse("1.959963984540054")},
      {Rational(99, 100), Rational::parse("2.5758293035489004")},
      {Rational(999, 1000), Rational::parse("3.2905267314918945")},
  };
  for (const auto& [conf, z] : table)
    if (conf == confidence) return z;
  throw std::invalid_argument("wilson_interval: unsupported confidence " + confidence.to_string());
}

// floor approximation of sqrt(r) with absolute error below 1e-9
inline Rational sqrt_fixed(const Rational& r) {
  if (r.sign() < 0) throw std::domain_error("sqrt_fixed: negative argument");
  const mpz_class& p = r.num();
  const mpz_class& q = r.den();
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, 18);
  mpz_class radicand = p * q * scale;
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), radicand.get_mpz_t());
  mpz_class denom;
  mpz_ui_pow_ui(denom.get_mpz_t(), 10, 9);
  return Rational(root, q * denom);
}

inline Rational snap_1e9(const Rational& r) {
  const Rational scaled = r * Rational(1000000000L);
  return Rational(floor_mpz(scaled + Rational(1, 2)), mpz_class(1000000000L));
}
}  // namespace detail

inline std::pair<Rational, Rational> wilson_interval(long successes, long trials,
                                                     const Rational& confidence) {
  if (trials < 1) throw std::invalid_argument("wilson_interval: trials must be positive");
  if (successes < 0 || successes > trials)
    throw std::invalid_argument("wilson_interval: successes out of range");
  const Rational z = detail::wilson_z(confidence);
  const Rational z2 = z * z;
  const Rational t(trials);
  const Rational phat = Rational(successes) / t;
  const Rational denom = Rational(1) + z2 / t;
  const Rational center = phat + z2 / (Rational(2) * t);
  const Rational radicand = phat * (Rational(1) - phat) / t + z2 / (Rational(4) * t * t);
  const Rational root = detail::sqrt_fixed(radicand);
  Rational low = detail::snap_1e9((center - z * root) / denom);
  Rational high = detail::snap_1e9((center + z * root) / denom);
  if (low < Rational(0)) low = Rational(0);
  if (high > Rational(1)) high = Rational(1);
  if (successes == 0) low = Rational(0);
  if (successes == trials) high = Rational(1);
  return {low, high};
}

// ---------------------------------------------------------------------------
// Exact worst-case query counts, computable without running a tester.

inline long query_audit(const std::string& algo, int n, const Rational& eps, int s) {
  if (algo == "adaptive2") return 5;
  if (algo == "nonadaptive2" || algo == "nonadaptive2-literal") {
    if (n < 4) throw std::domain_error("query_audit: nonadaptive2 requires n >= 4");
    if (!(eps > Rational(0) && eps < Rational(1)))
      throw std::domain_error("query_audit: eps outside (0,1)");
    const long pairs = floor_to_long(Rational(1) / eps);
    long count = 4;
    for (long i = 1; i <= pairs; ++i) {
      const long x = round_half_up_to_long(Rational(i) * eps * Rational(n));
      count += (x + 1 <= n) ? 2 : 1;
    }
    return count;
  }
  if (algo == "subdomain") {
    if (n < 4) throw std::domain_error("query_audit: subdomain requires |B| >= 4");
    return 4 * subdomain_iterations(eps, n);
  }
  if (algo == "param") {
    detail::validate_param_args(n, eps, s);
    const int bsz = static_cast<int>(hub_set(n, eps, s).size());
    return 5 + 4 * subdomain_iterations(eps / Rational(32), bsz);
  }
  if (algo == "param-amp")
    return amplification_rounds(eps) * query_audit("param", n, eps, s);
  throw std::invalid_argument("query_audit: unknown algorithm '" + algo + "'");
}

inline TestOutcome run_tester(const std::string& algo, CountingOracle& o, const Rational& eps,
                              int s, Rng& rng) {
  if (algo == "adaptive2") return adaptive_two_deriv(o);
  if (algo == "nonadaptive2") return nonadaptive_two_deriv(o, eps);
  if (algo == "nonadaptive2-literal")
    return nonadaptive_two_deriv(o, eps, TwoDerivVariant::literal_paper);
  if (algo == "subdomain") {
    const SubdomainView full = SubdomainView::full(o.function());
    return subdomain_basic(o, full, eps, rng);
  }
  if (algo == "param") return param_basic(o, eps, s, rng);
  if (algo == "param-amp") return param_amplified(o, eps, s, rng);
  throw std::invalid_argument("unknown algorithm '" + algo + "'");
}

// ---------------------------------------------------------------------------
// Declarative experiment campaigns.

struct InstanceSpec {
  std::string kind;  // file | two-piece | half-staircase | convex-random | far-random | lift
  std::string file;  // input path for kind=file, base function for kind=lift
  int n = 0;
  int s = 2;
  int j = 0;  // kink position (two-piece, half-staircase); 0 means n/2-ish default
  int k = 2;  // lift factor
  Rational a = Rational(0);
  Rational r1 = Rational(0);
  Rational r2 = Rational(1);
  Rational min_rel_dist = Rational(1, 8);
};

struct ExperimentConfig {
  std::string algo;
  InstanceSpec instance;
  Rational eps = Rational(1, 8);
  int s = 2;
  long trials = 0;
  std::uint64_t master_seed = 0;
  std::string output;
};

struct TrialSummary {
  long rejections = 0;
  long trials = 0;
  Rational reject_rate;
  Rational wilson_low_99;
  Rational wilson_high_99;
  Rational mean_queries;
  long max_queries = 0;
  std::optional<long> oracle_distance;
};

inline std::pair<DiscreteFunction, std::optional<InstanceLabel>> materialize_instance(
    const InstanceSpec& spec, Rng& rng) {
  if (spec.kind == "file") return {load_function(spec.file), std::nullopt};
  if (spec.kind == "two-piece") {
    const int j = spec.j > 0 ? spec.j : (spec.n + 1) / 2;
    return {two_piece(spec.a, spec.r1, j, spec.r2, spec.n), std::nullopt};
  }
  if (spec.kind == "half-staircase") {
    const int j = spec.j > 0 ? spec.j : spec.n / 2;
    return {half_staircase(spec.n, j), std::nullopt};
  }
  if (spec.kind == "convex-random") return {random_convex(spec.n, spec.s, rng), std::nullopt};
  if (spec.kind == "far-random") {
    auto [f, label] = random_far(spec.n, spec.s, spec.min_rel_dist, rng);
    return {std::move(f), std::move(label)};
  }
  if (spec.kind == "lift") return {lift(load_function(spec.file), spec.k), std::nullopt};
  throw std::invalid_argument("materialize_instance: unknown kind '" + spec.kind + "'");
}

inline TrialSummary run_trials_on(const ExperimentConfig& cfg, const DiscreteFunction& f,
                                  const std::optional<InstanceLabel>& label) {
  if (cfg.trials < 1) throw std::invalid_argument("run_trials: trials must be positive");
  TrialSummary sum;
  sum.trials = cfg.trials;
  long total_queries = 0;
  for (long i = 0; i < cfg.trials; ++i) {
    Rng rng(split_seed(cfg.master_seed, static_cast<std::uint64_t>(i)));
    CountingOracle o(f);
    const TestOutcome out = run_tester(cfg.algo, o, cfg.eps, cfg.s, rng);
    if (out.rejected()) ++sum.rejections;
    const long q = static_cast<long>(out.queries.size());
    total_queries += q;
    sum.max_queries = std::max(sum.max_queries, q);
  }
  sum.reject_rate = Rational(sum.rejections) / Rational(sum.trials);
  auto [lo, hi] = wilson_interval(sum.rejections, sum.trials, Rational(99, 100));
  sum.wilson_low_99 = lo;
  sum.wilson_high_99 = hi;
  sum.mean_queries = Rational(total_queries) / Rational(sum.trials);
  if (label && label->claimed_distance)
    sum.oracle_distance = *label->claimed_distance;
  else if (f.n() <= 500)
    sum.oracle_distance = distance_to_convex(f).distance;
  return sum;
}

inline std::pair<TrialSummary, int> run_trials(const ExperimentConfig& cfg) {
  Rng gen_rng(mix64(cfg.master_seed));
  auto [f, label] = materialize_instance(cfg.instance, gen_rng);
  return {run_trials_on(cfg, f, label), f.n()};
}

// ---------------------------------------------------------------------------
// CSV / JSON emission. All rational columns use fixed 9-decimal rendering so
// identical configs produce byte-identical files.

inline std::string format_decimal(const Rational& r, unsigned digits = 9) {
  const bool neg = r.sign() < 0;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  const Rational scaled = abs(r) * Rational(scale, mpz_class(1));
  const mpz_class m = floor_mpz(scaled + Rational(1, 2));
  const mpz_class ip = m / scale;
  mpz_class fp = m % scale;
  std::string frac = fp.get_str();
  frac.insert(0, digits - frac.size(), '0');
  return (neg ? "-" : "") + ip.get_str() + "." + frac;
}

inline constexpr const char* kCsvHeader =
    "algo,n,s,eps,trials,rejections,reject_rate,wilson_low_99,wilson_high_99,"
    "mean_queries,max_queries,oracle_distance,master_seed";

inline std::string csv_row(const ExperimentConfig& cfg, int n, const TrialSummary& sum) {
  std::ostringstream os;
  os << cfg.algo << "," << n << "," << cfg.s << "," << cfg.eps.to_string() << "," << sum.trials
     << "," << sum.rejections << "," << format_decimal(sum.reject_rate) << ","
     << format_decimal(sum.wilson_low_99) << "," << format_decimal(sum.wilson_high_99) << ","
     << format_decimal(sum.mean_queries) << "," << sum.max_queries << ",";
  if (sum.oracle_distance) os << *sum.oracle_distance;
  os << "," << cfg.master_seed;
  return os.str();
}

inline nlohmann::json summary_to_json(const ExperimentConfig& cfg, int n,
                                      const TrialSummary& sum) {
  nlohmann::json j;
  j["algo"] = cfg.algo;
  j["n"] = n;
  j["s"] = cfg.s;
  j["eps"] = cfg.eps.to_string();
  j["trials"] = sum.trials;
  j["rejections"] = sum.rejections;
  j["reject_rate"] = format_decimal(sum.reject_rate);
  j["wilson_low_99"] = format_decimal(sum.wilson_low_99);
  j["wilson_high_99"] = format_decimal(sum.wilson_high_99);
  j["mean_queries"] = format_decimal(sum.mean_queries);
  j["max_queries"] = sum.max_queries;
  if (sum.oracle_distance) j["oracle_distance"] = *sum.oracle_distance;
  j["master_seed"] = cfg.master_seed;
  return j;
}

namespace detail {
inline Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw std::invalid_argument("config: rationals must be strings like \"1/8\" or integers");
}
}  // namespace detail

inline InstanceSpec instance_from_json(const nlohmann::json& j) {
  InstanceSpec spec;
  spec.kind = j.at("kind").get<std::string>();
  if (j.contains("file")) spec.file = j["file"].get<std::string>();
  if (j.contains("n")) spec.n = j["n"].get<int>();
  if (j.contains("s")) spec.s = j["s"].get<int>();
  if (j.contains("j")) spec.j = j["j"].get<int>();
  if (j.contains("k")) spec.k = j["k"].get<int>();
  if (j.contains("a")) spec.a = detail::rational_from_json(j["a"]);
  if (j.contains("r1")) spec.r1 = detail::rational_from_json(j["r1"]);
  if (j.contains("r2")) spec.r2 = detail::rational_from_json(j["r2"]);
  if (j.contains("min_rel_dist")) spec.min_rel_dist = detail::rational_from_json(j["min_rel_dist"]);
  return spec;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.algo = j.at("algo").get<std::string>();
  cfg.instance = instance_from_json(j.at("instance"));
  if (j.contains("eps")) cfg.eps = detail::rational_from_json(j["eps"]);
  if (j.contains("s")) cfg.s = j["s"].get<int>();
  cfg.trials = j.at("trials").get<long>();
  if (j.contains("master_seed")) cfg.master_seed = j["master_seed"].get<std::uint64_t>();
  if (j.contains("output")) cfg.output = j["output"].get<std::string>();
  return cfg;
}

}  // namespace cvx
