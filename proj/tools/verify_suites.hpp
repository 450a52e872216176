#pragma once

// Verification suites behind `mgwt verify <suite>`. Each suite returns a JSON
// report with one entry per check; the report passes iff every check passes.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mgwt/mgwt.hpp"

namespace mgwt::cli {

using Json = nlohmann::ordered_json;

struct SuiteParams {
  std::uint64_t seed = 1;
  std::optional<std::size_t> trials;   ///< overrides each suite's default
  std::optional<std::size_t> samples;  ///< detmin: supports sampled per instance
  std::optional<double> tol;           ///< decoder: relative residual threshold
  std::vector<std::size_t> p_list;     ///< colnorm / detmin / hxz sizes; empty = defaults
};

namespace suites {

inline std::string cli_eps(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline Json report_json(const TrialReport& r) {
  return {{"trials", r.trials}, {"mean", r.mean}, {"std_error", r.std_error},
          {"min", r.min},       {"max", r.max},   {"seed", r.seed}};
}

inline Json check(const std::string& name, bool pass, Json detail = Json::object()) {
  Json j{{"name", name}, {"pass", pass}};
  j["detail"] = std::move(detail);
  return j;
}

inline bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

inline std::vector<std::size_t> sizes_or(const SuiteParams& sp, std::vector<std::size_t> fallback) {
  return sp.p_list.empty() ? fallback : sp.p_list;
}

inline Json chisq(const SuiteParams& sp) {
  const std::size_t trials = sp.trials.value_or(10'000);
  Json checks = Json::array();
  const SeededStream root{sp.seed, 0};
  std::uint64_t cell = 0;
  for (std::size_t d : {50, 100, 400}) {
    for (double eps : {0.05, 0.1, 0.2, 0.4}) {
      const auto r = chisq_tail_check(d, eps, trials, root.substream(cell++));
      const bool pass = r.empirical_tail <= r.lemma_bound + 3.0 * r.binomial_se;
      checks.push_back(check("tail d=" + std::to_string(d) + " eps=" + cli_eps(eps), pass,
                             {{"d", d},
                              {"eps", eps},
                              {"empirical_tail", r.empirical_tail},
                              {"lemma_bound", r.lemma_bound},
                              {"binomial_se", r.binomial_se},
                              {"trials", r.trials}}));
    }
  }
  return checks;
}

inline Json wishart(const SuiteParams& sp) {
  const std::size_t trials = sp.trials.value_or(200);
  Json checks = Json::array();
  const SeededStream root{sp.seed, 1};
  std::uint64_t cell = 0;
  for (auto [m, n] : std::vector<std::pair<std::size_t, std::size_t>>{{5, 10}, {20, 40}, {50, 100}, {100, 100}, {100, 200}}) {
    const WishartSpec spec{m, n, 0.0};
    const auto rep = wishart_logdet_stats(spec, trials, root.substream(cell++));
    const double exact = wishart_logdet_mean_exact(spec);
    const double limit = mu(static_cast<double>(m) / static_cast<double>(n));
    const std::string tag = "m=" + std::to_string(m) + " n=" + std::to_string(n);
    checks.push_back(check("mc mean vs digamma " + tag, std::abs(rep.mean - exact) <= 3.0 * rep.std_error,
                           {{"exact", exact}, {"report", report_json(rep)}}));
    if (n >= 100 && m < n) {
      checks.push_back(check("digamma vs mu " + tag, std::abs(exact - limit) <= 0.02,
                             {{"exact", exact}, {"mu", limit}}));
    }
  }
  // At m = n the finite-n bias decays only like log(n) / n (about 0.035 bits at
  // n = 100), so the square case is checked as a shrinking gap instead.
  Json gaps = Json::array();
  bool shrinking = true;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t n : {100u, 200u, 400u, 800u}) {
    const double gap = std::abs(wishart_logdet_mean_exact({n, n, 0.0}) - mu(1.0));
    shrinking = shrinking && gap < prev;
    prev = gap;
    gaps.push_back({{"n", n}, {"gap", gap}});
  }
  checks.push_back(check("square case: |digamma - mu(1)| decreasing in n", shrinking, {{"gaps", gaps}}));
  return checks;
}

inline Json negmoment(const SuiteParams& sp) {
  const std::size_t trials = sp.trials.value_or(100'000);
  Json checks = Json::array();
  const SeededStream root{sp.seed, 2};
  std::uint64_t cell = 0;
  for (const WishartSpec spec : {WishartSpec{2, 10, 1.0}, WishartSpec{3, 12, 0.5}, WishartSpec{1, 8, 1.5}}) {
    const double exact = std::exp(wishart_neg_moment_exact(spec));
    const auto est = wishart_neg_moment_mc(spec, trials, root.substream(cell++));
    const std::string tag = "m=" + std::to_string(spec.m) + " n=" + std::to_string(spec.n) +
                            " r=" + cli_eps(spec.r);
    checks.push_back(check("exp(-M(r)) vs mc " + tag,
                           std::abs(est.stats.mean - exact) <= 3.0 * est.stats.std_error,
                           {{"exact", exact}, {"heavy_tailed", est.heavy_tailed}, {"report", report_json(est.stats)}}));
  }
  const double tiny = wishart_neg_moment_exact({2, 10, 1e-9});
  checks.push_back(check("M(r) -> 0 as r -> 0", std::abs(tiny) < 1e-8, {{"minus_M", tiny}}));
  return checks;
}

inline Json colnorm(const SuiteParams& sp) {
  const auto sizes = sizes_or(sp, {250, 500, 1000, 2000});
  const auto trend = colnorm_max_trend(sizes, 0.2, sp.trials.value_or(50), {sp.seed, 3});
  std::vector<double> excess;
  Json rows = Json::array();
  for (const auto& t : trend) {
    excess.push_back(t.excess.mean);
    rows.push_back({{"p", t.p}, {"m_b", t.m_b}, {"max_norm", report_json(t.max_norm)}, {"excess", report_json(t.excess)}});
  }
  return Json::array({check("mean (max colnorm - 1)+ strictly decreasing in p", strictly_decreasing(excess),
                            {{"rho_b", 0.2}, {"trend", rows}})});
}

inline Json detmin(const SuiteParams& sp) {
  const auto sizes = sizes_or(sp, {200, 400, 800});
  const std::size_t samples = sp.samples.value_or(1000);
  const double rho_b = 0.2;
  const double kappa = 0.5;
  const double target = kappa * mu(rho_b / kappa);
  std::vector<double> dev;
  Json rows = Json::array();
  const SeededStream root{sp.seed, 4};
  for (std::size_t p : sizes) {
    const std::size_t m = detail::round_ratio(rho_b, p);
    const std::size_t k = detail::round_ratio(kappa, p);
    const SeededStream ps = root.substream(p);
    const Matrix a = sample_gaussian_matrix(m, p, ps.substream(0));
    const double v = min_support_logdet(a, k, Sample{samples, ps.substream(1)});
    dev.push_back(std::abs(v - target));
    rows.push_back({{"p", p}, {"m", m}, {"k", k}, {"sampled_min", v}, {"deviation", dev.back()}});
  }
  Json checks = Json::array();
  checks.push_back(check("|sampled min - kappa mu(rho_b/kappa)| strictly decreasing in p", strictly_decreasing(dev),
                         {{"target", target}, {"samples", samples}, {"optimistic", true}, {"trend", rows}}));
  return checks;
}

inline Json hxz(const SuiteParams& sp) {
  const auto sizes = sizes_or(sp, {250, 500, 1000, 2000});
  const auto trend = hxz_trend(sizes, 0.1, 0.15, sp.trials.value_or(50), {sp.seed, 5});
  std::vector<double> sig, col;
  Json rows = Json::array();
  for (const auto& t : trend) {
    sig.push_back(t.sigma_dev.mean);
    col.push_back(t.colnorm_dev.mean);
    rows.push_back({{"p", t.p},
                    {"m_e", t.m_e},
                    {"k", t.k},
                    {"max_sigma_dev", report_json(t.sigma_dev)},
                    {"max_colnorm_dev", report_json(t.colnorm_dev)}});
  }
  Json checks = Json::array();
  checks.push_back(check("mean max_sigma_dev strictly decreasing in p", strictly_decreasing(sig),
                         {{"rho_e", 0.1}, {"kappa", 0.15}, {"trend", rows}}));
  checks.push_back(check("mean max_colnorm_dev strictly decreasing in p", strictly_decreasing(col)));
  return checks;
}

inline Json decoder(const SuiteParams& sp) {
  const std::size_t trials = sp.trials.value_or(10'000);
  const double tol = sp.tol.value_or(kDefaultDecodeTolerance);
  const auto dims = ChannelDims::make(12, 4, 2);
  Json checks = Json::array();

  const auto inst = ChannelInstance::gaussian(dims, {sp.seed, 6});
  const auto rep = decoding_error_rate(inst, trials, {sp.seed, 7}, tol);
  checks.push_back(check("gaussian A_b decodes without error", rep.errors.mean == 0.0,
                         {{"p", dims.p},
                          {"m_b", dims.m_b},
                          {"tol", tol},
                          {"error_rate", rep.errors.mean},
                          {"wrong", rep.wrong},
                          {"no_candidate", rep.no_candidate},
                          {"ambiguous", rep.ambiguous}}));

  // Expected-failure scenario: identity rows are not FLI, so ambiguity must show up.
  const auto id = ChannelInstance::identity_rows(dims);
  const auto idrep = decoding_error_rate(id, std::min<std::size_t>(trials, 2000), {sp.seed, 8}, tol);
  checks.push_back(check("identity-rows A_b produces ambiguous decodes (expected failure)", idrep.ambiguous > 0,
                         {{"error_rate", idrep.errors.mean},
                          {"wrong", idrep.wrong},
                          {"no_candidate", idrep.no_candidate},
                          {"ambiguous", idrep.ambiguous}}));
  return checks;
}

}  // namespace suites

using SuiteFn = std::function<Json(const SuiteParams&)>;

inline const std::map<std::string, SuiteFn>& suite_table() {
  static const std::map<std::string, SuiteFn> table = {
      {"chisq", suites::chisq},   {"wishart", suites::wishart}, {"negmoment", suites::negmoment},
      {"colnorm", suites::colnorm}, {"detmin", suites::detmin}, {"hxz", suites::hxz},
      {"decoder", suites::decoder},
  };
  return table;
}

}  // namespace mgwt::cli
