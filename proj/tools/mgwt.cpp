// mgwt: secrecy-capacity bounds, random-matrix verification and channel simulation
// for the multiplicative Gaussian wiretap channel.
//
// Exit codes: 0 success, 1 a verification check failed, 2 usage or parameter error.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mgwt/mgwt.hpp"
#include "output.hpp"
#include "verify_suites.hpp"

namespace {

using mgwt::cli::Json;
using mgwt::cli::Metadata;
using mgwt::cli::Table;
using mgwt::cli::format_number;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct Globals {
  std::uint64_t seed = 1;
  std::optional<std::size_t> trials;
  std::string out;
  std::string format = "csv";
};

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::istringstream is(item);
    is.imbue(std::locale::classic());
    T v{};
    if (!(is >> v) || !is.eof()) throw CLI::ValidationError(what, "cannot parse list entry '" + item + "'");
    out.push_back(v);
  }
  return out;
}

// Either an explicit comma list or `points` uniform values in [0, hi].
std::vector<double> rho_e_grid(const std::optional<std::string>& list, std::size_t points, double hi) {
  if (list) return parse_list<double>(*list, "--rho-e");
  std::vector<double> grid;
  for (std::size_t i = 0; i < points; ++i) {
    grid.push_back(points == 1 ? 0.0 : hi * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  return grid;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_number(v[i]);
  return s;
}

void write_table(const Globals& g, const Metadata& meta, const Table& t) {
  if (g.format == "json") {
    mgwt::cli::emit(g.out, mgwt::cli::table_json(meta, t).dump(2) + "\n");
  } else {
    std::ostringstream os;
    mgwt::cli::write_csv(os, meta, t);
    mgwt::cli::emit(g.out, os.str());
  }
}

int cmd_bounds_asymptotic(const Globals& g, double rho_b, const std::vector<double>& grid,
                          const mgwt::QuadratureSpec& quad) {
  Table t{{"rho_e", "lb3_bits", "ub2_bits", "ub3_bits"}, {}};
  for (double re : grid) {
    const auto r = mgwt::AsymptoticRatios::make(rho_b, re);
    const double lb = re < rho_b ? mgwt::lb3(r).bits_per_dim : mgwt::lb3_left_limit(rho_b).bits_per_dim;
    t.rows.push_back({format_number(re), format_number(lb), format_number(mgwt::ub2(r).bits_per_dim),
                      format_number(mgwt::ub3(r, quad).bits_per_dim)});
  }
  auto meta = mgwt::cli::base_metadata("bounds-asymptotic", g.seed);
  meta.insert(meta.end(), {{"rho_b", format_number(rho_b)},
                           {"rho_e", join(grid)},
                           {"quad_half_width_sigmas", format_number(quad.half_width_sigmas)},
                           {"quad_abs_tolerance", format_number(quad.abs_tolerance)},
                           {"lb3_at_rho_e_eq_rho_b", "left limit"},
                           {"ub3_at_rho_e_0", "ub2 (degenerate)"}});
  write_table(g, meta, t);
  return kExitOk;
}

int cmd_bounds_lb2(const Globals& g, double rho_b, const std::vector<std::size_t>& p_list, std::size_t points) {
  Table t{{"p", "m_e_over_p", "lb2_bits"}, {}};
  std::vector<double> xs;
  for (std::size_t j = 0; j < points; ++j) xs.push_back(rho_b * static_cast<double>(j) / static_cast<double>(points));
  for (std::size_t p : p_list) {
    const std::size_t m_b = mgwt::detail::round_ratio(rho_b, p);
    std::optional<std::size_t> last;
    for (double x : xs) {
      const std::size_t m_e = mgwt::detail::round_ratio(x, p);
      if (m_e >= m_b || (last && *last == m_e)) continue;
      last = m_e;
      const auto v = mgwt::lb2_expected(mgwt::ChannelDims::make(p, m_b, m_e));
      t.rows.push_back({std::to_string(p), format_number(static_cast<double>(m_e) / static_cast<double>(p)),
                        format_number(v.bits_per_dim)});
    }
  }
  for (double x : xs) {
    t.rows.push_back({"inf", format_number(x), format_number(mgwt::lb3(mgwt::AsymptoticRatios::make(rho_b, x)).bits_per_dim)});
  }
  std::string plist;
  for (std::size_t i = 0; i < p_list.size(); ++i) plist += (i ? ";" : "") + std::to_string(p_list[i]);
  auto meta = mgwt::cli::base_metadata("bounds-lb2", g.seed);
  meta.insert(meta.end(), {{"rho_b", format_number(rho_b)},
                           {"p_list", plist},
                           {"me_grid_points", std::to_string(points)},
                           {"m_b", "round(rho_b*p)"},
                           {"p_inf_rows", "lb3(rho_b, m_e/p)"}});
  write_table(g, meta, t);
  return kExitOk;
}

int cmd_identity(const Globals& g, double rho_b, const std::vector<double>& grid) {
  Table t{{"rho_e", "cs_bits"}, {}};
  for (double re : grid) {
    mgwt::detail::require(re >= 0.0, "identity: rho_e must be nonnegative");
    t.rows.push_back({format_number(re), format_number(std::max(rho_b - re, 0.0))});
  }
  auto meta = mgwt::cli::base_metadata("identity", g.seed);
  meta.insert(meta.end(), {{"rho_b", format_number(rho_b)}, {"rho_e", join(grid)}});
  write_table(g, meta, t);
  return kExitOk;
}

int cmd_verify(const Globals& g, const std::string& suite, mgwt::cli::SuiteParams sp) {
  const auto& table = mgwt::cli::suite_table();
  const auto it = table.find(suite);
  if (it == table.end()) {
    std::cerr << "mgwt verify: unknown suite '" << suite << "'\n";
    return kExitUsage;
  }
  sp.seed = g.seed;
  sp.trials = g.trials;
  Json report;
  report["tool"] = "mgwt";
  report["version"] = mgwt::kVersion;
  report["command"] = "verify";
  report["suite"] = suite;
  report["seed"] = g.seed;
  report["workers"] = mgwt::default_worker_count();
  Json params = Json::object();
  if (sp.trials) params["trials"] = *sp.trials;
  if (sp.samples) params["samples"] = *sp.samples;
  if (sp.tol) params["tol"] = *sp.tol;
  if (!sp.p_list.empty()) params["p_list"] = sp.p_list;
  report["params"] = params;
  report["checks"] = it->second(sp);
  bool pass = true;
  for (const auto& c : report["checks"]) pass = pass && c["pass"].get<bool>();
  report["pass"] = pass;
  mgwt::cli::emit(g.out, report.dump(2) + "\n");
  return pass ? kExitOk : kExitCheckFailed;
}

int cmd_simulate(const Globals& g, std::size_t p, std::size_t m_b, std::size_t m_e, double tol) {
  const auto dims = mgwt::ChannelDims::make(p, m_b, m_e);
  const std::size_t trials = g.trials.value_or(1000);
  const mgwt::SeededStream root{g.seed, 0};
  const auto inst = mgwt::ChannelInstance::gaussian(dims, root.substream(0));
  const auto rep = mgwt::decoding_error_rate(inst, trials, root.substream(1), tol);

  Json report;
  report["tool"] = "mgwt";
  report["version"] = mgwt::kVersion;
  report["command"] = "simulate";
  report["seed"] = g.seed;
  report["params"] = {{"p", p}, {"m_b", m_b}, {"m_e", m_e}, {"trials", trials}, {"tol", tol}};
  report["decoding"] = {{"error_rate", rep.errors.mean},
                        {"std_error", rep.errors.std_error},
                        {"wrong", rep.wrong},
                        {"no_candidate", rep.no_candidate},
                        {"ambiguous", rep.ambiguous}};

  if (m_e >= 1) {
    // Eve's matched filter on uniformly drawn codewords.
    const double kappa = static_cast<double>(m_b - 1) / static_cast<double>(p);
    const double rho_e = static_cast<double>(m_e) / static_cast<double>(p);
    const std::uint64_t messages = mgwt::message_count(dims);
    struct Devs {
      double sigma = 0.0;
      double colnorm = 0.0;
    };
    const mgwt::SeededStream hs = root.substream(2);
    const auto devs = mgwt::parallel_map(trials, [&](std::size_t t) {
      mgwt::Generator gen(hs.substream(t).substream(0));
      const auto x = mgwt::encode_message(gen.below(messages), dims);
      const auto tx = mgwt::transmit(inst, x, hs.substream(t).substream(1));
      const auto est = mgwt::hxz_shadow(inst.a_e(), x, tx.z, kappa, rho_e);
      return Devs{est.max_sigma_dev, est.max_colnorm_dev};
    });
    std::vector<double> sig, col;
    for (const auto& d : devs) {
      sig.push_back(d.sigma);
      col.push_back(d.colnorm);
    }
    report["eavesdropper"] = {{"kappa", kappa},
                              {"rho_e", rho_e},
                              {"max_sigma_dev", mgwt::cli::suites::report_json(mgwt::TrialReport::from_samples(sig, g.seed))},
                              {"max_colnorm_dev", mgwt::cli::suites::report_json(mgwt::TrialReport::from_samples(col, g.seed))}};
  }
  report["bounds"] = {{"lb2_expected_bits", mgwt::lb2_expected(dims).bits_per_dim},
                      {"identity_bits", mgwt::identity_secrecy(dims).bits_per_dim}};
  mgwt::cli::emit(g.out, report.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secrecy-capacity bounds and simulation for the multiplicative Gaussian wiretap channel"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mgwt::kVersion));

  Globals g;
  app.add_option("--seed", g.seed, "64-bit seed for every random stream");
  app.add_option("--trials", g.trials, "Monte Carlo trial count (subcommand default when omitted)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output path ('-' or empty for stdout)");
  app.add_option("--format", g.format, "csv or json (bounds and identity commands)")
      ->check(CLI::IsMember({"csv", "json"}));

  double rho_b = 0.2;
  std::optional<std::string> rho_e_list;
  std::size_t rho_e_points = 21;
  mgwt::QuadratureSpec quad;

  auto* asym = app.add_subcommand("bounds-asymptotic", "LB3, UB2 and UB3 against rho_e");
  asym->add_option("--rho-b", rho_b, "Bob's asymptotic ratio m_b/p");
  asym->add_option("--rho-e", rho_e_list, "comma-separated rho_e values (empty string = no rows)");
  asym->add_option("--points", rho_e_points, "uniform grid size over [0, rho_b] when --rho-e is absent");
  asym->add_option("--quad-tol", quad.abs_tolerance, "quadrature absolute tolerance (nats)");
  asym->add_option("--quad-half-width", quad.half_width_sigmas, "quadrature truncation in sigmas");

  std::string p_list_text = "50,100,250,1000";
  std::size_t me_points = 20;
  auto* lb2 = app.add_subcommand("bounds-lb2", "expected-secrecy lower bound against m_e/p for several p");
  lb2->add_option("--rho-b", rho_b, "m_b = round(rho_b * p)");
  lb2->add_option("--p-list", p_list_text, "comma-separated p values");
  lb2->add_option("--me-points", me_points, "uniform m_e/p grid size over [0, rho_b)");

  auto* ident = app.add_subcommand("identity", "secrecy capacity for identity-row channel matrices");
  ident->add_option("--rho-b", rho_b, "Bob's ratio");
  ident->add_option("--rho-e", rho_e_list, "comma-separated rho_e values (empty string = no rows)");
  ident->add_option("--points", rho_e_points, "uniform grid size over [0, rho_b] when --rho-e is absent");

  std::string suite;
  mgwt::cli::SuiteParams sp;
  std::string verify_p_list;
  auto* verify = app.add_subcommand("verify", "Monte Carlo / exact-moment verification suites");
  verify->add_option("suite", suite, "chisq | wishart | negmoment | colnorm | detmin | hxz | decoder")->required();
  verify->add_option("--samples", sp.samples, "detmin: supports sampled per instance");
  verify->add_option("--tol", sp.tol, "decoder: relative residual threshold");
  verify->add_option("--p-list", verify_p_list, "colnorm/detmin/hxz: comma-separated p values");

  std::size_t sim_p = 12, sim_mb = 4, sim_me = 2;
  double sim_tol = mgwt::kDefaultDecodeTolerance;
  auto* sim = app.add_subcommand("simulate", "end-to-end encode/transmit/decode on a Gaussian instance");
  sim->add_option("--p", sim_p, "number of inputs p");
  sim->add_option("--m-b", sim_mb, "Bob's measurements m_b");
  sim->add_option("--m-e", sim_me, "Eve's measurements m_e");
  sim->add_option("--tol", sim_tol, "decoder relative residual threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*asym) return cmd_bounds_asymptotic(g, rho_b, rho_e_grid(rho_e_list, rho_e_points, rho_b), quad);
    if (*lb2) return cmd_bounds_lb2(g, rho_b, parse_list<std::size_t>(p_list_text, "--p-list"), me_points);
    if (*ident) return cmd_identity(g, rho_b, rho_e_grid(rho_e_list, rho_e_points, rho_b));
    if (*verify) {
      sp.p_list = parse_list<std::size_t>(verify_p_list, "--p-list");
      return cmd_verify(g, suite, sp);
    }
    if (*sim) return cmd_simulate(g, sim_p, sim_mb, sim_me, sim_tol);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "mgwt: " << e.what() << '\n';
    return kExitUsage;
  } catch (const mgwt::cli::OutputError& e) {
    std::cerr << "mgwt: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const mgwt::Error& e) {
    std::cerr << "mgwt: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
