#pragma once

#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "dilatation/affine/barycentric.hpp"
#include "dilatation/affine/counterexample.hpp"
#include "dilatation/affine/menelaos.hpp"
#include "dilatation/affine/probes.hpp"
#include "dilatation/affine/ratio.hpp"
#include "dilatation/cli/csv.hpp"
#include "dilatation/cli/model_json.hpp"
#include "dilatation/core/config.hpp"
#include "dilatation/core/errors.hpp"
#include "dilatation/core/format.hpp"
#include "dilatation/core/harness.hpp"
#include "dilatation/emergent/affine_map.hpp"
#include "dilatation/emergent/linearity.hpp"
#include "dilatation/emergent/tangent.hpp"

namespace dilatation {

inline constexpr const char* tool_version = "0.1.0";

struct ExperimentOutcome {
  CsvReport csv;
  bool verdict = false;
};

namespace cli_detail {

inline const std::set<std::string> common_keys{"model", "command", "seed", "output", "tolerances", "grid"};

inline std::set<std::string> with_common(std::set<std::string> extra) {
  extra.insert(common_keys.begin(), common_keys.end());
  return extra;
}

inline Tolerances tolerances_from_json(const json& cfg) {
  Tolerances t;
  if (!cfg.contains("tolerances")) return t;
  const auto& j = cfg["tolerances"];
  const std::string w = "tolerances";
  require_known_keys(j, {"identity", "fixed_point", "jitter", "cauchy_shrink", "noise", "limit_decrease",
                         "differentiability"},
                     w);
  t.identity = json_field_or(j, "identity", t.identity, w);
  t.fixed_point = json_field_or(j, "fixed_point", t.fixed_point, w);
  t.jitter = json_field_or(j, "jitter", t.jitter, w);
  t.cauchy_shrink = json_field_or(j, "cauchy_shrink", t.cauchy_shrink, w);
  t.noise = json_field_or(j, "noise", t.noise, w);
  t.limit_decrease = json_field_or(j, "limit_decrease", t.limit_decrease, w);
  t.differentiability = json_field_or(j, "differentiability", t.differentiability, w);
  return t;
}

inline GridSpec grid_from_json(const json& cfg, GridSpec fallback) {
  if (!cfg.contains("grid")) return fallback;
  const auto& j = cfg["grid"];
  require_known_keys(j, {"kmin", "kmax"}, "grid");
  GridSpec g{json_field_or(j, "kmin", fallback.kmin, "grid"), json_field_or(j, "kmax", fallback.kmax, "grid")};
  if (g.kmin < 0 || g.kmax <= g.kmin) throw ConfigError("grid: need 0 <= kmin < kmax");
  return g;
}

inline std::uint64_t required_seed(const json& cfg, const std::string& command) {
  if (!cfg.contains("seed")) throw ConfigError(command + ": a seed is required for randomized sweeps");
  return json_field<std::uint64_t>(cfg, "seed", "config");
}

template <class M>
point_t<M> model_identity(const M& m) {
  if constexpr (requires { m.group(); }) {
    return m.group().identity();
  } else {
    return m.base().identity();
  }
}

template <class M>
point_t<M> point_or_identity(const M& m, const json& cfg, const std::string& key) {
  return cfg.contains(key) ? point_from_json(m, cfg[key], key) : model_identity(m);
}

template <class M>
Region<point_t<M>> region_from_json(const M& m, const json& cfg) {
  Region<point_t<M>> r{model_identity(m), 1.0};
  if (!cfg.contains("region")) return r;
  const auto& j = cfg["region"];
  require_known_keys(j, {"center", "radius"}, "region");
  if (j.contains("center")) r.center = point_from_json(m, j["center"], "region.center");
  r.radius = json_field_or(j, "radius", 1.0, "region");
  if (!(r.radius > 0.0)) throw ConfigError("region: radius must be positive");
  return r;
}

template <class M>
std::string fmt_point(const M& m, const point_t<M>& p) {
  return m.format_point(p);
}

inline std::string verdict_word(bool v) { return v ? "pass" : "fail"; }

inline void report_meta(CsvReport& csv, const std::string& prefix, const ConvergenceReport& r) {
  // A lone report's verdict is the run's verdict, written with the metadata.
  if (!prefix.empty()) csv.add_meta(prefix + "verdict", verdict_word(r.verdict));
  csv.add_meta(prefix + "fitted_rate", format_double(r.fitted_rate));
  csv.add_meta(prefix + "tolerance", format_double(r.tolerance));
  if (r.degenerate) csv.add_meta(prefix + "degenerate", "true");
  for (const auto& [k, v] : r.notes) csv.add_meta(prefix + k, v);
}

template <class M>
bool run_axioms(const M& m, const json& cfg, const Tolerances& tol, CsvReport& csv) {
  require_known_keys(cfg, with_common({"which", "samples", "region"}), "axioms");
  const auto seed = required_seed(cfg, "axioms");
  std::vector<Axiom> which;
  if (!cfg.contains("which")) {
    which = {Axiom::A1, Axiom::A2, Axiom::A3, Axiom::A4, Axiom::Axiom0, Axiom::ConeProperty};
  } else if (cfg["which"].is_string()) {
    which = {axiom_from_string(cfg["which"].get<std::string>())};
  } else {
    for (const auto& s : json_field<std::vector<std::string>>(cfg, "which", "axioms")) {
      which.push_back(axiom_from_string(s));
    }
  }
  const auto samples = json_field_or<std::size_t>(cfg, "samples", 64, "axioms");
  const auto region = region_from_json(m, cfg);
  csv.header = {"axiom", "nu", "defect"};
  bool all = true;
  for (Axiom a : which) {
    const auto g = grid_from_json(cfg, default_grid(a));
    const auto rep = verify_axiom(m, a, region, dyadic_grid<scale_t<M>>(g.kmin, g.kmax), samples, seed, tol);
    for (std::size_t i = 0; i < rep.nu.size(); ++i) {
      csv.rows.push_back({to_string(a), format_double(rep.nu[i]), format_double(rep.defect[i])});
    }
    report_meta(csv, to_string(a) + ".", rep);
    all = all && rep.verdict;
  }
  return all;
}

template <class M>
bool run_tangent(const M& m, const json& cfg, const Tolerances& tol, CsvReport& csv) {
  require_known_keys(cfg, with_common({"x", "u", "v", "op"}), "tangent");
  const auto x = point_or_identity(m, cfg, "x");
  const auto u = point_or_identity(m, cfg, "u");
  const auto v = point_or_identity(m, cfg, "v");
  const auto op_name = json_field_or<std::string>(cfg, "op", "sum", "tangent");
  TangentOp op = op_name == "sum"          ? TangentOp::Sum
                 : op_name == "difference" ? TangentOp::Difference
                 : op_name == "inverse"    ? TangentOp::Inverse
                                           : throw ConfigError("tangent: op is sum, difference or inverse");
  const auto g = grid_from_json(cfg, GridSpec{});
  const auto [limit, rep] = tangent_limit(m, x, u, v, op, dyadic_grid<scale_t<M>>(g.kmin, g.kmax), tol);
  csv.header = {"nu", "defect"};
  for (std::size_t i = 0; i < rep.nu.size(); ++i) {
    csv.rows.push_back({format_double(rep.nu[i]), format_double(rep.defect[i])});
  }
  csv.add_meta("limit", fmt_point(m, limit));
  report_meta(csv, "", rep);
  return rep.verdict;
}

template <class M>
bool run_menelaos(const M& m, const json& cfg, const Tolerances& tol, CsvReport& csv) {
  require_known_keys(cfg, with_common({"x", "y", "eps", "mu", "max_iter"}), "menelaos");
  const auto x = point_or_identity(m, cfg, "x");
  const auto y = point_or_identity(m, cfg, "y");
  const auto eps = scale_from_json<scale_t<M>>(json_field<json>(cfg, "eps", "menelaos"), "eps");
  const auto mu = scale_from_json<scale_t<M>>(json_field<json>(cfg, "mu", "menelaos"), "mu");
  MenelaosOptions opt;
  opt.tol = tol.fixed_point;
  opt.max_iter = json_field_or<std::size_t>(cfg, "max_iter", opt.max_iter, "menelaos");
  const auto r = menelaos_iterate(m, x, eps, y, mu, opt);
  const auto oracle = banach_oracle(m, x, eps, y, mu, x, tol.fixed_point, opt.max_iter);
  const double agreement = detail::gap(m, r.w, oracle);
  const double target = (eps * mu).nu();
  const bool rate_ok = r.rates.empty() || std::abs(r.rate - target) <= 0.1 * target;
  csv.header = {"w", "iterations", "residual", "rate", "probe_defect", "banach_gap"};
  csv.rows.push_back({fmt_point(m, r.w), std::to_string(r.iterations), format_double(r.residual),
                      format_double(r.rate), format_double(r.probe_defect), format_double(agreement)});
  if (r.noise_limited) csv.add_meta("noise_limited", "true");
  return r.probe_defect <= tol.identity && agreement <= tol.identity && rate_ok;
}

template <class M>
bool run_ratio(const M& m, const json& cfg, const Tolerances& tol, CsvReport& csv) {
  require_known_keys(cfg, with_common({"x", "y", "eps", "mu", "N"}), "ratio");
  if constexpr (!requires { m.group(); }) {
    throw ConfigError("ratio: needs a group model");
  } else {
    const auto x = point_or_identity(m, cfg, "x");
    const auto y = point_or_identity(m, cfg, "y");
    const auto eps = scale_from_json<scale_t<M>>(json_field<json>(cfg, "eps", "ratio"), "eps");
    const auto mu = scale_from_json<scale_t<M>>(json_field<json>(cfg, "mu", "ratio"), "mu");
    const int n = json_field_or(cfg, "N", 64, "ratio");
    MenelaosOptions opt;
    opt.tol = tol.fixed_point;
    std::vector<std::pair<std::string, point_t<M>>> oracles;
    oracles.emplace_back("menelaos", menelaos_iterate(m, x, eps, y, mu, opt).w);
    oracles.emplace_back("banach", banach_oracle(m, x, eps, y, mu, x, tol.fixed_point));
    oracles.emplace_back("ratio_point", ratio_point(m.group(), x, y, eps, mu, n));
    if constexpr (std::same_as<M, HeisenbergModel>) {
      oracles.emplace_back("closed_form",
                           heisenberg_ratio_closed_form(m.group(), x, y, eps.value(), mu.value()));
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < oracles.size(); ++i) {
      for (std::size_t j = i + 1; j < oracles.size(); ++j) {
        worst = std::max(worst, detail::gap(m, oracles[i].second, oracles[j].second));
      }
    }
    csv.header = {"oracle", "value"};
    for (const auto& [name, p] : oracles) csv.rows.push_back({name, fmt_point(m, p)});
    csv.rows.push_back({"max_disagreement", format_double(worst)});
    return worst <= tol.identity;
  }
}

template <class M>
bool run_linscan(const M& m, const json& cfg, const Tolerances& tol, CsvReport& csv) {
  require_known_keys(cfg, with_common({"kind", "x", "y", "z", "samples"}), "linscan");
  const auto kind = json_field_or<std::string>(cfg, "kind", "inflin", "linscan");
  const auto x = point_or_identity(m, cfg, "x");
  const auto g = grid_from_json(cfg, GridSpec{3, 10});
  const auto grid = dyadic_grid<scale_t<M>>(g.kmin, g.kmax);
  ConvergenceReport rep;
  if (kind == "inflin" || kind == "plin1") {
    const auto y = point_or_identity(m, cfg, "y");
    const auto z = point_or_identity(m, cfg, "z");
    rep = kind == "inflin" ? inflin_scan(m, x, y, z, grid, tol) : plin1_scan(m, x, y, z, grid, tol);
  } else if (kind == "metric_tangent") {
    rep = metric_tangent_scan(m, x, grid, json_field_or<std::size_t>(cfg, "samples", 64, "linscan"),
                              required_seed(cfg, "linscan"), tol);
  } else {
    throw ConfigError("linscan: kind is inflin, plin1 or metric_tangent");
  }
  csv.header = {"nu", "value"};
  for (std::size_t i = 0; i < rep.nu.size(); ++i) {
    csv.rows.push_back({format_double(rep.nu[i]), format_double(rep.defect[i])});
  }
  report_meta(csv, "", rep);
  return rep.verdict;
}

template <class M>
bool run_barycentric(const M& m, const json& cfg, const Tolerances& tol, CsvReport& csv) {
  require_known_keys(cfg, with_common({"x", "y", "eps", "samples", "region"}), "barycentric");
  constexpr bool real_scales = std::same_as<scale_t<M>, PositiveReal>;
  constexpr bool dyadic = std::same_as<M, DyadicModel>;
  if constexpr (!real_scales && !dyadic) {
    throw ConfigError("barycentric: needs real scales or the dyadic model");
  } else {
    std::vector<std::pair<point_t<M>, point_t<M>>> pairs;
    if (cfg.contains("x") || cfg.contains("y")) {
      pairs.emplace_back(point_or_identity(m, cfg, "x"), point_or_identity(m, cfg, "y"));
    } else {
      const auto region = region_from_json(m, cfg);
      Rng rng(required_seed(cfg, "barycentric"));
      const auto n = json_field_or<std::size_t>(cfg, "samples", 16, "barycentric");
      for (std::size_t i = 0; i < n; ++i) {
        auto a = m.sample_near(region.center, region.radius, rng);
        auto b = m.sample_near(region.center, region.radius, rng);
        pairs.emplace_back(std::move(a), std::move(b));
      }
    }
    const double eps = json_field_or(cfg, "eps", 0.5, "barycentric");
    csv.header = {"index", "x", "y", "defect"};
    bool all = true;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& [a, b] = pairs[i];
      double d;
      if constexpr (dyadic) {
        d = dyadic_barycentric_defect(m, a, b, DyadicPower::from_nu(eps).exponent());
      } else {
        d = barycentric_defect(m, a, b, eps);
      }
      all = all && d <= tol.identity;
      csv.rows.push_back({std::to_string(i), fmt_point(m, a), fmt_point(m, b), format_double(d)});
    }
    return all;
  }
}

template <class M>
bool run_counterexample(const M& m, const json& cfg, const Tolerances&, CsvReport& csv) {
  require_known_keys(cfg, with_common({"eps", "mu", "Y", "search"}), "counterexample");
  if constexpr (!std::same_as<M, ComplexHeisenbergModel>) {
    throw ConfigError("counterexample: needs the complex_heisenberg model");
  } else {
    const double eps = json_field_or(cfg, "eps", 0.5, "counterexample");
    if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("counterexample: eps must lie in (0, 1)");
    const auto mu = cfg.contains("mu") ? scale_from_json<ComplexUnit>(cfg["mu"], "mu").value()
                                       : std::complex<double>(-1.0 / eps, 0.0);
    const auto Y = cfg.contains("Y") ? point_from_json(m, cfg["Y"], "Y")
                                     : ComplexHeisenbergGroup::make({1.0, 0.0}, 1.0);
    const auto probes = probe_points(m, m.group().identity(), 2.0, 0);
    const auto rep = counterexample_check(m, eps, mu, Y, probes, 1e-6,
                                          json_field_or(cfg, "search", true, "counterexample"));
    csv.header = {"eps", "mu", "defect"};
    csv.rows.push_back({format_double(eps), rep.notes.at("mu"), format_double(rep.final_defect())});
    report_meta(csv, "", rep);
    return rep.verdict;
  }
}

template <class M>
PointMap<M> map_from_json(const M& m, const json& j) {
  const std::string w = "map";
  const auto type = json_field<std::string>(j, "type", w);
  if (type == "identity") {
    require_known_keys(j, {"type"}, w);
    return [](const point_t<M>& p) { return p; };
  }
  if (type == "left_translation") {
    require_known_keys(j, {"type", "by"}, w);
    if constexpr (requires { m.left_translation(model_identity(m)); }) {
      return m.left_translation(point_from_json(m, json_field<json>(j, "by", w), "map.by"));
    } else {
      throw ConfigError("map: left_translation needs a group model");
    }
  }
  if constexpr (std::same_as<point_t<M>, Eigen::VectorXd>) {
    const auto dim = model_identity(m).size();
    if (type == "affine") {
      require_known_keys(j, {"type", "matrix", "offset"}, w);
      const auto rows = json_field<std::vector<std::vector<double>>>(j, "matrix", w);
      Eigen::MatrixXd a(dim, dim);
      if (static_cast<Eigen::Index>(rows.size()) != dim) throw ConfigError("map: matrix has the wrong size");
      for (Eigen::Index r = 0; r < dim; ++r) {
        if (static_cast<Eigen::Index>(rows[r].size()) != dim) throw ConfigError("map: matrix has the wrong size");
        for (Eigen::Index c = 0; c < dim; ++c) a(r, c) = rows[r][c];
      }
      const Eigen::VectorXd b = j.contains("offset") ? point_from_json(m, j["offset"], "map.offset")
                                                     : Eigen::VectorXd::Zero(dim);
      return [a, b](const Eigen::VectorXd& p) -> Eigen::VectorXd { return a * p + b; };
    }
    if (type == "square_first") {
      require_known_keys(j, {"type"}, w);
      return [](const Eigen::VectorXd& p) -> Eigen::VectorXd {
        Eigen::VectorXd q = p;
        q[0] = p[0] * p[0];
        return q;
      };
    }
    if (type == "cubic") {
      require_known_keys(j, {"type"}, w);
      return [](const Eigen::VectorXd& p) -> Eigen::VectorXd { return p.array().cube(); };
    }
  }
  throw ConfigError("map: unknown or unsupported type '" + type + "'");
}

template <class M>
bool run_affinemap(const M& m, const json& cfg, const Tolerances& tol, CsvReport& csv) {
  require_known_keys(cfg, with_common({"map", "samples", "scales", "region"}), "affinemap");
  const auto seed = required_seed(cfg, "affinemap");
  const auto t = map_from_json(m, json_field<json>(cfg, "map", "affinemap"));
  std::vector<scale_t<M>> scales;
  if (cfg.contains("scales")) {
    for (const auto& s : cfg["scales"]) scales.push_back(scale_from_json<scale_t<M>>(s, "scales"));
  } else {
    scales = dyadic_grid<scale_t<M>>(1, 3);
  }
  if (scales.empty()) throw ConfigError("affinemap: scales must not be empty");
  const auto rep = check_affine_map(m, t, region_from_json(m, cfg),
                                    json_field_or<std::size_t>(cfg, "samples", 32, "affinemap"), seed, scales, tol);
  csv.header = {"nu", "defect"};
  for (std::size_t i = 0; i < rep.nu.size(); ++i) {
    csv.rows.push_back({format_double(rep.nu[i]), format_double(rep.defect[i])});
  }
  report_meta(csv, "", rep);
  return rep.verdict;
}

template <class M>
bool dispatch(const M& m, const std::string& command, const json& cfg, const Tolerances& tol, CsvReport& csv) {
  if (command == "axioms") return run_axioms(m, cfg, tol, csv);
  if (command == "tangent") return run_tangent(m, cfg, tol, csv);
  if (command == "menelaos") return run_menelaos(m, cfg, tol, csv);
  if (command == "ratio") return run_ratio(m, cfg, tol, csv);
  if (command == "linscan") return run_linscan(m, cfg, tol, csv);
  if (command == "barycentric") return run_barycentric(m, cfg, tol, csv);
  if (command == "counterexample") return run_counterexample(m, cfg, tol, csv);
  if (command == "affinemap") return run_affinemap(m, cfg, tol, csv);
  throw ConfigError("unknown command '" + command + "'");
}

}  // namespace cli_detail

/// Runs one experiment. ConfigError and ModelError propagate; failures of
/// the computation itself (domain, convergence, precision) become an error
/// row with a failing verdict.
inline ExperimentOutcome run_experiment(json cfg, std::optional<std::uint64_t> seed_override = {}) {
  if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
  if (seed_override) cfg["seed"] = *seed_override;
  const auto command = json_field<std::string>(cfg, "command", "config");
  const auto model = model_from_json(json_field<json>(cfg, "model", "config"));
  const auto tol = cli_detail::tolerances_from_json(cfg);

  ExperimentOutcome out;
  std::string model_name;
  try {
    out.verdict = std::visit(
        [&](const auto& m) {
          model_name = m.name();
          return cli_detail::dispatch(m, command, cfg, tol, out.csv);
        },
        model);
  } catch (const ConfigError&) {
    throw;
  } catch (const ModelError&) {
    throw;
  } catch (const Error& e) {
    out.csv = CsvReport{};
    out.csv.header = {"error", "message"};
    const std::string kind = dynamic_cast<const DomainViolation*>(&e)      ? "DomainViolation"
                             : dynamic_cast<const NonConvergent*>(&e)      ? "NonConvergent"
                             : dynamic_cast<const MaxIterExceeded*>(&e)    ? "MaxIterExceeded"
                             : dynamic_cast<const PrecisionExhausted*>(&e) ? "PrecisionExhausted"
                                                                           : "Error";
    out.csv.rows.push_back({kind, e.what()});
    out.verdict = false;
  }
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(cfg.dump())));
  out.csv.add_meta("model", model_name);
  out.csv.add_meta("command", command);
  out.csv.add_meta("seed", cfg.contains("seed") ? cfg["seed"].dump() : "none");
  out.csv.add_meta("verdict", cli_detail::verdict_word(out.verdict));
  out.csv.add_meta("tool_version", tool_version);
  out.csv.add_meta("config_hash", hash);
  return out;
}

}  // namespace dilatation
