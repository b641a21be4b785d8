#pragma once

#include <complex>
#include <cstdint>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dilatation/core/errors.hpp"
#include "dilatation/models/carnot.hpp"
#include "dilatation/models/complex_heisenberg.hpp"
#include "dilatation/models/dyadic.hpp"
#include "dilatation/models/euclidean.hpp"
#include "dilatation/models/heisenberg.hpp"
#include "dilatation/models/pullback.hpp"

namespace dilatation {

using json = nlohmann::json;

using AnyModel =
    std::variant<EuclideanModel, HeisenbergModel, CarnotModel, ComplexHeisenbergModel, DyadicModel,
                 PullbackStructure<EuclideanGroup>, PullbackStructure<HeisenbergGroup>,
                 PullbackStructure<CarnotGroup>>;

/// Rejects any key of `j` outside `allowed`.
inline void require_known_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

template <class T>
T json_field(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + ": field '" + key + "' has the wrong type");
  }
}

template <class T>
T json_field_or(const json& j, const std::string& key, T fallback, const std::string& where) {
  return j.contains(key) ? json_field<T>(j, key, where) : fallback;
}

namespace detail {

inline void flatten_numbers(const json& j, std::vector<double>& out, const std::string& where) {
  if (j.is_number()) {
    out.push_back(j.get<double>());
  } else if (j.is_array()) {
    for (const auto& e : j) flatten_numbers(e, out, where);
  } else {
    throw ConfigError(where + ": points are (nested) arrays of numbers");
  }
}

inline std::variant<PullbackStructure<EuclideanGroup>, PullbackStructure<HeisenbergGroup>,
                    PullbackStructure<CarnotGroup>>
pullback_from_json(const json& j);

}  // namespace detail

inline CarnotSpec carnot_spec_from_json(const json& j) {
  const std::string where = "model carnot";
  const int step = json_field<int>(j, "step", where);
  const auto layers = json_field<std::vector<int>>(j, "layers", where);
  std::vector<BracketTerm> brackets;
  for (const auto& b : json_field_or<json>(j, "brackets", json::array(), where)) {
    if (!b.is_array() || b.size() != 4) throw ModelError("carnot: each bracket is [i, j, k, c]");
    brackets.push_back({b[0].get<int>(), b[1].get<int>(), b[2].get<int>(), b[3].get<double>()});
  }
  return CarnotSpec(step, layers, brackets);
}

/// Builds a model from {"model": name, ...}; field names per model:
/// euclidean {n, p}, heisenberg {n}, carnot {step, layers, brackets},
/// complex_heisenberg {}, dyadic {precision}, pullback {base, chart}.
inline AnyModel model_from_json(const json& j) {
  if (!j.is_object() || !j.contains("model") || !j["model"].is_string()) {
    throw ModelError("model description needs a string field 'model'");
  }
  const auto name = j["model"].get<std::string>();
  const std::string where = "model " + name;
  try {
    if (name == "euclidean") {
      require_known_keys(j, {"model", "n", "p"}, where);
      return make_euclidean(json_field<int>(j, "n", where), json_field_or<double>(j, "p", 2.0, where));
    }
    if (name == "heisenberg") {
      require_known_keys(j, {"model", "n"}, where);
      return make_heisenberg(json_field_or<int>(j, "n", 1, where));
    }
    if (name == "carnot") {
      require_known_keys(j, {"model", "step", "layers", "brackets"}, where);
      return make_carnot(carnot_spec_from_json(j));
    }
    if (name == "complex_heisenberg") {
      require_known_keys(j, {"model"}, where);
      return make_complex_heisenberg();
    }
    if (name == "dyadic") {
      require_known_keys(j, {"model", "precision"}, where);
      return make_dyadic(json_field_or<int>(j, "precision", 64, where));
    }
    if (name == "pullback") {
      require_known_keys(j, {"model", "base", "chart"}, where);
      return std::visit([](auto&& m) -> AnyModel { return m; }, detail::pullback_from_json(j));
    }
  } catch (const ConfigError& e) {
    throw ModelError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ModelError(e.what());
  }
  throw ModelError("unknown model '" + name + "'");
}

namespace detail {

inline std::variant<PullbackStructure<EuclideanGroup>, PullbackStructure<HeisenbergGroup>,
                    PullbackStructure<CarnotGroup>>
pullback_from_json(const json& j) {
  const auto chart_name = json_field_or<std::string>(j, "chart", "cubic", "model pullback");
  Chart chart = chart_name == "cubic"      ? cubic_chart()
                : chart_name == "identity" ? identity_chart()
                                           : throw ModelError("pullback: unknown chart '" + chart_name + "'");
  if (!j.contains("base")) throw ModelError("pullback: missing field 'base'");
  auto base = model_from_json(j["base"]);
  if (auto* e = std::get_if<EuclideanModel>(&base)) return make_pullback(e->group(), chart);
  if (auto* h = std::get_if<HeisenbergModel>(&base)) return make_pullback(h->group(), chart);
  if (auto* c = std::get_if<CarnotModel>(&base)) return make_pullback(c->group(), chart);
  throw ModelError("pullback: base must be euclidean, heisenberg or carnot");
}

}  // namespace detail

/// Points: nested numeric arrays for vector models (flattened, so
/// [[1, 0], 0] and [1, 0, 0] are the same Heisenberg point); a nonnegative
/// integer or a bit string (most significant digit first, optional "..."
/// prefix) for dyadic words.
template <class M>
point_t<M> point_from_json(const M& m, const json& j, const std::string& where) {
  if constexpr (std::same_as<M, DyadicModel>) {
    const auto& g = m.group();
    if (j.is_number_unsigned() || j.is_number_integer()) {
      if (j.get<std::int64_t>() < 0) throw ConfigError(where + ": dyadic words are nonnegative");
      return g.word(j.get<std::uint64_t>());
    }
    if (j.is_string()) {
      auto s = j.get<std::string>();
      if (s.rfind("...", 0) == 0) s = s.substr(3);
      if (s.empty() || s.size() > 64) throw ConfigError(where + ": bit strings hold 1 to 64 digits");
      std::uint64_t bits = 0;
      for (char c : s) {
        if (c != '0' && c != '1') throw ConfigError(where + ": bit strings contain only 0 and 1");
        bits = (bits << 1) | static_cast<std::uint64_t>(c - '0');
      }
      return g.word(bits);
    }
    throw ConfigError(where + ": dyadic words are integers or bit strings");
  } else {
    std::vector<double> v;
    detail::flatten_numbers(j, v, where);
    const auto dim = [&] {
      if constexpr (requires { m.group(); }) {
        return m.group().identity().size();
      } else {
        return m.base().identity().size();
      }
    }();
    if (static_cast<Eigen::Index>(v.size()) != dim) {
      throw ConfigError(where + ": expected " + std::to_string(dim) + " coordinates, got " +
                        std::to_string(v.size()));
    }
    return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
}

/// Scales: a positive real for PositiveReal, a valuation 2^-p for dyadic
/// powers, a real or [re, im] pair for complex scales.
template <ScaleGroup S>
S scale_from_json(const json& j, const std::string& where) {
  try {
    if constexpr (std::same_as<S, ComplexUnit>) {
      if (j.is_array()) {
        if (j.size() != 2) throw ConfigError(where + ": complex scales are [re, im]");
        return ComplexUnit(j[0].get<double>(), j[1].get<double>());
      }
      return ComplexUnit(j.get<double>(), 0.0);
    } else if constexpr (std::same_as<S, PositiveReal>) {
      return PositiveReal(j.get<double>());
    } else {
      return S::from_nu(j.get<double>());
    }
  } catch (const json::exception&) {
    throw ConfigError(where + ": scale has the wrong type");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace dilatation
