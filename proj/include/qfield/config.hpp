#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "qfield/maxwell3d.hpp"
#include "qfield/medium.hpp"
#include "qfield/modes.hpp"

namespace qfield {

using Json = nlohmann::json;

/// A mode named in a config: ModeId on a line grid, LatticeMode on a k lattice.
using ModeRef = std::variant<ModeId, LatticeMode>;

struct Occupation {
  ModeRef mode;
  std::uint32_t count = 0;
  bool operator==(const Occupation&) const = default;
};

struct Amplitude {
  ModeRef mode;
  Complex alpha;
  bool operator==(const Amplitude&) const = default;
};

struct FockTerm {
  Complex weight;
  std::vector<Occupation> occupations;
  bool operator==(const FockTerm&) const = default;
};

enum class StateKind { Vacuum, Fock, Coherent, Superposition };

struct StateSpec {
  StateKind kind = StateKind::Vacuum;
  std::vector<Occupation> occupations;  ///< Fock
  std::vector<Amplitude> amplitudes;    ///< Coherent
  std::vector<FockTerm> terms;          ///< Superposition, normalized on construction
  bool operator==(const StateSpec&) const = default;
};

struct Range {
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 1;

  std::vector<double> values() const {
    if (count == 1) return {start};
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
      out[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return out;
  }
  bool operator==(const Range&) const = default;
};

struct Sampling {
  Range x{0.0, 1.0, 11};
  std::vector<Vec3> r{{0.0, 0.0, 0.0}};
  Range t{0.0, 0.0, 1};
  bool with_squares = false;
  bool operator==(const Sampling&) const = default;
};

struct CheckSpec {
  std::string name;
  std::optional<double> tolerance;
  std::optional<double> min_order;
  std::optional<unsigned> n_max;
  std::optional<StateSpec> state;
  std::map<std::string, double> options;
  bool operator==(const CheckSpec&) const = default;
};

struct Outputs {
  std::optional<std::string> csv;
  std::optional<std::string> report;
  bool operator==(const Outputs&) const = default;
};

struct RunConfig {
  Medium medium = Medium::natural();
  std::optional<FrequencyGrid> line;
  std::optional<KGrid> lattice;
  unsigned n_max = 4;
  StateSpec state;
  Sampling sampling;
  std::vector<CheckSpec> checks;
  Outputs outputs;
  std::uint64_t seed = 0;

  bool three_d() const { return lattice.has_value(); }
  bool operator==(const RunConfig&) const = default;
};

enum class CheckDomain { Any, Line, Lattice };

/// Static description of a check: where it applies, its option keys with defaults, and the
/// default tolerance / minimum convergence order.
struct CheckInfo {
  const char* name;
  CheckDomain domain;
  std::vector<std::pair<std::string, double>> options;
  std::vector<std::string> integer_options;
  double tolerance;
  std::optional<double> min_order;
};

inline const std::vector<CheckInfo>& check_catalog() {
  static const std::vector<CheckInfo> catalog = {
      {"coherent_state", CheckDomain::Any, {}, {}, 1e-8, std::nullopt},
      {"curl_3d", CheckDomain::Lattice, {{"base", 1e-2}, {"courant", 0.5}}, {}, 1e-4, 1.9},
      {"direction", CheckDomain::Line, {{"delta", 2.0}}, {}, 1e-10, std::nullopt},
      {"divergence_3d", CheckDomain::Lattice, {{"base", 1e-2}}, {}, 1e-4, 1.9},
      {"energy_3d",
       CheckDomain::Lattice,
       {{"points_per_axis", 0.0}, {"zpe_tolerance", 1e-10}},
       {"points_per_axis"},
       1e-8,
       std::nullopt},
      {"energy_equivalence",
       CheckDomain::Line,
       {{"points_per_wavelength", 64.0}, {"k_scale", 1.0}, {"zpe_tolerance", 1e-10}},
       {"points_per_wavelength"},
       1e-8,
       std::nullopt},
      {"heisenberg", CheckDomain::Line, {{"tau", 1e-2}, {"t", 0.25}}, {}, 1e-4, 1.9},
      {"ladder_algebra", CheckDomain::Any, {{"probes", 100.0}, {"modes", 2.0}}, {"probes", "modes"}, 1e-12,
       std::nullopt},
      {"maxwell_1d", CheckDomain::Line, {{"base", 1e-2}, {"courant", 0.9}}, {}, 1e-5, 1.9},
      {"mode_ode",
       CheckDomain::Line,
       {{"samples", 1000.0}, {"span", 20.0}, {"flip_branch", 0.0}},
       {"samples", "flip_branch"},
       1e-14,
       1.9},
      {"polarization_3d", CheckDomain::Any, {{"samples", 500.0}}, {"samples"}, 1e-13, std::nullopt},
      {"spectrum", CheckDomain::Any, {{"max_n", 4.0}}, {"max_n"}, 1e-13, std::nullopt},
  };
  return catalog;
}

inline const CheckInfo* find_check(const std::string& name) {
  for (const auto& info : check_catalog()) {
    if (name == info.name) return &info;
  }
  return nullptr;
}

/// Option value with the catalog default filled in.
inline double check_option(const CheckSpec& spec, const std::string& key) {
  if (auto it = spec.options.find(key); it != spec.options.end()) return it->second;
  const CheckInfo* info = find_check(spec.name);
  if (info) {
    for (const auto& [k, v] : info->options) {
      if (k == key) return v;
    }
  }
  throw std::logic_error("check " + spec.name + " has no option " + key);
}

/// Thrown by parse_config; what() lists every problem, one "path: message" per line.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<std::string> problems)
      : std::invalid_argument(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) out += (out.empty() ? "" : "\n") + s;
    return out;
  }
  std::vector<std::string> problems_;
};

namespace detail {

class ConfigReader {
 public:
  void error(const std::string& path, const std::string& message) { problems_.push_back(path + ": " + message); }
  const std::vector<std::string>& problems() const { return problems_; }

  bool object(const Json& j, const std::string& path, const std::set<std::string>& allowed) {
    if (!j.is_object()) {
      error(path, "expected an object");
      return false;
    }
    for (const auto& [key, _] : j.items()) {
      if (!allowed.count(key)) error(path + "/" + key, "unknown key");
    }
    return true;
  }

  std::optional<double> number(const Json& j, const std::string& key, const std::string& path, bool required) {
    if (!j.contains(key)) {
      if (required) error(path + "/" + key, "missing required number");
      return std::nullopt;
    }
    const Json& v = j[key];
    if (!v.is_number()) {
      error(path + "/" + key, "expected a number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  std::optional<double> positive(const Json& j, const std::string& key, const std::string& path, bool required) {
    auto v = number(j, key, path, required);
    if (v && !(*v > 0.0 && std::isfinite(*v))) {
      error(path + "/" + key, "must be a positive finite number");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::uint64_t> integer(const Json& j, const std::string& key, const std::string& path,
                                       bool required) {
    if (!j.contains(key)) {
      if (required) error(path + "/" + key, "missing required integer");
      return std::nullopt;
    }
    const Json& v = j[key];
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      error(path + "/" + key, "expected a non-negative integer");
      return std::nullopt;
    }
    return v.get<std::uint64_t>();
  }

  std::optional<std::string> string(const Json& j, const std::string& key, const std::string& path,
                                     bool required) {
    if (!j.contains(key)) {
      if (required) error(path + "/" + key, "missing required string");
      return std::nullopt;
    }
    if (!j[key].is_string()) {
      error(path + "/" + key, "expected a string");
      return std::nullopt;
    }
    return j[key].get<std::string>();
  }

  std::optional<bool> boolean(const Json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) return std::nullopt;
    if (!j[key].is_boolean()) {
      error(path + "/" + key, "expected true or false");
      return std::nullopt;
    }
    return j[key].get<bool>();
  }

  std::optional<Range> range(const Json& j, const std::string& path) {
    if (!object(j, path, {"start", "stop", "count"})) return std::nullopt;
    auto start = number(j, "start", path, true);
    auto stop = number(j, "stop", path, true);
    auto count = integer(j, "count", path, true);
    if (!start || !stop || !count) return std::nullopt;
    if (*count == 0) {
      error(path + "/count", "must be at least 1");
      return std::nullopt;
    }
    if (*count > 1 && !(*stop > *start)) {
      error(path + "/stop", "must exceed start when count > 1");
      return std::nullopt;
    }
    return Range{*start, *stop, static_cast<std::size_t>(*count)};
  }

  std::optional<Vec3> vec3(const Json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) {
      error(path, "expected an array of three numbers");
      return std::nullopt;
    }
    Vec3 v{};
    for (int c = 0; c < 3; ++c) {
      if (!j[c].is_number()) {
        error(path + "/" + std::to_string(c), "expected a number");
        return std::nullopt;
      }
      v[c] = j[c].get<double>();
    }
    return v;
  }

  // Grid context for mode validation.
  std::optional<FrequencyGrid> line;
  std::optional<KGrid> lattice;

  std::optional<ModeRef> mode(const Json& j, const std::string& path) {
    if (line) {
      if (!object(j, path, {"direction", "polarization", "index"})) return std::nullopt;
      auto dir = string(j, "direction", path, true);
      auto pol = integer(j, "polarization", path, true);
      auto index = integer(j, "index", path, true);
      if (!dir || !pol || !index) return std::nullopt;
      ModeId id;
      if (*dir == "L") {
        id.direction = Direction::L;
      } else if (*dir == "R") {
        id.direction = Direction::R;
      } else {
        error(path + "/direction", "expected \"L\" or \"R\"");
        return std::nullopt;
      }
      if (*pol != 1 && *pol != 2) {
        error(path + "/polarization", "expected 1 or 2");
        return std::nullopt;
      }
      id.polarization = *pol == 1 ? Polarization::One : Polarization::Two;
      if (*index >= line->count()) {
        error(path + "/index", "frequency index " + std::to_string(*index) + " is outside the grid of " +
                                   std::to_string(line->count()) + " frequencies");
        return std::nullopt;
      }
      id.freq_index = static_cast<std::size_t>(*index);
      return ModeRef{id};
    }
    if (lattice) {
      if (!object(j, path, {"k", "polarization"})) return std::nullopt;
      auto pol = integer(j, "polarization", path, true);
      if (!j.contains("k") || !j["k"].is_array() || j["k"].size() != 3) {
        error(path + "/k", "expected three integers");
        return std::nullopt;
      }
      LatticePoint k{};
      for (int c = 0; c < 3; ++c) {
        if (!j["k"][c].is_number_integer()) {
          error(path + "/k/" + std::to_string(c), "expected an integer");
          return std::nullopt;
        }
        k[c] = j["k"][c].get<int>();
      }
      if (!pol) return std::nullopt;
      if (*pol != 1 && *pol != 2) {
        error(path + "/polarization", "expected 1 or 2");
        return std::nullopt;
      }
      if (!lattice->contains(k)) {
        error(path + "/k", "lattice point is outside the k grid or is the origin");
        return std::nullopt;
      }
      return ModeRef{LatticeMode{k, *pol == 1 ? Polarization::One : Polarization::Two}};
    }
    error(path, "no grid declared to resolve modes against");
    return std::nullopt;
  }

  std::vector<Occupation> occupations(const Json& j, const std::string& path) {
    std::vector<Occupation> out;
    if (!j.is_array()) {
      error(path, "expected an array");
      return out;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string p = path + "/" + std::to_string(i);
      if (!object(j[i], p, {"mode", "count"})) continue;
      auto count = integer(j[i], "count", p, true);
      if (!j[i].contains("mode")) {
        error(p + "/mode", "missing mode");
        continue;
      }
      auto m = mode(j[i]["mode"], p + "/mode");
      if (m && count) out.push_back({*m, static_cast<std::uint32_t>(*count)});
    }
    return out;
  }

  std::optional<StateSpec> state(const Json& j, const std::string& path) {
    if (!j.is_object()) {
      error(path, "expected an object");
      return std::nullopt;
    }
    auto kind = string(j, "kind", path, true);
    if (!kind) return std::nullopt;
    StateSpec spec;
    if (*kind == "vacuum") {
      object(j, path, {"kind"});
      spec.kind = StateKind::Vacuum;
    } else if (*kind == "fock") {
      object(j, path, {"kind", "occupations"});
      spec.kind = StateKind::Fock;
      if (!j.contains("occupations")) error(path + "/occupations", "missing occupations");
      else spec.occupations = occupations(j["occupations"], path + "/occupations");
    } else if (*kind == "coherent") {
      object(j, path, {"kind", "amplitudes"});
      spec.kind = StateKind::Coherent;
      if (!j.contains("amplitudes") || !j["amplitudes"].is_array()) {
        error(path + "/amplitudes", "expected an array");
      } else {
        const Json& a = j["amplitudes"];
        for (std::size_t i = 0; i < a.size(); ++i) {
          const std::string p = path + "/amplitudes/" + std::to_string(i);
          if (!object(a[i], p, {"mode", "re", "im"})) continue;
          auto re = number(a[i], "re", p, true);
          auto im = number(a[i], "im", p, false);
          if (!a[i].contains("mode")) {
            error(p + "/mode", "missing mode");
            continue;
          }
          auto m = mode(a[i]["mode"], p + "/mode");
          if (m && re) spec.amplitudes.push_back({*m, Complex(*re, im.value_or(0.0))});
        }
      }
    } else if (*kind == "superposition") {
      object(j, path, {"kind", "terms"});
      spec.kind = StateKind::Superposition;
      if (!j.contains("terms") || !j["terms"].is_array() || j["terms"].empty()) {
        error(path + "/terms", "expected a non-empty array");
      } else {
        const Json& t = j["terms"];
        for (std::size_t i = 0; i < t.size(); ++i) {
          const std::string p = path + "/terms/" + std::to_string(i);
          if (!object(t[i], p, {"re", "im", "occupations"})) continue;
          auto re = number(t[i], "re", p, true);
          auto im = number(t[i], "im", p, false);
          std::vector<Occupation> occ;
          if (t[i].contains("occupations")) occ = occupations(t[i]["occupations"], p + "/occupations");
          if (re) spec.terms.push_back({Complex(*re, im.value_or(0.0)), std::move(occ)});
        }
      }
    } else {
      error(path + "/kind", "unknown state kind '" + *kind + "' (vacuum, fock, coherent, superposition)");
      return std::nullopt;
    }
    return spec;
  }

  std::optional<CheckSpec> check(const Json& j, const std::string& path, bool three_d) {
    if (j.is_string()) return check(Json{{"name", j}}, path, three_d);
    if (!object(j, path, {"name", "tolerance", "min_order", "n_max", "state", "options"})) return std::nullopt;
    auto name = string(j, "name", path, true);
    if (!name) return std::nullopt;
    const CheckInfo* info = find_check(*name);
    if (!info) {
      error(path + "/name", "unknown check '" + *name + "'");
      return std::nullopt;
    }
    if (info->domain == CheckDomain::Line && three_d) {
      error(path + "/name", "check '" + *name + "' needs a 1D grid");
    }
    if (info->domain == CheckDomain::Lattice && !three_d) {
      error(path + "/name", "check '" + *name + "' needs a 3D lattice");
    }
    CheckSpec spec;
    spec.name = *name;
    spec.tolerance = positive(j, "tolerance", path, false);
    spec.min_order = positive(j, "min_order", path, false);
    if (auto n = integer(j, "n_max", path, false)) {
      if (*n < 1) error(path + "/n_max", "must be at least 1");
      else spec.n_max = static_cast<unsigned>(*n);
    }
    if (j.contains("state")) spec.state = state(j["state"], path + "/state");
    if (j.contains("options")) {
      const Json& o = j["options"];
      const std::string p = path + "/options";
      std::set<std::string> allowed;
      for (const auto& [k, _] : info->options) allowed.insert(k);
      if (object(o, p, allowed)) {
        for (const auto& [key, value] : o.items()) {
          if (!allowed.count(key)) continue;
          double v = 0.0;
          if (value.is_boolean()) {
            v = value.get<bool>() ? 1.0 : 0.0;
          } else if (value.is_number()) {
            v = value.get<double>();
          } else {
            error(p + "/" + key, "expected a number");
            continue;
          }
          bool integral = false;
          for (const auto& name_int : info->integer_options) integral = integral || name_int == key;
          if (!std::isfinite(v) || v < 0.0 || (integral && v != std::floor(v))) {
            error(p + "/" + key, integral ? "expected a non-negative integer" : "expected a non-negative number");
            continue;
          }
          spec.options[key] = v;
        }
      }
    }
    return spec;
  }

 private:
  std::vector<std::string> problems_;
};

inline Json emit_mode(const ModeRef& mode) {
  if (const auto* id = std::get_if<ModeId>(&mode)) {
    return {{"direction", std::string(1, to_char(id->direction))},
            {"polarization", to_int(id->polarization)},
            {"index", id->freq_index}};
  }
  const auto& lm = std::get<LatticeMode>(mode);
  return {{"k", {lm.k[0], lm.k[1], lm.k[2]}}, {"polarization", to_int(lm.polarization)}};
}

inline Json emit_occupations(const std::vector<Occupation>& occ) {
  Json out = Json::array();
  for (const auto& o : occ) out.push_back({{"mode", emit_mode(o.mode)}, {"count", o.count}});
  return out;
}

inline Json emit_state(const StateSpec& s) {
  switch (s.kind) {
    case StateKind::Vacuum:
      return {{"kind", "vacuum"}};
    case StateKind::Fock:
      return {{"kind", "fock"}, {"occupations", emit_occupations(s.occupations)}};
    case StateKind::Coherent: {
      Json a = Json::array();
      for (const auto& amp : s.amplitudes) {
        a.push_back({{"mode", emit_mode(amp.mode)}, {"re", amp.alpha.real()}, {"im", amp.alpha.imag()}});
      }
      return {{"kind", "coherent"}, {"amplitudes", a}};
    }
    case StateKind::Superposition: {
      Json t = Json::array();
      for (const auto& term : s.terms) {
        t.push_back({{"re", term.weight.real()},
                     {"im", term.weight.imag()},
                     {"occupations", emit_occupations(term.occupations)}});
      }
      return {{"kind", "superposition"}, {"terms", t}};
    }
  }
  return {};
}

inline Json emit_range(const Range& r) { return {{"start", r.start}, {"stop", r.stop}, {"count", r.count}}; }

}  // namespace detail

/// Parses and validates a config document. Every problem is collected with its JSON-pointer
/// path before a ConfigError is thrown.
inline RunConfig parse_config(const Json& doc) {
  detail::ConfigReader rd;
  RunConfig cfg;
  if (!rd.object(doc, "", {"medium", "grid", "lattice", "n_max", "state", "sampling", "checks", "outputs", "seed"})) {
    throw ConfigError(rd.problems());
  }
  if (doc.contains("medium")) {
    const Json& m = doc["medium"];
    if (rd.object(m, "/medium", {"epsilon", "mu", "hbar", "area"})) {
      auto eps = rd.positive(m, "epsilon", "/medium", false);
      auto mu = rd.positive(m, "mu", "/medium", false);
      auto hbar = rd.positive(m, "hbar", "/medium", false);
      auto area = rd.positive(m, "area", "/medium", false);
      cfg.medium = Medium(eps.value_or(1.0), mu.value_or(1.0), hbar.value_or(1.0), area.value_or(1.0));
    }
  }
  const bool has_line = doc.contains("grid");
  const bool has_lattice = doc.contains("lattice");
  if (has_line == has_lattice) {
    rd.error("/", "exactly one of \"grid\" (1D) or \"lattice\" (3D) is required");
  } else if (has_line) {
    const Json& g = doc["grid"];
    if (rd.object(g, "/grid", {"omega_min", "delta_omega", "count"})) {
      auto w0 = rd.positive(g, "omega_min", "/grid", true);
      auto dw = rd.positive(g, "delta_omega", "/grid", true);
      auto n = rd.integer(g, "count", "/grid", true);
      if (n && *n == 0) rd.error("/grid/count", "must be at least 1");
      if (w0 && dw && n && *n > 0) cfg.line = FrequencyGrid(*w0, *dw, static_cast<std::size_t>(*n));
    }
  } else {
    const Json& l = doc["lattice"];
    if (rd.object(l, "/lattice", {"k_spacing", "half_extent"})) {
      auto dk = rd.positive(l, "k_spacing", "/lattice", true);
      auto n = rd.integer(l, "half_extent", "/lattice", true);
      if (n && (*n < 1 || *n > 4)) rd.error("/lattice/half_extent", "must be between 1 and 4");
      else if (dk && n) cfg.lattice = KGrid(*dk, static_cast<int>(*n));
    }
  }
  rd.line = cfg.line;
  rd.lattice = cfg.lattice;
  if (auto n = rd.integer(doc, "n_max", "", false)) {
    if (*n < 1) rd.error("/n_max", "must be at least 1");
    else cfg.n_max = static_cast<unsigned>(*n);
  }
  if (auto seed = rd.integer(doc, "seed", "", false)) cfg.seed = *seed;
  const bool grid_ok = cfg.line || cfg.lattice;
  if (doc.contains("state") && grid_ok) {
    if (auto s = rd.state(doc["state"], "/state")) cfg.state = *s;
  }
  if (doc.contains("sampling")) {
    const Json& s = doc["sampling"];
    if (rd.object(s, "/sampling", {"x", "r", "t", "with_squares"})) {
      if (s.contains("x")) {
        if (cfg.lattice) rd.error("/sampling/x", "3D configs sample positions with \"r\"");
        else if (auto r = rd.range(s["x"], "/sampling/x")) cfg.sampling.x = *r;
      }
      if (s.contains("r")) {
        if (cfg.line) {
          rd.error("/sampling/r", "1D configs sample positions with \"x\"");
        } else if (!s["r"].is_array() || s["r"].empty()) {
          rd.error("/sampling/r", "expected a non-empty array of points");
        } else {
          cfg.sampling.r.clear();
          for (std::size_t i = 0; i < s["r"].size(); ++i) {
            if (auto v = rd.vec3(s["r"][i], "/sampling/r/" + std::to_string(i))) cfg.sampling.r.push_back(*v);
          }
        }
      }
      if (s.contains("t")) {
        if (auto r = rd.range(s["t"], "/sampling/t")) cfg.sampling.t = *r;
      }
      if (auto w = rd.boolean(s, "with_squares", "/sampling")) cfg.sampling.with_squares = *w;
    }
  }
  if (doc.contains("checks")) {
    const Json& c = doc["checks"];
    if (!c.is_array()) {
      rd.error("/checks", "expected an array");
    } else if (grid_ok) {
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (auto spec = rd.check(c[i], "/checks/" + std::to_string(i), cfg.three_d())) cfg.checks.push_back(*spec);
      }
    }
  }
  if (doc.contains("outputs")) {
    const Json& o = doc["outputs"];
    if (rd.object(o, "/outputs", {"csv", "report"})) {
      cfg.outputs.csv = rd.string(o, "csv", "/outputs", false);
      cfg.outputs.report = rd.string(o, "report", "/outputs", false);
    }
  }
  if (!rd.problems().empty()) throw ConfigError(rd.problems());
  return cfg;
}

inline RunConfig parse_config(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError({std::string("(document): malformed JSON: ") + e.what()});
  }
  return parse_config(doc);
}

inline RunConfig parse_config(const char* text) { return parse_config(std::string(text)); }

/// Canonical document with every default spelled out; parse_config(emit_config(c)) == c.
inline Json emit_config(const RunConfig& cfg) {
  Json doc;
  doc["medium"] = {{"epsilon", cfg.medium.epsilon()},
                   {"mu", cfg.medium.mu()},
                   {"hbar", cfg.medium.hbar()},
                   {"area", cfg.medium.area()}};
  if (cfg.line) {
    doc["grid"] = {{"omega_min", cfg.line->omega_min()},
                   {"delta_omega", cfg.line->delta_omega()},
                   {"count", cfg.line->count()}};
  }
  if (cfg.lattice) {
    doc["lattice"] = {{"k_spacing", cfg.lattice->k_spacing()}, {"half_extent", cfg.lattice->half_extent()}};
  }
  doc["n_max"] = cfg.n_max;
  doc["seed"] = cfg.seed;
  doc["state"] = detail::emit_state(cfg.state);
  Json sampling;
  if (cfg.line) {
    sampling["x"] = detail::emit_range(cfg.sampling.x);
  } else {
    Json r = Json::array();
    for (const Vec3& p : cfg.sampling.r) r.push_back({p[0], p[1], p[2]});
    sampling["r"] = r;
  }
  sampling["t"] = detail::emit_range(cfg.sampling.t);
  sampling["with_squares"] = cfg.sampling.with_squares;
  doc["sampling"] = sampling;
  Json checks = Json::array();
  for (const CheckSpec& c : cfg.checks) {
    Json j{{"name", c.name}};
    if (c.tolerance) j["tolerance"] = *c.tolerance;
    if (c.min_order) j["min_order"] = *c.min_order;
    if (c.n_max) j["n_max"] = *c.n_max;
    if (c.state) j["state"] = detail::emit_state(*c.state);
    if (!c.options.empty()) j["options"] = c.options;
    checks.push_back(j);
  }
  doc["checks"] = checks;
  Json outputs = Json::object();
  if (cfg.outputs.csv) outputs["csv"] = *cfg.outputs.csv;
  if (cfg.outputs.report) outputs["report"] = *cfg.outputs.report;
  doc["outputs"] = outputs;
  return doc;
}

}  // namespace qfield
