#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qfield/fock.hpp"

namespace qfield {

/// {"n_max": N, "terms": [{"occupations": [["L1@ω=1", 2], ...], "re": ..., "im": ...}, ...]}
/// Terms follow the canonical tuple order. Doubles are written in shortest round-trip form,
/// so reading the document back reproduces every amplitude bit for bit.
inline nlohmann::json state_to_json(const MultiModeState& state) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [tuple, amp] : state.amplitudes()) {
    nlohmann::json occupations = nlohmann::json::array();
    for (const auto& [mode, n] : tuple.entries()) {
      occupations.push_back(nlohmann::json::array({state.universe().label(mode), n}));
    }
    terms.push_back({{"occupations", std::move(occupations)}, {"re", amp.real()}, {"im", amp.imag()}});
  }
  return {{"n_max", state.n_max()}, {"terms", std::move(terms)}};
}

inline bool is_count(const nlohmann::json& v) {
  return v.is_number_integer() && (v.is_number_unsigned() || v.get<std::int64_t>() >= 0);
}

inline MultiModeState state_from_json(const nlohmann::json& doc, UniversePtr universe) {
  auto fail = [](const std::string& path, const std::string& msg) {
    throw std::invalid_argument("state document " + path + ": " + msg);
  };
  if (!doc.is_object()) fail("/", "expected an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "n_max" && key != "terms") fail("/" + key, "unknown key");
  }
  if (!doc.contains("n_max") || !is_count(doc["n_max"])) fail("/n_max", "expected a positive integer");
  if (!doc.contains("terms") || !doc["terms"].is_array()) fail("/terms", "expected an array");
  MultiModeState state(std::move(universe), doc["n_max"].get<unsigned>());
  const auto& terms = doc["terms"];
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string path = "/terms/" + std::to_string(i);
    const auto& term = terms[i];
    if (!term.is_object()) fail(path, "expected an object");
    for (const auto& [key, _] : term.items()) {
      if (key != "occupations" && key != "re" && key != "im") fail(path + "/" + key, "unknown key");
    }
    if (!term.contains("re") || !term["re"].is_number()) fail(path + "/re", "expected a number");
    if (!term.contains("im") || !term["im"].is_number()) fail(path + "/im", "expected a number");
    if (!term.contains("occupations") || !term["occupations"].is_array()) {
      fail(path + "/occupations", "expected an array");
    }
    std::vector<OccupationTuple::Entry> entries;
    const auto& occ = term["occupations"];
    for (std::size_t j = 0; j < occ.size(); ++j) {
      const std::string p = path + "/occupations/" + std::to_string(j);
      const auto& pair = occ[j];
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !is_count(pair[1])) {
        fail(p, "expected [mode label, count]");
      }
      const auto index = state.universe().find(pair[0].get<std::string>());
      if (!index) fail(p + "/0", "unknown mode label '" + pair[0].get<std::string>() + "'");
      entries.emplace_back(static_cast<std::uint32_t>(*index), pair[1].get<std::uint32_t>());
    }
    try {
      state.accumulate(OccupationTuple(std::move(entries)), Complex(term["re"].get<double>(), term["im"].get<double>()));
    } catch (const std::exception& e) {
      fail(path, e.what());
    }
  }
  return state;
}

}  // namespace qfield
