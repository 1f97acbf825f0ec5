#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "group_io.hpp"
#include "models.hpp"

namespace gsynch {

inline json frequency_header(const FrequencyObservation& f) {
  return {{"label", f.label},
          {"lambda", f.lambda},
          {"dim", f.dim},
          {"complex_dim", f.complex_dim},
          {"type", to_string(f.type)},
          {"noise", to_string(f.noise)},
          {"noise_scale", f.noise_scale},
          {"rows", f.y.rows()},
          {"cols", f.y.cols()}};
}

inline json observation_header(const SynchObservation& obs) {
  json freqs = json::array();
  for (const auto& f : obs.frequencies) freqs.push_back(frequency_header(f));
  return {{"model", obs.model}, {"group", obs.group}, {"n", obs.n}, {"seed", obs.seed}, {"frequencies", freqs}};
}

inline json observation_to_json(const SynchObservation& obs) {
  json j = observation_header(obs);
  for (std::size_t i = 0; i < obs.frequencies.size(); ++i)
    j["frequencies"][i]["data"] = matrix_to_json(obs.frequencies[i].y).at("data");
  return j;
}

namespace detail {

inline FrequencyObservation frequency_from_header(const json& h) {
  FrequencyObservation f;
  f.label = h.value("label", std::string());
  f.lambda = h.value("lambda", 0.0);
  f.dim = h.value("dim", 1);
  f.complex_dim = h.value("complex_dim", f.dim);
  f.type = rep_type_from_string(h.value("type", std::string("complex")));
  f.noise = ensemble_from_string(h.value("noise", std::string("GUE")));
  f.noise_scale = h.value("noise_scale", 1.0);
  return f;
}

inline SynchObservation observation_from_header(const json& j) {
  SynchObservation obs;
  obs.model = j.value("model", std::string());
  obs.group = j.value("group", std::string());
  obs.n = j.at("n").get<int>();
  obs.seed = j.value("seed", std::uint64_t{0});
  return obs;
}

}  // namespace detail

inline SynchObservation observation_from_json(const json& j) {
  try {
    SynchObservation obs = detail::observation_from_header(j);
    for (const auto& fj : j.at("frequencies")) {
      FrequencyObservation f = detail::frequency_from_header(fj);
      f.y = matrix_entries_from_json(fj.at("data"), fj.at("rows").get<Eigen::Index>(), fj.at("cols").get<Eigen::Index>());
      obs.frequencies.push_back(std::move(f));
    }
    return obs;
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_parameter, std::string("malformed observation: ") + e.what());
  }
}

/// Binary layout: one line of JSON header (with "layout"), a newline, then
/// each matrix column-major as interleaved little-endian float64 (re, im).
inline void write_observation_binary(std::ostream& out, const SynchObservation& obs) {
  json header = observation_header(obs);
  header["layout"] = "column-major complex128";
  out << header.dump() << '\n';
  for (const auto& f : obs.frequencies)
    out.write(reinterpret_cast<const char*>(f.y.data()), static_cast<std::streamsize>(f.y.size() * sizeof(cplx)));
}

inline SynchObservation read_observation_binary(std::istream& in) {
  std::string line;
  std::getline(in, line);
  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_parameter, std::string("bad binary observation header: ") + e.what());
  }
  SynchObservation obs = detail::observation_from_header(header);
  for (const auto& fj : header.at("frequencies")) {
    FrequencyObservation f = detail::frequency_from_header(fj);
    f.y.resize(fj.at("rows").get<Eigen::Index>(), fj.at("cols").get<Eigen::Index>());
    in.read(reinterpret_cast<char*>(f.y.data()), static_cast<std::streamsize>(f.y.size() * sizeof(cplx)));
    if (!in) fail(ErrorKind::invalid_parameter, "binary observation is truncated");
    obs.frequencies.push_back(std::move(f));
  }
  return obs;
}

inline void save_observation(const std::string& path, const SynchObservation& obs, bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::invalid_parameter, "cannot write " + path);
  if (binary)
    write_observation_binary(out, obs);
  else
    out << observation_to_json(obs).dump() << '\n';
}

/// Reads either format; binary files are recognised by the "layout" key.
inline SynchObservation load_observation(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::invalid_parameter, "cannot open " + path);
  std::string first;
  std::getline(in, first);
  json header;
  try {
    header = json::parse(first);
  } catch (const json::exception&) {
    header = json();
  }
  if (header.is_object() && header.contains("layout")) {
    in.clear();
    in.seekg(0);
    return read_observation_binary(in);
  }
  in.clear();
  in.seekg(0);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return observation_from_json(json::parse(ss.str()));
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_parameter, std::string("observation file is not valid JSON: ") + e.what());
  }
}

}  // namespace gsynch
