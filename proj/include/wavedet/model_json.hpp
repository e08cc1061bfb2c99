#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wavedet/detectors.hpp"
#include "wavedet/wavelet.hpp"

namespace wavedet {

// Calibrated detector models persist as JSON with coefficients stored as
// decimal arrays (shortest round-trip representation, so reload is
// bit-faithful). Filters are stored by name and rebuilt on load.

inline nlohmann::json to_json(const LinearDetectorModel& m) {
  nlohmann::json j;
  j["kind"] = "linear";
  j["filter"] = m.filter.name;
  j["scales"] = m.scales.levels;
  j["boundary_mode"] = to_string(m.mode);
  j["sigma_n"] = m.sigma_n;
  j["pfa"] = m.pfa;
  j["v_t"] = m.v_t;
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& seg : m.a.segments) {
    std::vector<double> segment(m.a.weights.begin() + static_cast<long>(seg.offset),
                                m.a.weights.begin() +
                                    static_cast<long>(seg.offset + seg.length));
    coeffs.push_back(std::move(segment));
  }
  j["a"] = std::move(coeffs);
  return j;
}

inline nlohmann::json to_json(const MaxDetectorModel& m) {
  nlohmann::json j;
  j["kind"] = "max";
  j["filter"] = m.filter.name;
  j["scale"] = m.scale;
  j["boundary_mode"] = to_string(m.mode);
  j["pfa"] = m.pfa;
  j["v_t"] = m.v_t;
  j["calibration"] = {{"trials", m.calibration.trials},
                      {"seed", m.calibration.seed}};
  return j;
}

inline LinearDetectorModel linear_model_from_json(const nlohmann::json& j) {
  if (j.at("kind").get<std::string>() != "linear")
    throw std::domain_error("expected a linear detector model");
  LinearDetectorModel m;
  m.filter = make_wavelet(j.at("filter").get<std::string>());
  m.scales = ScaleSet(j.at("scales").get<std::vector<int>>());
  m.mode = boundary_mode_from_string(j.at("boundary_mode").get<std::string>());
  m.sigma_n = j.at("sigma_n").get<double>();
  m.pfa = j.at("pfa").get<double>();
  m.v_t = j.at("v_t").get<double>();
  const auto& coeffs = j.at("a");
  if (coeffs.size() != m.scales.levels.size())
    throw std::domain_error("model coefficient segments do not match scales");
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    auto seg_values = coeffs[i].get<std::vector<double>>();
    SegmentInfo seg;
    seg.level = m.scales.levels[i];
    seg.offset = m.a.weights.size();
    seg.length = seg_values.size();
    const std::size_t transient = m.filter.transient_len();
    seg.steady_len = m.mode == BoundaryMode::periodic
                         ? seg.length
                         : (seg.length > transient ? seg.length - transient : 0);
    m.a.segments.push_back(seg);
    m.a.weights.insert(m.a.weights.end(), seg_values.begin(), seg_values.end());
  }
  // all segments must come from one input length: length * 2^level constant
  std::size_t input_len = 0;
  for (const auto& seg : m.a.segments) {
    const std::size_t implied = seg.length << seg.level;
    if (input_len == 0) input_len = implied;
    if (implied != input_len || seg.length == 0)
      throw std::domain_error("model segment lengths are inconsistent");
  }
  m.check_invariants();
  return m;
}

inline MaxDetectorModel max_model_from_json(const nlohmann::json& j) {
  if (j.at("kind").get<std::string>() != "max")
    throw std::domain_error("expected a max detector model");
  MaxDetectorModel m;
  m.filter = make_wavelet(j.at("filter").get<std::string>());
  m.scale = j.at("scale").get<int>();
  m.mode = boundary_mode_from_string(j.at("boundary_mode").get<std::string>());
  m.pfa = j.at("pfa").get<double>();
  m.v_t = j.at("v_t").get<double>();
  m.calibration.trials = j.at("calibration").at("trials").get<std::uint64_t>();
  m.calibration.seed = j.at("calibration").at("seed").get<std::uint64_t>();
  m.check_invariants();
  return m;
}

}  // namespace wavedet
