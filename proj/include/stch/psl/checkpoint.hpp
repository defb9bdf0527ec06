#ifndef STCH_PSL_CHECKPOINT_HPP
#define STCH_PSL_CHECKPOINT_HPP

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "stch/io.hpp"
#include "stch/psl/train.hpp"

namespace stch {

namespace detail {

inline nlohmann::json vector_to_json(const Vector& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline Vector vector_from_json(const nlohmann::json& a) {
  Vector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

}  // namespace detail

/// Header recorded with a checkpoint: what produced the parameters.
inline nlohmann::json checkpoint_header(const std::string& problem, const TrainConfig& config) {
  const auto& spec = config.scalarization;
  nlohmann::json h;
  h["problem"] = problem;
  h["scalarization"] = to_string(spec.kind);
  h["mu"] = spec.mu;
  h["z_star"] = detail::vector_to_json(spec.ideal.z_star);
  if (spec.normalization) {
    h["f_min"] = detail::vector_to_json(spec.normalization->f_min);
    h["f_max"] = detail::vector_to_json(spec.normalization->f_max);
  }
  h["seed"] = config.seed;
  h["iterations"] = config.iterations;
  h["prefs_per_iter"] = config.prefs_per_iter;
  h["optimizer"] = to_string(config.optimizer);
  h["learning_rate"] = config.learning_rate;
  h["version"] = kVersion;
  return h;
}

/**
 * JSON checkpoint: {"header": {...}, "lower": [...], "upper": [...],
 * "layers": [{"rows", "cols", "weight" (row-major), "bias"}]}.
 */
inline std::string model_to_json(const MlpModel& model, const nlohmann::json& header = nlohmann::json::object()) {
  nlohmann::json j;
  j["header"] = header;
  j["lower"] = detail::vector_to_json(model.lower());
  j["upper"] = detail::vector_to_json(model.upper());
  j["layers"] = nlohmann::json::array();
  for (const auto& l : model.layers()) {
    nlohmann::json layer;
    layer["rows"] = l.weight.rows();
    layer["cols"] = l.weight.cols();
    nlohmann::json w = nlohmann::json::array();
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) w.push_back(l.weight(r, c));
    }
    layer["weight"] = std::move(w);
    layer["bias"] = detail::vector_to_json(l.bias);
    j["layers"].push_back(std::move(layer));
  }
  return j.dump() + "\n";
}

inline MlpModel model_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  std::vector<Layer> layers;
  for (const auto& layer : j.at("layers")) {
    const auto rows = layer.at("rows").get<Eigen::Index>();
    const auto cols = layer.at("cols").get<Eigen::Index>();
    const auto& w = layer.at("weight");
    detail::require(static_cast<Eigen::Index>(w.size()) == rows * cols, "checkpoint weight size mismatch");
    Layer l{Matrix(rows, cols), detail::vector_from_json(layer.at("bias"))};
    std::size_t at = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) l.weight(r, c) = w[at++].get<double>();
    }
    layers.push_back(std::move(l));
  }
  return MlpModel::from_layers(std::move(layers), detail::vector_from_json(j.at("lower")),
                               detail::vector_from_json(j.at("upper")));
}

inline MlpModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace stch

#endif  // STCH_PSL_CHECKPOINT_HPP
