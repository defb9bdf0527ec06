/**
 * @file mlp.hpp
 * @brief Preference-conditioned multilayer perceptron h(lambda) -> x.
 *
 * Linear(m, H) -> ReLU -> [Linear(H, H) -> ReLU] x (depth - 1) -> Linear(H, n)
 * -> logistic -> affine map onto the problem box. Forward and backward work
 * on batches stored column-wise.
 */

#ifndef STCH_PSL_MLP_HPP
#define STCH_PSL_MLP_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "stch/core.hpp"

namespace stch {

inline constexpr int kDefaultHiddenWidth = 256;
inline constexpr int kDefaultHiddenLayers = 3;

struct Layer {
  Matrix weight;  // out x in
  Vector bias;    // out
};

/// Per-layer gradients, same shapes as the model layers.
using LayerGradients = std::vector<Layer>;

struct ForwardCache {
  /// inputs[k] is the input of layer k (inputs[0] = preferences).
  std::vector<Matrix> inputs;
  /// pre[k] = W_k inputs[k] + b_k.
  std::vector<Matrix> pre;
  /// Logistic output before the box map.
  Matrix squashed;
  /// Decision vectors, one per column.
  Matrix x;
};

class MlpModel {
 public:
  MlpModel() = default;

  /**
   * Fan-in uniform initialization: W ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)),
   * zero biases, drawn from mt19937_64(seed) in layer order, row-major.
   */
  static MlpModel make(int m, const Vector& lower, const Vector& upper, std::uint64_t seed,
                       int hidden = kDefaultHiddenWidth, int hidden_layers = kDefaultHiddenLayers) {
    detail::require(m >= 1 && hidden >= 1 && hidden_layers >= 1, "invalid MLP shape");
    detail::require_same_size(lower.size(), upper.size(), "MLP box");
    detail::require((upper.array() > lower.array()).all(), "MLP box must satisfy upper > lower");
    MlpModel model;
    model.lower_ = lower;
    model.upper_ = upper;
    std::vector<int> sizes{m};
    for (int i = 0; i < hidden_layers; ++i) sizes.push_back(hidden);
    sizes.push_back(static_cast<int>(lower.size()));

    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k + 1 < sizes.size(); ++k) {
      const double bound = 1.0 / std::sqrt(static_cast<double>(sizes[k]));
      std::uniform_real_distribution<double> dist(-bound, bound);
      Layer layer{Matrix(sizes[k + 1], sizes[k]), Vector::Zero(sizes[k + 1])};
      for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
        for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) layer.weight(r, c) = dist(rng);
      }
      model.layers_.push_back(std::move(layer));
    }
    return model;
  }

  /// Builds a model from explicit layers (checkpoint loading, tests).
  static MlpModel from_layers(std::vector<Layer> layers, Vector lower, Vector upper) {
    detail::require(!layers.empty(), "MLP needs at least one layer");
    for (std::size_t k = 0; k < layers.size(); ++k) {
      detail::require_same_size(layers[k].bias.size(), layers[k].weight.rows(), "layer bias");
      if (k > 0) detail::require_same_size(layers[k].weight.cols(), layers[k - 1].weight.rows(), "layer input");
    }
    detail::require_same_size(layers.back().weight.rows(), lower.size(), "MLP output");
    MlpModel model;
    model.layers_ = std::move(layers);
    model.lower_ = std::move(lower);
    model.upper_ = std::move(upper);
    return model;
  }

  [[nodiscard]] int input_dim() const { return static_cast<int>(layers_.front().weight.cols()); }
  [[nodiscard]] int output_dim() const { return static_cast<int>(layers_.back().weight.rows()); }
  [[nodiscard]] const std::vector<Layer>& layers() const { return layers_; }
  [[nodiscard]] std::vector<Layer>& layers() { return layers_; }
  [[nodiscard]] const Vector& lower() const { return lower_; }
  [[nodiscard]] const Vector& upper() const { return upper_; }

  [[nodiscard]] std::int64_t parameter_count() const {
    std::int64_t count = 0;
    for (const auto& l : layers_) count += l.weight.size() + l.bias.size();
    return count;
  }

  /// Forward pass for a batch of preferences (m x B).
  [[nodiscard]] ForwardCache forward_batch(const Matrix& lambdas) const {
    detail::require_same_size(lambdas.rows(), input_dim(), "MLP input");
    ForwardCache cache;
    Matrix a = lambdas;
    for (std::size_t k = 0; k < layers_.size(); ++k) {
      Matrix z = layers_[k].weight * a;
      z.colwise() += layers_[k].bias;
      cache.inputs.push_back(std::move(a));
      if (k + 1 < layers_.size()) a = z.cwiseMax(0.0);
      cache.pre.push_back(std::move(z));
    }
    cache.squashed = cache.pre.back().unaryExpr([](double v) { return logistic(v); });
    cache.x = ((cache.squashed.array().colwise() * (upper_ - lower_).array()).colwise() + lower_.array()).matrix();
    return cache;
  }

  [[nodiscard]] ForwardCache forward(const Vector& lambda) const { return forward_batch(lambda); }

  /// Decision vector for one preference.
  [[nodiscard]] Vector predict(const Vector& lambda) const { return forward(lambda).x.col(0); }

  /**
   * @brief Reverse-mode gradients of sum_b upstream_b . x_b w.r.t. all parameters.
   *
   * `upstream` is n x B, matching the cache's batch. ReLU units whose
   * pre-activation is exactly zero pass no gradient.
   */
  [[nodiscard]] LayerGradients backward(const ForwardCache& cache, const Matrix& upstream) const {
    detail::require(upstream.rows() == cache.x.rows() && upstream.cols() == cache.x.cols(),
                    "backward upstream shape does not match the forward batch");
    LayerGradients grads(layers_.size());
    const Vector width = upper_ - lower_;
    const Matrix& s = cache.squashed;
    Matrix delta = (upstream.array().colwise() * width.array() * s.array() * (1.0 - s.array())).matrix();
    for (std::size_t k = layers_.size(); k-- > 0;) {
      grads[k].weight = delta * cache.inputs[k].transpose();
      grads[k].bias = delta.rowwise().sum();
      if (k == 0) break;
      Matrix back = layers_[k].weight.transpose() * delta;
      delta = (cache.pre[k - 1].array() > 0.0).select(back.array(), 0.0).matrix();
    }
    return grads;
  }

  /// All parameters flattened: for each layer, weights row-major then biases.
  [[nodiscard]] Vector flat_parameters() const {
    Vector out(parameter_count());
    Eigen::Index at = 0;
    for (const auto& l : layers_) {
      for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
        for (Eigen::Index c = 0; c < l.weight.cols(); ++c) out[at++] = l.weight(r, c);
      }
      for (Eigen::Index r = 0; r < l.bias.size(); ++r) out[at++] = l.bias[r];
    }
    return out;
  }

  void set_flat_parameters(const Vector& p) {
    detail::require_same_size(p.size(), parameter_count(), "flat parameters");
    Eigen::Index at = 0;
    for (auto& l : layers_) {
      for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
        for (Eigen::Index c = 0; c < l.weight.cols(); ++c) l.weight(r, c) = p[at++];
      }
      for (Eigen::Index r = 0; r < l.bias.size(); ++r) l.bias[r] = p[at++];
    }
  }

  static double logistic(double v) {
    // split form avoids exp overflow for large |v|
    if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
    const double e = std::exp(v);
    return e / (1.0 + e);
  }

 private:
  std::vector<Layer> layers_;
  Vector lower_;
  Vector upper_;
};

/// Flattens gradients in the same order as MlpModel::flat_parameters().
inline Vector flatten(const LayerGradients& grads) {
  Eigen::Index total = 0;
  for (const auto& g : grads) total += g.weight.size() + g.bias.size();
  Vector out(total);
  Eigen::Index at = 0;
  for (const auto& g : grads) {
    for (Eigen::Index r = 0; r < g.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < g.weight.cols(); ++c) out[at++] = g.weight(r, c);
    }
    for (Eigen::Index r = 0; r < g.bias.size(); ++r) out[at++] = g.bias[r];
  }
  return out;
}

}  // namespace stch

#endif  // STCH_PSL_MLP_HPP
