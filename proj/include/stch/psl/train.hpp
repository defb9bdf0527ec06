/**
 * @file train.hpp
 * @brief Pareto set learning: optimizers, the training loop and front sampling.
 */

#ifndef STCH_PSL_TRAIN_HPP
#define STCH_PSL_TRAIN_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stch/core.hpp"
#include "stch/metrics/archive.hpp"
#include "stch/problems/problem.hpp"
#include "stch/problems/reference_front.hpp"
#include "stch/psl/mlp.hpp"

namespace stch {

enum class OptimizerKind { SGD, Adam };

inline std::string to_string(OptimizerKind k) { return k == OptimizerKind::SGD ? "sgd" : "adam"; }

inline OptimizerKind parse_optimizer_kind(const std::string& id) {
  if (id == "sgd") return OptimizerKind::SGD;
  if (id == "adam") return OptimizerKind::Adam;
  throw ContractViolation("unknown optimizer: " + id);
}

inline constexpr int kDefaultPslIterations = 2000;
inline constexpr int kDefaultPrefsPerIter = 10;
inline constexpr double kDefaultPslLearningRate = 1e-3;
inline constexpr double kDefaultTrainingFloor = 1e-3;

struct TrainConfig {
  int iterations = kDefaultPslIterations;
  int prefs_per_iter = kDefaultPrefsPerIter;
  OptimizerKind optimizer = OptimizerKind::Adam;
  double learning_rate = kDefaultPslLearningRate;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = 0;
  double preference_floor = kDefaultTrainingFloor;
  int hidden = kDefaultHiddenWidth;
  int hidden_layers = kDefaultHiddenLayers;
  ScalarizationSpec scalarization;

  void validate() const {
    detail::require(iterations >= 1, "iterations must be >= 1");
    detail::require(prefs_per_iter >= 1, "prefs_per_iter must be >= 1");
    detail::require(learning_rate > 0.0, "learning_rate must be > 0");
    detail::require(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0, "Adam betas must be in [0, 1)");
    detail::require(hidden >= 1 && hidden_layers >= 1, "invalid hidden layer shape");
    scalarization.validate();
  }

  [[nodiscard]] std::int64_t evaluation_budget() const {
    return static_cast<std::int64_t>(iterations) * prefs_per_iter;
  }
};

class TrainingDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adam or plain SGD over the model's layers.
class Optimizer {
 public:
  Optimizer(const TrainConfig& config, const MlpModel& model) : config_(config) {
    if (config_.optimizer == OptimizerKind::Adam) {
      for (const auto& l : model.layers()) {
        first_.push_back({Matrix::Zero(l.weight.rows(), l.weight.cols()), Vector::Zero(l.bias.size())});
      }
      second_ = first_;
    }
  }

  void step(MlpModel& model, const LayerGradients& grads) {
    ++t_;
    auto& layers = model.layers();
    if (config_.optimizer == OptimizerKind::SGD) {
      for (std::size_t k = 0; k < layers.size(); ++k) {
        layers[k].weight -= config_.learning_rate * grads[k].weight;
        layers[k].bias -= config_.learning_rate * grads[k].bias;
      }
      return;
    }
    const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
    auto update = [&](auto& param, auto& m1, auto& m2, const auto& g) {
      m1 = config_.beta1 * m1 + (1.0 - config_.beta1) * g;
      m2 = config_.beta2 * m2 + (1.0 - config_.beta2) * g.cwiseProduct(g);
      param.array() -= config_.learning_rate * (m1.array() / c1) / ((m2.array() / c2).sqrt() + config_.adam_epsilon);
    };
    for (std::size_t k = 0; k < layers.size(); ++k) {
      update(layers[k].weight, first_[k].weight, second_[k].weight, grads[k].weight);
      update(layers[k].bias, first_[k].bias, second_[k].bias, grads[k].bias);
    }
  }

 private:
  TrainConfig config_;
  std::vector<Layer> first_;
  std::vector<Layer> second_;
  std::int64_t t_ = 0;
};

/**
 * Scalarized loss for a batch: mean over columns of g(f(x_b) | lambda_b).
 * Fills `upstream` with d loss / d x (n x B).
 */
inline double batch_loss(const Problem& problem, const ScalarizationSpec& spec, const Matrix& lambdas,
                         const Matrix& xs, Matrix& upstream) {
  const auto batch = xs.cols();
  upstream.resize(xs.rows(), batch);
  double loss = 0.0;
  for (Eigen::Index b = 0; b < batch; ++b) {
    const Vector x = xs.col(b);
    const Vector f = problem.evaluate_unchecked(x);
    if (!f.allFinite()) throw TrainingDivergence("non-finite objective during training");
    const Matrix jac = problem.jacobian_unchecked(x);
    const auto r = scalarize_with_gradient(ObjectiveVector(f), jac, lambdas.col(b), spec);
    loss += r.value / static_cast<double>(batch);
    upstream.col(b) = *r.gradient / static_cast<double>(batch);
  }
  return loss;
}

struct TrainResult {
  MlpModel model;
  std::vector<double> loss_history;
};

/// Seed of the preference stream; kept apart from the initialization stream.
inline std::uint64_t preference_stream_seed(std::uint64_t seed) { return seed ^ 0x9E3779B97F4A7C15ULL; }

/**
 * @brief Trains h(lambda) so that x = h(lambda) minimizes the scalarization for every lambda.
 *
 * Each iteration draws prefs_per_iter preferences (uniform on the simplex,
 * floored), averages the scalarized losses and takes one optimizer step.
 */
inline TrainResult train(const Problem& problem, const TrainConfig& config) {
  config.validate();
  TrainResult result{MlpModel::make(problem.m(), problem.lower(), problem.upper(), config.seed, config.hidden,
                                    config.hidden_layers),
                     {}};
  result.loss_history.reserve(static_cast<std::size_t>(config.iterations));
  Optimizer opt(config, result.model);
  std::mt19937_64 rng(preference_stream_seed(config.seed));
  Matrix lambdas(problem.m(), config.prefs_per_iter);
  Matrix upstream;

  for (int it = 0; it < config.iterations; ++it) {
    for (int b = 0; b < config.prefs_per_iter; ++b) {
      lambdas.col(b) = sample_preference(rng, problem.m(), config.preference_floor).values();
    }
    const ForwardCache cache = result.model.forward_batch(lambdas);
    const double loss = batch_loss(problem, config.scalarization, lambdas, cache.x, upstream);
    if (!std::isfinite(loss) || !upstream.allFinite()) {
      std::ostringstream msg;
      msg << "non-finite loss at training iteration " << it;
      throw TrainingDivergence(msg.str());
    }
    result.loss_history.push_back(loss);
    opt.step(result.model, result.model.backward(cache, upstream));
  }
  return result;
}

/// Model outputs and their objective values for each preference, unfiltered and in input order.
inline std::vector<ArchiveEntry> evaluate_model(const MlpModel& model, const Problem& problem,
                                                const std::vector<Vector>& preferences) {
  std::vector<ArchiveEntry> out;
  if (preferences.empty()) return out;
  Matrix lambdas(model.input_dim(), static_cast<Eigen::Index>(preferences.size()));
  for (std::size_t i = 0; i < preferences.size(); ++i) lambdas.col(static_cast<Eigen::Index>(i)) = preferences[i];
  const ForwardCache cache = model.forward_batch(lambdas);
  for (Eigen::Index b = 0; b < cache.x.cols(); ++b) {
    Vector x = cache.x.col(b);
    Vector f = problem.evaluate_unchecked(x);
    out.push_back({std::move(x), std::move(f)});
  }
  return out;
}

/// Non-dominated archive of the model's solutions for the given preferences.
inline ParetoArchive sample_front(const MlpModel& model, const Problem& problem, const std::vector<Vector>& preferences,
                                  const Vector& reference_point = Vector()) {
  ParetoArchive archive(reference_point);
  auto entries = evaluate_model(model, problem, preferences);
  std::vector<ArchiveEntry> finite;
  for (auto& e : entries) {
    if (e.f.allFinite()) finite.push_back(std::move(e));
  }
  archive.insert_all(std::move(finite));
  return archive;
}

/// Loss spec used for training on a benchmark: objectives normalized by the front's bounding box, z* = -0.1.
inline ScalarizationSpec benchmark_spec(ScalarizationKind kind, const ReferenceFront& front, double mu = kDefaultMu) {
  return ScalarizationSpec::make(kind, Vector::Constant(front.m(), -kDefaultIdealOffset), mu, front.normalization());
}

}  // namespace stch

#endif  // STCH_PSL_TRAIN_HPP
