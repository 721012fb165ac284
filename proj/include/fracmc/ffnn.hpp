#pragma once

// Small feedforward regressors that predict the next value of a trajectory
// from a window of w previous values.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fracmc/mcsolver.hpp"
#include "fracmc/problem.hpp"

namespace fracmc {

enum class Activation { Tanh, Sigmoid, Identity };

[[nodiscard]] std::string_view activation_name(Activation a);
[[nodiscard]] Activation parse_activation(std::string_view name);

struct MlpConfig {
  std::vector<std::size_t> hidden{10, 10, 10};
  Activation activation = Activation::Tanh;
  double learning_rate = 1e-2;
  double momentum = 0.9;
  std::size_t epochs = 5000;
  /// 0 means full batch.
  std::size_t batch_size = 0;
  std::size_t window = 3;
  /// Epochs without a new best validation loss before stopping; 0 disables.
  std::size_t patience = 1000;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Rows of `window` consecutive values and the value that follows.
struct LagRows {
  std::size_t window = 0;
  std::vector<double> inputs;  // rows() x window, row-major
  std::vector<double> targets;

  [[nodiscard]] std::size_t rows() const noexcept { return targets.size(); }
  [[nodiscard]] std::span<const double> row(std::size_t r) const {
    return std::span<const double>(inputs).subspan(r * window, window);
  }
  void append(std::span<const double> trajectory);
};

struct LagSplits {
  double train = 0.7;
  double validation = 0.15;
  double test = 0.15;
};

struct LagDataset {
  std::size_t window = 0;
  LagRows train;
  LagRows validation;
  LagRows test;
};

/// Sliding-window rows; trajectories (not rows) are assigned to splits in
/// order, so no trajectory contributes to two splits. Throws DomainError when a
/// trajectory has fewer than w + 1 points.
[[nodiscard]] LagDataset build_lag_dataset(std::span<const std::vector<double>> trajectories, std::size_t window,
                                           const LagSplits& splits = {});
/// Same, from MC tables; their grids must be uniform.
[[nodiscard]] LagDataset build_lag_dataset(std::span<const TrajectoryTable> trajectories, std::size_t window,
                                           const LagSplits& splits = {});

/// Fully connected network, tanh-like hidden layers and a linear output.
/// Parameters are stored layer by layer as a row-major weight matrix
/// (out x in) followed by the bias.
class Mlp {
 public:
  Mlp() = default;
  Mlp(std::vector<std::size_t> widths, Activation activation);

  [[nodiscard]] const std::vector<std::size_t>& widths() const noexcept { return widths_; }
  [[nodiscard]] Activation activation() const noexcept { return activation_; }
  [[nodiscard]] std::vector<double>& params() noexcept { return params_; }
  [[nodiscard]] const std::vector<double>& params() const noexcept { return params_; }
  [[nodiscard]] std::size_t layer_offset(std::size_t layer) const { return offsets_[layer]; }

  /// Glorot-uniform weights, zero biases.
  void initialize(std::uint64_t seed);
  [[nodiscard]] double forward(std::span<const double> x) const;
  /// Mean squared error over `rows` and its gradient (resized to params().size()).
  double loss_and_gradient(const LagRows& rows, std::vector<double>& grad) const;
  [[nodiscard]] double loss(const LagRows& rows) const;

 private:
  std::vector<std::size_t> widths_;  // input, hidden..., 1
  Activation activation_ = Activation::Tanh;
  std::vector<double> params_;
  std::vector<std::size_t> offsets_;
};

/// Affine maps of inputs and targets onto [-1, 1].
struct Normalization {
  double in_lo = -1.0;
  double in_hi = 1.0;
  double out_lo = -1.0;
  double out_hi = 1.0;

  [[nodiscard]] double in(double v) const;
  [[nodiscard]] double out(double v) const;
  [[nodiscard]] double out_inverse(double v) const;
  [[nodiscard]] static Normalization fit(const LagRows& rows);
};

struct TrainedModel {
  Mlp net;
  Normalization norm;
  std::size_t window = 0;

  [[nodiscard]] double predict(std::span<const double> window_values) const;
};

struct TrainResult {
  TrainedModel model;
  /// Normalized-scale MSE per epoch.
  std::vector<double> train_loss;
  std::vector<double> validation_loss;
  std::size_t best_epoch = 0;
  bool early_stopped = false;
};

/// Gradient descent with momentum; keeps the weights of the best validation
/// epoch. Throws DivergenceError when the training loss exceeds 10x its
/// initial value for 5 consecutive epochs or becomes non-finite.
[[nodiscard]] TrainResult train(const MlpConfig& config, const LagDataset& data);

/// MSE in the original units.
[[nodiscard]] double evaluate_mse(const TrainedModel& model, const LagRows& rows);

/// Autoregressive rollout; the window must have model.window values.
[[nodiscard]] std::vector<double> predict_rollout(const TrainedModel& model, std::span<const double> seed_window,
                                                  std::size_t steps);

/// Largest of ||g - g_fd|| / max(||g||, ||g_fd||) over `points` random
/// parameter vectors, with central differences of step h.
[[nodiscard]] double gradient_check(const std::vector<std::size_t>& widths, Activation activation,
                                    std::uint64_t seed, std::size_t points = 100, double h = 1e-6);

[[nodiscard]] std::string model_to_json(const TrainedModel& model);
[[nodiscard]] TrainedModel model_from_json(std::string_view text);

/// Builds the problem for a given order and initial value.
using ProblemFactory = std::function<LinearFdeProblem(FracOrder, double y0)>;

struct TrajectoryOptions {
  std::size_t count = 50;
  std::size_t points = 100;  // on [0, t_end], t = 0 included
  double t_end = 5.0;
  std::size_t m = 10'000;
  double y0_lo = 0.0;
  double y0_hi = 1.0;
  bool coupled = true;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

/// MC mean trajectories with y(0) ~ U(y0_lo, y0_hi).
[[nodiscard]] std::vector<std::vector<double>> simulate_trajectories(const ProblemFactory& factory, FracOrder beta,
                                                                     const TrajectoryOptions& options);

struct MemoryRow {
  double beta;
  std::size_t window;
  double test_mse;
};

/// Test MSE by (beta, w) with all other settings fixed. Throws DomainError
/// for an empty beta or lag list.
[[nodiscard]] std::vector<MemoryRow> memory_length_experiment(const ProblemFactory& factory,
                                                              std::span<const double> betas,
                                                              std::span<const std::size_t> lags,
                                                              const MlpConfig& config,
                                                              const TrajectoryOptions& options);

}  // namespace fracmc
