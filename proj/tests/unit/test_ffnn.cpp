#include <cmath>

#include "doctest.h"
#include "fracmc/catalog.hpp"
#include "fracmc/errors.hpp"
#include "fracmc/ffnn.hpp"
#include "fracmc/subordinator.hpp"

using namespace fracmc;

TEST_CASE("lag windows") {
  const std::vector<std::vector<double>> one{{1, 2, 3, 4}};
  const LagDataset d3 = build_lag_dataset(one, 3, {1.0, 0.0, 0.0});
  REQUIRE(d3.train.rows() == 1);
  CHECK(d3.train.row(0)[0] == 1);
  CHECK(d3.train.row(0)[2] == 3);
  CHECK(d3.train.targets[0] == 4);
  const LagDataset d1 = build_lag_dataset(one, 1, {1.0, 0.0, 0.0});
  CHECK(d1.train.rows() == 3);
  CHECK_THROWS_AS((void)build_lag_dataset(one, 4), DomainError);
}

TEST_CASE("splits are by whole trajectories") {
  std::vector<std::vector<double>> traj;
  for (int i = 0; i < 20; ++i) traj.push_back({double(i), i + 0.1, i + 0.2, i + 0.3, i + 0.4});
  const LagDataset d = build_lag_dataset(traj, 2);
  CHECK(d.train.rows() == 14 * 3);
  CHECK(d.validation.rows() == 3 * 3);
  CHECK(d.test.rows() == 3 * 3);
  // the test rows come from trajectories 17..19 only
  for (std::size_t r = 0; r < d.test.rows(); ++r) CHECK(d.test.row(r)[0] >= 17.0);
}

TEST_CASE("lag dataset from MC tables requires a uniform grid") {
  TrajectoryTable uneven;
  for (double t : {0.0, 1.0, 3.0}) uneven.rows.push_back({t, t, 0.0, std::nullopt, std::nullopt, false});
  const std::vector<TrajectoryTable> v{uneven};
  CHECK_THROWS_AS((void)build_lag_dataset(v, 1), DomainError);
}

TEST_CASE("backprop matches central differences") {
  const std::vector<std::vector<std::size_t>> shapes{{3, 10, 10, 10, 1}, {1, 4, 1}, {2, 5, 3, 1}, {5, 1}, {3, 7, 1}};
  std::uint64_t seed = 1;
  for (const auto& w : shapes)
    for (Activation a : {Activation::Tanh, Activation::Sigmoid}) {
      INFO("layers=" << w.size() << " seed=" << seed);
      CHECK(gradient_check(w, a, seed++, 20) < 1e-5);
    }
}

TEST_CASE("constant target is learned") {
  std::vector<std::vector<double>> traj(10, std::vector<double>(12, 0.7));
  for (auto& t : traj) t[0] = 0.5;  // keeps the input range non-degenerate
  MlpConfig c;
  c.window = 2;
  c.epochs = 1500;
  const LagDataset d = build_lag_dataset(traj, 2);
  const TrainResult r = train(c, d);
  CHECK(evaluate_mse(r.model, d.test) < 1e-6);
  const double window[] = {0.7, 0.7};
  CHECK(r.model.predict(window) == doctest::Approx(0.7).epsilon(1e-3));
}

TEST_CASE("mean-of-window target is learned to 1e-6") {
  RngStream rng(3, 3);
  std::vector<std::vector<double>> traj;
  for (int i = 0; i < 30; ++i) {
    std::vector<double> v{rng.uniform(), rng.uniform(), rng.uniform()};
    for (int k = 0; k < 20; ++k) v.push_back((v[v.size() - 1] + v[v.size() - 2] + v[v.size() - 3]) / 3.0 + 0.3 * rng.uniform() - 0.1);
    traj.push_back(v);
  }
  // targets are replaced with the exact window mean so a linear map fits
  LagDataset d = build_lag_dataset(traj, 3);
  for (LagRows* rows : {&d.train, &d.validation, &d.test})
    for (std::size_t r = 0; r < rows->rows(); ++r) {
      const auto x = rows->row(r);
      rows->targets[r] = (x[0] + x[1] + x[2]) / 3.0;
    }
  MlpConfig c;
  c.hidden = {};
  c.activation = Activation::Identity;
  c.epochs = 3000;
  const TrainResult r = train(c, d);
  CHECK(evaluate_mse(r.model, d.test) < 1e-6);
}

TEST_CASE("plain gradient descent on a linear problem never increases the loss") {
  RngStream rng(4, 4);
  std::vector<std::vector<double>> traj;
  for (int i = 0; i < 10; ++i) {
    std::vector<double> v;
    for (int k = 0; k < 15; ++k) v.push_back(rng.uniform());
    traj.push_back(v);
  }
  MlpConfig c;
  c.hidden = {};
  c.activation = Activation::Identity;
  c.momentum = 0.0;
  c.learning_rate = 0.05;
  c.epochs = 200;
  c.patience = 0;
  c.window = 2;
  const TrainResult r = train(c, build_lag_dataset(traj, 2));
  for (std::size_t e = 1; e < r.train_loss.size(); ++e) CHECK(r.train_loss[e] <= r.train_loss[e - 1] * (1 + 1e-12));
}

TEST_CASE("training is deterministic") {
  std::vector<std::vector<double>> traj;
  for (int i = 0; i < 8; ++i) {
    std::vector<double> v;
    for (int k = 0; k < 10; ++k) v.push_back(std::sin(0.3 * k + i));
    traj.push_back(v);
  }
  MlpConfig c;
  c.epochs = 200;
  c.batch_size = 7;
  const LagDataset d = build_lag_dataset(traj, 3);
  const TrainResult a = train(c, d), b = train(c, d);
  CHECK(a.model.net.params() == b.model.net.params());
  CHECK(a.train_loss == b.train_loss);
}

TEST_CASE("divergence is reported") {
  std::vector<std::vector<double>> traj;
  for (int i = 0; i < 8; ++i) {
    std::vector<double> v;
    for (int k = 0; k < 10; ++k) v.push_back(std::sin(0.3 * k + i));
    traj.push_back(v);
  }
  MlpConfig c;
  c.learning_rate = 50.0;
  c.momentum = 0.0;
  c.hidden = {};
  c.activation = Activation::Identity;
  c.epochs = 100;
  CHECK_THROWS_AS((void)train(c, build_lag_dataset(traj, 3)), DivergenceError);
}

TEST_CASE("rollout and persistence") {
  std::vector<std::vector<double>> traj;
  for (int i = 0; i < 8; ++i) {
    std::vector<double> v;
    for (int k = 0; k < 10; ++k) v.push_back(0.1 * k + 0.05 * i);
    traj.push_back(v);
  }
  MlpConfig c;
  c.epochs = 300;
  const TrainResult r = train(c, build_lag_dataset(traj, 3));
  const double w[] = {0.1, 0.2, 0.3};
  CHECK(predict_rollout(r.model, w, 0).empty());
  const auto one = predict_rollout(r.model, w, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == r.model.predict(w));
  CHECK(predict_rollout(r.model, w, 5).size() == 5);
  const double short_w[] = {0.1};
  CHECK_THROWS_AS((void)predict_rollout(r.model, short_w, 1), DomainError);

  const TrainedModel back = model_from_json(model_to_json(r.model));
  CHECK(back.net.params() == r.model.net.params());
  CHECK(back.net.widths() == r.model.net.widths());
  CHECK(back.predict(w) == r.model.predict(w));
  CHECK_THROWS_AS((void)model_from_json("{}"), DomainError);
  CHECK_THROWS_AS((void)model_from_json("not json"), DomainError);
}

TEST_CASE("memory experiment rejects empty inputs") {
  const ProblemFactory f = [](FracOrder b, double y0) {
    const Preset& p = find_preset("rc");
    auto prob = p.build(b, resolve_params(p, {}));
    prob.initial_conditions[0] = y0;
    return prob;
  };
  const std::vector<double> betas{1.0};
  const std::vector<std::size_t> none;
  CHECK_THROWS_AS((void)memory_length_experiment(f, betas, none, {}, {}), DomainError);
}

TEST_CASE("simulated trajectories start at y0 in range") {
  const ProblemFactory f = [](FracOrder b, double y0) {
    const Preset& p = find_preset("rc");
    auto prob = p.build(b, resolve_params(p, {}));
    prob.initial_conditions[0] = y0;
    return prob;
  };
  TrajectoryOptions o;
  o.count = 4;
  o.points = 10;
  o.m = 200;
  const auto t = simulate_trajectories(f, FracOrder(0.5), o);
  REQUIRE(t.size() == 4);
  for (const auto& v : t) {
    CHECK(v.size() == 10);
    CHECK(v[0] >= 0.0);
    CHECK(v[0] <= 1.0);
    CHECK(v[9] < v[0]);
  }
}
