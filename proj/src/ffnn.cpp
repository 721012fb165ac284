#include "fracmc/ffnn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "json.hpp"

#include "fracmc/errors.hpp"
#include "fracmc/subordinator.hpp"
#include "parallel.hpp"

namespace fracmc {
namespace {

using nlohmann::json;

double activate(Activation a, double z) {
  switch (a) {
    case Activation::Tanh: return std::tanh(z);
    case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-z));
    case Activation::Identity: return z;
  }
  return z;
}

// Derivative expressed through the activation value.
double activate_prime(Activation a, double y) {
  switch (a) {
    case Activation::Tanh: return 1.0 - y * y;
    case Activation::Sigmoid: return y * (1.0 - y);
    case Activation::Identity: return 1.0;
  }
  return 1.0;
}

LagRows normalized(const LagRows& rows, const Normalization& n) {
  LagRows out;
  out.window = rows.window;
  out.inputs.resize(rows.inputs.size());
  out.targets.resize(rows.targets.size());
  std::transform(rows.inputs.begin(), rows.inputs.end(), out.inputs.begin(), [&](double v) { return n.in(v); });
  std::transform(rows.targets.begin(), rows.targets.end(), out.targets.begin(), [&](double v) { return n.out(v); });
  return out;
}

LagRows subset(const LagRows& rows, std::span<const std::size_t> idx) {
  LagRows out;
  out.window = rows.window;
  out.inputs.reserve(idx.size() * rows.window);
  out.targets.reserve(idx.size());
  for (std::size_t r : idx) {
    const auto x = rows.row(r);
    out.inputs.insert(out.inputs.end(), x.begin(), x.end());
    out.targets.push_back(rows.targets[r]);
  }
  return out;
}

std::pair<double, double> padded_range(double lo, double hi) {
  if (!(hi > lo)) return {lo - 1.0, lo + 1.0};
  return {lo, hi};
}

bool is_uniform(std::span<const TrajectoryRow> rows) {
  if (rows.size() < 3) return true;
  const double h = rows[1].t - rows[0].t;
  for (std::size_t i = 2; i < rows.size(); ++i)
    if (std::fabs((rows[i].t - rows[i - 1].t) - h) > 1e-9 * std::max(1.0, std::fabs(rows[i].t))) return false;
  return true;
}

}  // namespace

std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::Tanh: return "tanh";
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Identity: return "identity";
  }
  return "tanh";
}

Activation parse_activation(std::string_view name) {
  if (name == "tanh") return Activation::Tanh;
  if (name == "sigmoid") return Activation::Sigmoid;
  if (name == "identity" || name == "linear") return Activation::Identity;
  throw DomainError("unknown activation: " + std::string(name));
}

void MlpConfig::validate() const {
  for (std::size_t h : hidden)
    if (h == 0) throw DomainError("mlp: layer widths must be positive");
  if (window < 1) throw DomainError("mlp: window must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw DomainError("mlp: learning rate must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw DomainError("mlp: momentum must be in [0, 1)");
  if (epochs == 0) throw DomainError("mlp: epochs must be >= 1");
}

void LagRows::append(std::span<const double> trajectory) {
  if (trajectory.size() < window + 1)
    throw DomainError("lag dataset: trajectory of length " + std::to_string(trajectory.size()) +
                      " is shorter than window + 1 = " + std::to_string(window + 1));
  for (std::size_t k = 0; k + window < trajectory.size(); ++k) {
    inputs.insert(inputs.end(), trajectory.begin() + static_cast<std::ptrdiff_t>(k),
                  trajectory.begin() + static_cast<std::ptrdiff_t>(k + window));
    targets.push_back(trajectory[k + window]);
  }
}

LagDataset build_lag_dataset(std::span<const std::vector<double>> trajectories, std::size_t window,
                             const LagSplits& splits) {
  if (window < 1) throw DomainError("lag dataset: window must be >= 1");
  if (splits.train < 0 || splits.validation < 0 || splits.test < 0 ||
      !(splits.train + splits.validation + splits.test > 0))
    throw DomainError("lag dataset: split fractions must be non-negative with a positive sum");
  const double total = splits.train + splits.validation + splits.test;
  const std::size_t n = trajectories.size();
  auto count = [&](double frac) { return static_cast<std::size_t>(std::llround(frac / total * static_cast<double>(n))); };
  std::size_t n_train = std::min(n, count(splits.train));
  std::size_t n_val = std::min(n - n_train, count(splits.validation));
  if (splits.test > 0 && n_train + n_val == n && n >= 3) {
    // keep at least one test trajectory
    if (n_val > 1) --n_val; else if (n_train > 1) --n_train;
  }
  LagDataset d;
  d.window = window;
  d.train.window = d.validation.window = d.test.window = window;
  for (std::size_t i = 0; i < n; ++i) {
    LagRows& dst = i < n_train ? d.train : i < n_train + n_val ? d.validation : d.test;
    dst.append(trajectories[i]);
  }
  return d;
}

LagDataset build_lag_dataset(std::span<const TrajectoryTable> trajectories, std::size_t window,
                             const LagSplits& splits) {
  std::vector<std::vector<double>> values;
  values.reserve(trajectories.size());
  for (const auto& tab : trajectories) {
    if (!is_uniform(tab.rows)) throw DomainError("lag dataset: trajectory grid is not uniform");
    std::vector<double> v;
    v.reserve(tab.rows.size());
    for (const auto& r : tab.rows) v.push_back(r.mc_mean);
    values.push_back(std::move(v));
  }
  return build_lag_dataset(values, window, splits);
}

Mlp::Mlp(std::vector<std::size_t> widths, Activation activation)
    : widths_(std::move(widths)), activation_(activation) {
  if (widths_.size() < 2) throw DomainError("mlp: need input and output widths");
  if (widths_.back() != 1) throw DomainError("mlp: output width must be 1");
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    if (widths_[l] == 0) throw DomainError("mlp: layer widths must be positive");
    offsets_.push_back(total);
    total += widths_[l + 1] * widths_[l] + widths_[l + 1];
  }
  offsets_.push_back(total);
  params_.assign(total, 0.0);
}

void Mlp::initialize(std::uint64_t seed) {
  RngStream rng(seed, 0);
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    const std::size_t in = widths_[l], out = widths_[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    double* w = params_.data() + offsets_[l];
    for (std::size_t k = 0; k < in * out; ++k) w[k] = limit * (2.0 * rng.uniform() - 1.0);
    std::fill(w + in * out, w + in * out + out, 0.0);
  }
}

double Mlp::forward(std::span<const double> x) const {
  if (x.size() != widths_.front()) throw DomainError("mlp: input has the wrong length");
  std::vector<double> a(x.begin(), x.end()), next;
  const std::size_t layers = widths_.size() - 1;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = widths_[l], out = widths_[l + 1];
    const double* w = params_.data() + offsets_[l];
    const double* b = w + in * out;
    next.assign(out, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      double z = b[o];
      for (std::size_t i = 0; i < in; ++i) z += w[o * in + i] * a[i];
      next[o] = l + 1 == layers ? z : activate(activation_, z);
    }
    a.swap(next);
  }
  return a[0];
}

double Mlp::loss_and_gradient(const LagRows& rows, std::vector<double>& grad) const {
  if (rows.window != widths_.front()) throw DomainError("mlp: dataset window does not match input width");
  grad.assign(params_.size(), 0.0);
  const std::size_t n = rows.rows();
  if (n == 0) return 0.0;
  const std::size_t layers = widths_.size() - 1;
  std::vector<std::vector<double>> act(layers + 1);
  for (std::size_t l = 0; l <= layers; ++l) act[l].resize(widths_[l]);
  std::vector<double> delta, prev;
  double loss = 0.0;
  const double scale = 2.0 / static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto x = rows.row(r);
    std::copy(x.begin(), x.end(), act[0].begin());
    for (std::size_t l = 0; l < layers; ++l) {
      const std::size_t in = widths_[l], out = widths_[l + 1];
      const double* w = params_.data() + offsets_[l];
      const double* b = w + in * out;
      for (std::size_t o = 0; o < out; ++o) {
        double z = b[o];
        for (std::size_t i = 0; i < in; ++i) z += w[o * in + i] * act[l][i];
        act[l + 1][o] = l + 1 == layers ? z : activate(activation_, z);
      }
    }
    const double err = act[layers][0] - rows.targets[r];
    loss += err * err;
    delta.assign(1, scale * err);
    for (std::size_t l = layers; l-- > 0;) {
      const std::size_t in = widths_[l], out = widths_[l + 1];
      const double* w = params_.data() + offsets_[l];
      double* gw = grad.data() + offsets_[l];
      double* gb = gw + in * out;
      for (std::size_t o = 0; o < out; ++o) {
        gb[o] += delta[o];
        for (std::size_t i = 0; i < in; ++i) gw[o * in + i] += delta[o] * act[l][i];
      }
      if (l == 0) break;
      prev.assign(in, 0.0);
      for (std::size_t o = 0; o < out; ++o)
        for (std::size_t i = 0; i < in; ++i) prev[i] += w[o * in + i] * delta[o];
      for (std::size_t i = 0; i < in; ++i) prev[i] *= activate_prime(activation_, act[l][i]);
      delta.swap(prev);
    }
  }
  return loss / static_cast<double>(n);
}

double Mlp::loss(const LagRows& rows) const {
  if (rows.rows() == 0) return 0.0;
  double acc = 0.0;
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    const double e = forward(rows.row(r)) - rows.targets[r];
    acc += e * e;
  }
  return acc / static_cast<double>(rows.rows());
}

double Normalization::in(double v) const { return 2.0 * (v - in_lo) / (in_hi - in_lo) - 1.0; }
double Normalization::out(double v) const { return 2.0 * (v - out_lo) / (out_hi - out_lo) - 1.0; }
double Normalization::out_inverse(double v) const { return out_lo + 0.5 * (v + 1.0) * (out_hi - out_lo); }

Normalization Normalization::fit(const LagRows& rows) {
  if (rows.rows() == 0) throw DomainError("normalization: empty dataset");
  const auto [ilo, ihi] = std::minmax_element(rows.inputs.begin(), rows.inputs.end());
  const auto [olo, ohi] = std::minmax_element(rows.targets.begin(), rows.targets.end());
  Normalization n;
  std::tie(n.in_lo, n.in_hi) = padded_range(*ilo, *ihi);
  std::tie(n.out_lo, n.out_hi) = padded_range(*olo, *ohi);
  return n;
}

double TrainedModel::predict(std::span<const double> window_values) const {
  if (window_values.size() != window) throw DomainError("predict: window has the wrong length");
  std::vector<double> x(window);
  for (std::size_t i = 0; i < window; ++i) x[i] = norm.in(window_values[i]);
  return norm.out_inverse(net.forward(x));
}

TrainResult train(const MlpConfig& config, const LagDataset& data) {
  config.validate();
  if (data.window != config.window) throw DomainError("train: dataset window differs from config window");
  if (data.train.rows() == 0) throw DomainError("train: empty training split");

  TrainResult res;
  res.model.window = config.window;
  res.model.norm = Normalization::fit(data.train);
  std::vector<std::size_t> widths{config.window};
  widths.insert(widths.end(), config.hidden.begin(), config.hidden.end());
  widths.push_back(1);
  res.model.net = Mlp(widths, config.activation);
  res.model.net.initialize(config.seed);

  const LagRows tr = normalized(data.train, res.model.norm);
  const LagRows va = normalized(data.validation, res.model.norm);
  const bool has_val = va.rows() > 0;

  std::vector<double>& p = res.model.net.params();
  std::vector<double> velocity(p.size(), 0.0), grad, best = p;
  double best_val = std::numeric_limits<double>::infinity();
  double initial = 0.0;
  int above = 0;

  const std::size_t n = tr.rows();
  const std::size_t batch = config.batch_size == 0 ? n : std::min(config.batch_size, n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  RngStream shuffle_rng(config.seed, 1);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const bool full = batch == n;
    const double train_loss = full ? res.model.net.loss_and_gradient(tr, grad) : res.model.net.loss(tr);
    const double val_loss = has_val ? res.model.net.loss(va) : train_loss;
    if (!std::isfinite(train_loss)) throw DivergenceError("train: loss became non-finite");
    if (epoch == 0) initial = train_loss;
    above = train_loss > 10.0 * initial ? above + 1 : 0;
    if (above >= 5) throw DivergenceError("train: loss exceeded 10x its initial value for 5 epochs");
    res.train_loss.push_back(train_loss);
    res.validation_loss.push_back(val_loss);
    if (val_loss < best_val) {
      best_val = val_loss;
      best = p;
      res.best_epoch = epoch;
    } else if (config.patience > 0 && epoch - res.best_epoch >= config.patience) {
      res.early_stopped = true;
      break;
    }
    if (!full) std::shuffle(order.begin(), order.end(), shuffle_rng);
    for (std::size_t start = 0; start < n; start += batch) {
      if (!full) {
        const LagRows part =
            subset(tr, std::span<const std::size_t>(order).subspan(start, std::min(batch, n - start)));
        res.model.net.loss_and_gradient(part, grad);
      }
      for (std::size_t k = 0; k < p.size(); ++k) {
        velocity[k] = config.momentum * velocity[k] - config.learning_rate * grad[k];
        p[k] += velocity[k];
      }
    }
  }
  // score the final iterate too
  const double last = has_val ? res.model.net.loss(va) : res.model.net.loss(tr);
  if (!(last < best_val)) p = best;
  return res;
}

double evaluate_mse(const TrainedModel& model, const LagRows& rows) {
  if (rows.rows() == 0) throw DomainError("evaluate_mse: empty dataset");
  double acc = 0.0;
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    const double e = model.predict(rows.row(r)) - rows.targets[r];
    acc += e * e;
  }
  return acc / static_cast<double>(rows.rows());
}

std::vector<double> predict_rollout(const TrainedModel& model, std::span<const double> seed_window,
                                    std::size_t steps) {
  if (seed_window.size() != model.window) throw DomainError("predict_rollout: window has the wrong length");
  std::vector<double> buf(seed_window.begin(), seed_window.end());
  std::vector<double> out;
  out.reserve(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    const double y = model.predict(std::span<const double>(buf).last(model.window));
    out.push_back(y);
    buf.push_back(y);
  }
  return out;
}

double gradient_check(const std::vector<std::size_t>& widths, Activation activation, std::uint64_t seed,
                      std::size_t points, double h) {
  Mlp net(widths, activation);
  RngStream rng(seed, 7);
  LagRows rows;
  rows.window = widths.front();
  for (std::size_t r = 0; r < 6; ++r) {
    for (std::size_t i = 0; i < rows.window; ++i) rows.inputs.push_back(2.0 * rng.uniform() - 1.0);
    rows.targets.push_back(2.0 * rng.uniform() - 1.0);
  }
  double worst = 0.0;
  std::vector<double> grad;
  for (std::size_t pt = 0; pt < points; ++pt) {
    for (double& v : net.params()) v = 2.0 * rng.uniform() - 1.0;
    net.loss_and_gradient(rows, grad);
    double diff = 0.0, ng = 0.0, nf = 0.0;
    for (std::size_t k = 0; k < grad.size(); ++k) {
      const double keep = net.params()[k];
      net.params()[k] = keep + h;
      const double up = net.loss(rows);
      net.params()[k] = keep - h;
      const double down = net.loss(rows);
      net.params()[k] = keep;
      const double fd = (up - down) / (2.0 * h);
      diff += (grad[k] - fd) * (grad[k] - fd);
      ng += grad[k] * grad[k];
      nf += fd * fd;
    }
    const double denom = std::sqrt(std::max(ng, nf));
    if (denom > 0.0) worst = std::max(worst, std::sqrt(diff) / denom);
  }
  return worst;
}

std::string model_to_json(const TrainedModel& model) {
  const Mlp& net = model.net;
  json layers = json::array();
  for (std::size_t l = 0; l + 1 < net.widths().size(); ++l) {
    const std::size_t in = net.widths()[l], out = net.widths()[l + 1];
    const double* w = net.params().data() + net.layer_offset(l);
    json rows = json::array();
    for (std::size_t o = 0; o < out; ++o) rows.push_back(std::vector<double>(w + o * in, w + (o + 1) * in));
    layers.push_back({{"weights", rows}, {"bias", std::vector<double>(w + in * out, w + in * out + out)}});
  }
  json doc{{"format", "fracmc-mlp"},
           {"version", 1},
           {"widths", net.widths()},
           {"activation", activation_name(net.activation())},
           {"window", model.window},
           {"normalization",
            {{"in_lo", model.norm.in_lo},
             {"in_hi", model.norm.in_hi},
             {"out_lo", model.norm.out_lo},
             {"out_hi", model.norm.out_hi}}},
           {"layers", layers}};
  return doc.dump(2);
}

TrainedModel model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("model: invalid JSON: ") + e.what());
  }
  try {
    if (doc.at("format") != "fracmc-mlp") throw DomainError("model: unexpected format tag");
    TrainedModel m;
    m.window = doc.at("window").get<std::size_t>();
    m.net = Mlp(doc.at("widths").get<std::vector<std::size_t>>(),
                parse_activation(doc.at("activation").get<std::string>()));
    if (m.net.widths().front() != m.window) throw DomainError("model: window does not match input width");
    const json& n = doc.at("normalization");
    m.norm = {n.at("in_lo").get<double>(), n.at("in_hi").get<double>(), n.at("out_lo").get<double>(),
              n.at("out_hi").get<double>()};
    const json& layers = doc.at("layers");
    if (layers.size() + 1 != m.net.widths().size()) throw DomainError("model: layer count mismatch");
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const std::size_t in = m.net.widths()[l], out = m.net.widths()[l + 1];
      double* w = m.net.params().data() + m.net.layer_offset(l);
      const auto rows = layers[l].at("weights").get<std::vector<std::vector<double>>>();
      const auto bias = layers[l].at("bias").get<std::vector<double>>();
      if (rows.size() != out || bias.size() != out) throw DomainError("model: layer shape mismatch");
      for (std::size_t o = 0; o < out; ++o) {
        if (rows[o].size() != in) throw DomainError("model: layer shape mismatch");
        std::copy(rows[o].begin(), rows[o].end(), w + o * in);
      }
      std::copy(bias.begin(), bias.end(), w + in * out);
    }
    return m;
  } catch (const json::exception& e) {
    throw DomainError(std::string("model: malformed document: ") + e.what());
  }
}

std::vector<std::vector<double>> simulate_trajectories(const ProblemFactory& factory, FracOrder beta,
                                                       const TrajectoryOptions& options) {
  if (options.count == 0 || options.points < 2) throw DomainError("trajectories: need count >= 1, points >= 2");
  if (!(options.y0_hi >= options.y0_lo)) throw DomainError("trajectories: y0 range is empty");
  const TimeGrid grid = TimeGrid::linspace(0.0, options.t_end, options.points);
  std::vector<std::vector<double>> out(options.count);
  detail::parallel_for(options.count, options.threads, [&](std::size_t i) {
    RngStream y0_rng(options.seed, (std::uint64_t{1} << 63) + i);
    const double y0 = options.y0_lo + (options.y0_hi - options.y0_lo) * y0_rng.uniform();
    const LinearFdeProblem prob = factory(beta, y0);
    McOptions mo;
    mo.coupled = options.coupled;
    const auto est = solve_mc(prob, grid, options.m, options.seed + 1 + i, mo);
    out[i].reserve(est.size());
    for (const auto& e : est) out[i].push_back(e.mean);
  });
  return out;
}

std::vector<MemoryRow> memory_length_experiment(const ProblemFactory& factory, std::span<const double> betas,
                                                std::span<const std::size_t> lags, const MlpConfig& config,
                                                const TrajectoryOptions& options) {
  if (betas.empty() || lags.empty()) throw DomainError("memory experiment: need at least one beta and one lag");
  std::vector<MemoryRow> rows;
  for (double b : betas) {
    const auto traj = simulate_trajectories(factory, FracOrder(b), options);
    for (std::size_t w : lags) {
      MlpConfig c = config;
      c.window = w;
      const LagDataset d = build_lag_dataset(traj, w);
      const TrainResult r = train(c, d);
      rows.push_back({b, w, evaluate_mse(r.model, d.test)});
    }
  }
  return rows;
}

}  // namespace fracmc
