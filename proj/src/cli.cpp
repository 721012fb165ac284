#include "fracmc/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fracmc/catalog.hpp"
#include "fracmc/errors.hpp"
#include "fracmc/ffnn.hpp"
#include "fracmc/mcsolver.hpp"
#include "fracmc/specfun.hpp"
#include "fracmc/subordinator.hpp"
#include "fracmc/wave.hpp"

namespace fracmc::cli {

using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return {buf, r.ptr};
}

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::string command;
  unsigned threads = 1;
  std::uint64_t seed = 42;
  std::string format = "csv";
  std::string output = "-";

  // solve
  std::string preset;
  double beta = 0.5;
  double t_max = 5.0;
  std::size_t points = 50;
  std::size_t m = 10'000;
  bool coupled = false;
  std::vector<std::string> params;
  std::vector<double> coeffs;
  std::vector<double> ics;
  std::string forcing = "none";
  double forcing_amp = 1.0;
  double forcing_rate = 1.0;

  // wave
  double c = 0.5;
  std::string profile = "gauss10";
  double x_min = -2.0;
  double x_max = 2.0;
  std::size_t nx = 81;
  double wave_t_max = 2.0;
  std::size_t nt = 5;

  // sample
  double t = 1.0;
  std::size_t sample_m = 1000;

  // ml
  double alpha = 1.0;
  std::vector<double> z;

  // transform
  std::string pair = "exp";
  double transform_t_max = 2.0;
  std::size_t transform_points = 20;
  std::size_t transform_m = 0;
  bool list_pairs = false;

  // ffnn
  std::string ffnn_preset = "third-order";
  std::string model;
  std::vector<double> window_values;
  std::size_t steps = 10;
  std::size_t window = 3;
  std::size_t epochs = 5000;
  double learning_rate = 1e-2;
  double momentum = 0.9;
  std::size_t patience = 1000;
  std::vector<std::size_t> hidden{10, 10, 10};
  std::string activation = "tanh";
  std::size_t trajectories = 50;
  std::size_t ffnn_points = 100;
  double ffnn_t_max = 5.0;
  std::size_t ffnn_m = 10'000;
  std::vector<double> betas{1.0, 0.5};
  std::vector<std::size_t> lags{1, 2, 3, 5};
};

// An exception that maps to exit code 1.
struct UsageError : DomainError {
  using DomainError::DomainError;
  [[nodiscard]] const char* kind() const noexcept override { return "usage"; }
};

std::uint64_t env_seed() {
  const char* s = std::getenv(kSeedEnv);
  if (s == nullptr || *s == '\0') return 42;
  std::uint64_t v = 0;
  const char* end = s + std::char_traits<char>::length(s);
  const auto r = std::from_chars(s, end, v);
  if (r.ec != std::errc() || r.ptr != end) throw UsageError(std::string(kSeedEnv) + " is not an unsigned integer");
  return v;
}

// --config: splice the JSON keys in as flags right after the subcommand
// token(s), so explicit flags given later win.
std::vector<std::string> config_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw UsageError("config file must hold a JSON object");
  std::vector<std::string> out;
  for (const auto& [key, value] : doc.items()) {
    if (key == "command" || key == "version" || key == "threads") continue;
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    auto scalar = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back(flag);
    } else if (value.is_array()) {
      for (const auto& v : value) {
        out.push_back(flag);
        out.push_back(scalar(v));
      }
    } else if (value.is_object()) {
      for (const auto& [k, v] : value.items()) {
        out.push_back(flag);
        out.push_back(k + "=" + scalar(v));
      }
    } else if (!value.is_null()) {
      out.push_back(flag);
      out.push_back(scalar(value));
    }
  }
  return out;
}

std::vector<std::string> splice_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file argument");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!path) return rest;
  static const std::vector<std::string> commands{"solve", "wave", "sample", "ml", "transform", "ffnn", "list-presets"};
  auto it = std::find_first_of(rest.begin(), rest.end(), commands.begin(), commands.end());
  if (it == rest.end()) throw UsageError("--config needs a subcommand");
  if (*it == "ffnn") {
    if (std::next(it) == rest.end()) throw UsageError("ffnn needs train, predict or memory-exp");
    ++it;
  }
  const auto extra = config_args(*path);
  rest.insert(std::next(it), extra.begin(), extra.end());
  return rest;
}

ParamMap parse_params(const std::vector<std::string>& kv) {
  ParamMap p;
  for (const auto& s : kv) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects key=value, got '" + s + "'");
    const std::string key = s.substr(0, eq);
    const std::string val = s.substr(eq + 1);
    double v = 0.0;
    const auto r = std::from_chars(val.data(), val.data() + val.size(), v);
    if (r.ec != std::errc() || r.ptr != val.data() + val.size())
      throw UsageError("--param " + key + ": '" + val + "' is not a number");
    p[key] = v;
  }
  return p;
}

Forcing::Kind parse_forcing(const std::string& s) {
  if (s == "none") return Forcing::Kind::None;
  if (s == "constant") return Forcing::Kind::Constant;
  if (s == "exp") return Forcing::Kind::Exp;
  if (s == "power") return Forcing::Kind::Power;
  if (s == "sin") return Forcing::Kind::Sin;
  if (s == "cos") return Forcing::Kind::Cos;
  throw UsageError("unknown forcing '" + s + "' (none, constant, exp, power, sin, cos)");
}

FracOrder order_of(double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw UsageError("--beta must lie in (0, 1]");
  return FracOrder(beta);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

std::string csv_number(std::optional<double> v) { return v ? format_number(*v) : std::string(); }

json json_number(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

class Output {
 public:
  explicit Output(std::string path) : path_(std::move(path)) {
    if (!to_stdout()) {
      std::ofstream probe(path_, std::ios::binary | std::ios::app);
      if (!probe) throw UsageError("cannot write output file: " + path_);
    }
  }
  [[nodiscard]] bool to_stdout() const { return path_ == "-" || path_.empty(); }
  [[nodiscard]] const std::string& path() const { return path_; }
  std::ostringstream& body() { return body_; }

  void commit(std::ostream& out) const {
    if (to_stdout()) {
      out << body_.str();
      return;
    }
    write_file(path_, body_.str());
  }
  // Sidecars are skipped on stdout.
  void sidecar(const std::string& suffix, const std::string& text) const {
    if (!to_stdout()) write_file(path_ + suffix, text);
  }

  static void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw UsageError("cannot write output file: " + path);
    f << text;
    if (!f.flush()) throw UsageError("failed writing output file: " + path);
  }

 private:
  std::string path_;
  std::ostringstream body_;
};

json base_echo(const RunConfig& c) {
  return json{{"command", c.command}, {"version", kVersion}, {"seed", c.seed}, {"format", c.format},
              {"output", c.output}};
}

void write_echo(const Output& o, const json& echo) { o.sidecar(".config.json", echo.dump(2) + "\n"); }

// ---- solve ----------------------------------------------------------------

int do_solve(const RunConfig& c, std::ostream& out) {
  const FracOrder beta = order_of(c.beta);
  if (c.points == 0) throw UsageError("--points must be >= 1");
  if (!(c.t_max > 0.0)) throw UsageError("--t-max must be positive");
  Output o(c.output);

  LinearFdeProblem prob;
  json echo = base_echo(c);
  if (!c.coeffs.empty()) {
    if (!c.preset.empty()) throw UsageError("--preset and --coeffs are mutually exclusive");
    if (!c.params.empty()) throw UsageError("--param applies to presets only");
    prob.coefficients = c.coeffs;
    prob.initial_conditions = c.ics;
    prob.forcing = Forcing{parse_forcing(c.forcing), c.forcing_amp, c.forcing_rate};
    prob.beta = beta;
    prob.validate();
    echo["coeffs"] = c.coeffs;
    echo["ics"] = c.ics;
    echo["forcing"] = c.forcing;
    echo["forcing-amp"] = c.forcing_amp;
    echo["forcing-rate"] = c.forcing_rate;
  } else {
    const Preset& p = find_preset(c.preset.empty() ? "rc" : c.preset);
    const ParamMap params = resolve_params(p, parse_params(c.params));
    prob = p.build(beta, params);
    echo["preset"] = p.name;
    echo["param"] = params;
  }
  echo["beta"] = c.beta;
  echo["t-max"] = c.t_max;
  echo["points"] = c.points;
  echo["m"] = c.m;
  echo["coupled"] = c.coupled;

  const TimeGrid grid = TimeGrid::uniform(c.t_max, c.points);
  McOptions opts;
  opts.coupled = c.coupled;
  opts.threads = c.threads;
  const auto mc = solve_mc(prob, grid, c.m, c.seed, opts);
  const TrajectoryTable table = compare(mc, solve_closed_form(prob, grid));

  if (c.format == "csv") {
    o.body() << "t,mc_mean,mc_stderr,closed_form,abs_err\n";
    for (const auto& r : table.rows)
      o.body() << format_number(r.t) << ',' << format_number(r.mc_mean) << ',' << format_number(r.mc_stderr) << ','
               << csv_number(r.closed_form) << ',' << csv_number(r.abs_err) << '\n';
  } else {
    json rows = json::array();
    for (const auto& r : table.rows)
      rows.push_back({{"t", r.t},
                      {"mc_mean", r.mc_mean},
                      {"mc_stderr", r.mc_stderr},
                      {"closed_form", json_number(r.closed_form)},
                      {"abs_err", json_number(r.abs_err)}});
    o.body() << json{{"config", echo}, {"equation", prob.label}, {"forcing", prob.forcing.describe()},
                     {"forcing_transformed", prob.forcing.describe_transformed()}, {"rows", rows}}
                    .dump(2)
             << '\n';
  }
  o.commit(out);
  write_echo(o, echo);
  return 0;
}

// ---- wave -----------------------------------------------------------------

int do_wave(const RunConfig& c, std::ostream& out) {
  const FracOrder beta = order_of(c.beta);
  if (c.nt < 1) throw UsageError("--nt must be >= 1");
  if (!(c.wave_t_max > 0.0) && c.nt > 1) throw UsageError("--t-max must be positive");
  Output o(c.output);
  const WaveProfile& prof = find_profile(c.profile);
  const WaveProblem prob = WaveProblem::from_profile(prof, c.c, beta);
  WaveGridSpec spec;
  spec.x_min = c.x_min;
  spec.x_max = c.x_max;
  spec.nx = c.nx;
  spec.t = c.nt == 1 ? TimeGrid({c.wave_t_max}) : TimeGrid::linspace(0.0, c.wave_t_max, c.nt);
  const FieldGrid field = solve_wave(prob, spec, c.m, c.seed, c.threads);

  json echo = base_echo(c);
  echo["beta"] = c.beta;
  echo["c"] = c.c;
  echo["profile"] = c.profile;
  echo["m"] = c.m;
  echo["x-min"] = c.x_min;
  echo["x-max"] = c.x_max;
  echo["nx"] = c.nx;
  echo["t-max"] = c.wave_t_max;
  echo["nt"] = c.nt;
  const json header{{"beta", c.beta}, {"c", c.c},   {"m", c.m},   {"seed", c.seed},
                    {"f_name", prof.name}, {"f", prof.formula}, {"nx", c.nx}, {"nt", c.nt},
                    {"max_principle", max_principle_check(field)}};

  if (c.format == "csv") {
    o.body() << "x,t,u,stderr\n";
    for (std::size_t it = 0; it < field.t.size(); ++it)
      for (std::size_t ix = 0; ix < field.x.size(); ++ix)
        o.body() << format_number(field.x[ix]) << ',' << format_number(field.t[it]) << ','
                 << format_number(field.at(it, ix)) << ',' << format_number(field.se(it, ix)) << '\n';
  } else {
    json cells = json::array();
    for (std::size_t it = 0; it < field.t.size(); ++it)
      for (std::size_t ix = 0; ix < field.x.size(); ++ix)
        cells.push_back({{"x", field.x[ix]}, {"t", field.t[it]}, {"u", field.at(it, ix)}, {"stderr", field.se(it, ix)}});
    o.body() << json{{"header", header}, {"cells", cells}}.dump(2) << '\n';
  }
  o.commit(out);
  o.sidecar(".header.json", header.dump(2) + "\n");
  write_echo(o, echo);
  return 0;
}

// ---- sample ---------------------------------------------------------------

int do_sample(const RunConfig& c, std::ostream& out) {
  const FracOrder beta = order_of(c.beta);
  if (!(c.t > 0.0) || !std::isfinite(c.t)) throw UsageError("--t must be positive");
  if (c.sample_m == 0) throw UsageError("--m must be >= 1");
  Output o(c.output);
  const auto batches = sample_grid(beta, TimeGrid({c.t}), c.sample_m, c.seed, false, c.threads);
  const auto& s = batches.front().samples;
  json echo = base_echo(c);
  echo["beta"] = c.beta;
  echo["t"] = c.t;
  echo["m"] = c.sample_m;
  if (c.format == "csv") {
    o.body() << "i,T\n";
    for (std::size_t j = 0; j < s.size(); ++j) o.body() << j << ',' << format_number(s[j]) << '\n';
  } else {
    o.body() << json{{"config", echo}, {"samples", s}}.dump(2) << '\n';
  }
  o.commit(out);
  write_echo(o, echo);
  return 0;
}

// ---- ml -------------------------------------------------------------------

int do_ml(const RunConfig& c, std::ostream& out) {
  if (c.z.empty()) throw UsageError("ml needs at least one --z value");
  Output o(c.output);
  const MlParams p(c.beta, c.alpha);
  json echo = base_echo(c);
  echo["beta"] = c.beta;
  echo["alpha"] = c.alpha;
  echo["z"] = c.z;
  std::vector<double> values;
  values.reserve(c.z.size());
  for (double z : c.z) values.push_back(mittag_leffler(p, z));
  if (c.format == "csv") {
    o.body() << "z,value\n";
    for (std::size_t i = 0; i < c.z.size(); ++i) o.body() << format_number(c.z[i]) << ',' << format_number(values[i]) << '\n';
  } else {
    json rows = json::array();
    for (std::size_t i = 0; i < c.z.size(); ++i) rows.push_back({{"z", c.z[i]}, {"value", values[i]}});
    o.body() << json{{"config", echo}, {"rows", rows}}.dump(2) << '\n';
  }
  o.commit(out);
  write_echo(o, echo);
  return 0;
}

// ---- transform ------------------------------------------------------------

int do_transform(const RunConfig& c, std::ostream& out) {
  Output o(c.output);
  json echo = base_echo(c);
  if (c.list_pairs) {
    echo["list"] = true;
    if (c.format == "csv") {
      o.body() << "name,binomial\n";
      for (const auto& p : transform_pairs()) o.body() << csv_field(p.name) << ',' << (p.binomial ? 1 : 0) << '\n';
    } else {
      json rows = json::array();
      for (const auto& p : transform_pairs()) rows.push_back({{"name", p.name}, {"binomial", p.binomial}});
      o.body() << rows.dump(2) << '\n';
    }
    o.commit(out);
    write_echo(o, echo);
    return 0;
  }
  const FracOrder beta = order_of(c.beta);
  const TransformPair& pair = find_pair(c.pair);
  if (c.transform_m == 1) throw UsageError("--m must be 0 (no Monte Carlo) or >= 2");
  const TimeGrid grid = TimeGrid::uniform(c.transform_t_max, c.transform_points);
  echo["pair"] = pair.name;
  echo["beta"] = c.beta;
  echo["t-max"] = c.transform_t_max;
  echo["points"] = c.transform_points;
  echo["m"] = c.transform_m;

  std::vector<std::optional<McEstimate>> mc(grid.size());
  if (c.transform_m >= 2) {
    const auto batches = sample_grid(beta, grid, c.transform_m, c.seed, false, c.threads);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      std::vector<double> v(batches[i].samples.size());
      std::transform(batches[i].samples.begin(), batches[i].samples.end(), v.begin(), pair.f);
      mc[i] = estimate_mean(grid[i], v);
    }
  }
  const bool with_mc = c.transform_m >= 2;
  if (c.format == "csv") {
    o.body() << "t,f,f_beta" << (with_mc ? ",mc_mean,mc_stderr" : "") << '\n';
    for (std::size_t i = 0; i < grid.size(); ++i) {
      o.body() << format_number(grid[i]) << ',' << format_number(pair.f(grid[i])) << ','
               << format_number(eval_pair(pair, beta, grid[i]));
      if (with_mc) o.body() << ',' << format_number(mc[i]->mean) << ',' << format_number(mc[i]->std_error);
      o.body() << '\n';
    }
  } else {
    json rows = json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      json r{{"t", grid[i]}, {"f", pair.f(grid[i])}, {"f_beta", eval_pair(pair, beta, grid[i])}};
      if (with_mc) {
        r["mc_mean"] = mc[i]->mean;
        r["mc_stderr"] = mc[i]->std_error;
      }
      rows.push_back(r);
    }
    o.body() << json{{"config", echo}, {"rows", rows}}.dump(2) << '\n';
  }
  o.commit(out);
  write_echo(o, echo);
  return 0;
}

// ---- ffnn -----------------------------------------------------------------

ProblemFactory ffnn_factory(const RunConfig& c) {
  const Preset& p = find_preset(c.ffnn_preset);
  const ParamMap params = resolve_params(p, parse_params(c.params));
  return [&p, params](FracOrder b, double y0) {
    LinearFdeProblem prob = p.build(b, params);
    prob.initial_conditions.at(0) = y0;
    prob.closed_form = nullptr;
    return prob;
  };
}

MlpConfig mlp_config(const RunConfig& c) {
  MlpConfig m;
  m.hidden = c.hidden;
  m.activation = parse_activation(c.activation);
  m.learning_rate = c.learning_rate;
  m.momentum = c.momentum;
  m.epochs = c.epochs;
  m.window = c.window;
  m.patience = c.patience;
  m.seed = c.seed;
  m.validate();
  return m;
}

TrajectoryOptions trajectory_options(const RunConfig& c) {
  TrajectoryOptions t;
  t.count = c.trajectories;
  t.points = c.ffnn_points;
  t.t_end = c.ffnn_t_max;
  t.m = c.ffnn_m;
  t.seed = c.seed;
  t.threads = c.threads;
  return t;
}

json ffnn_echo(const RunConfig& c) {
  json echo = base_echo(c);
  echo["preset"] = c.ffnn_preset;
  echo["param"] = parse_params(c.params);
  echo["window"] = c.window;
  echo["epochs"] = c.epochs;
  echo["learning-rate"] = c.learning_rate;
  echo["momentum"] = c.momentum;
  echo["patience"] = c.patience;
  echo["hidden"] = c.hidden;
  echo["activation"] = c.activation;
  echo["trajectories"] = c.trajectories;
  echo["points"] = c.ffnn_points;
  echo["t-max"] = c.ffnn_t_max;
  echo["m"] = c.ffnn_m;
  return echo;
}

int do_ffnn_train(const RunConfig& c, std::ostream& out) {
  const FracOrder beta = order_of(c.beta);
  Output o(c.output);
  const MlpConfig cfg = mlp_config(c);
  const auto traj = simulate_trajectories(ffnn_factory(c), beta, trajectory_options(c));
  const LagDataset data = build_lag_dataset(traj, c.window);
  const TrainResult res = train(cfg, data);
  json echo = ffnn_echo(c);
  echo["beta"] = c.beta;

  o.body() << model_to_json(res.model) << '\n';
  o.commit(out);
  std::ostringstream loss;
  loss << "epoch,train_loss,validation_loss\n";
  for (std::size_t e = 0; e < res.train_loss.size(); ++e)
    loss << e << ',' << format_number(res.train_loss[e]) << ',' << format_number(res.validation_loss[e]) << '\n';
  o.sidecar(".loss.csv", loss.str());
  const json summary{{"train_mse", evaluate_mse(res.model, data.train)},
                     {"validation_mse", data.validation.rows() ? json(evaluate_mse(res.model, data.validation)) : json()},
                     {"test_mse", data.test.rows() ? json(evaluate_mse(res.model, data.test)) : json()},
                     {"best_epoch", res.best_epoch},
                     {"epochs_run", res.train_loss.size()},
                     {"early_stopped", res.early_stopped}};
  o.sidecar(".summary.json", summary.dump(2) + "\n");
  write_echo(o, echo);
  if (!o.to_stdout()) out << summary.dump() << '\n';
  return 0;
}

int do_ffnn_predict(const RunConfig& c, std::ostream& out) {
  if (c.model.empty()) throw UsageError("predict needs --model");
  std::ifstream in(c.model, std::ios::binary);
  if (!in) throw UsageError("cannot read model file: " + c.model);
  std::stringstream text;
  text << in.rdbuf();
  const TrainedModel model = model_from_json(text.str());
  Output o(c.output);
  const auto ys = predict_rollout(model, c.window_values, c.steps);
  json echo = base_echo(c);
  echo["model"] = c.model;
  echo["window-values"] = c.window_values;
  echo["steps"] = c.steps;
  if (c.format == "csv") {
    o.body() << "step,value\n";
    for (std::size_t k = 0; k < ys.size(); ++k) o.body() << k + 1 << ',' << format_number(ys[k]) << '\n';
  } else {
    o.body() << json{{"config", echo}, {"values", ys}}.dump(2) << '\n';
  }
  o.commit(out);
  write_echo(o, echo);
  return 0;
}

int do_ffnn_memory(const RunConfig& c, std::ostream& out) {
  for (double b : c.betas) order_of(b);
  Output o(c.output);
  const auto rows = memory_length_experiment(ffnn_factory(c), c.betas, c.lags, mlp_config(c), trajectory_options(c));
  json echo = ffnn_echo(c);
  echo["betas"] = c.betas;
  echo["lags"] = c.lags;
  if (c.format == "csv") {
    o.body() << "beta,window,test_mse\n";
    for (const auto& r : rows) o.body() << format_number(r.beta) << ',' << r.window << ',' << format_number(r.test_mse) << '\n';
  } else {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back({{"beta", r.beta}, {"window", r.window}, {"test_mse", r.test_mse}});
    o.body() << json{{"config", echo}, {"rows", arr}}.dump(2) << '\n';
  }
  o.commit(out);
  write_echo(o, echo);
  return 0;
}

// ---- list-presets ---------------------------------------------------------

int do_list(const RunConfig& c, std::ostream& out) {
  Output o(c.output);
  if (c.format == "csv") {
    o.body() << "name,equation,ode,defaults,reference\n";
    for (const auto& p : presets()) {
      std::string defaults;
      for (const auto& d : p.defaults) {
        if (!defaults.empty()) defaults += ';';
        defaults += d.name + '=' + format_number(d.value);
      }
      o.body() << csv_field(p.name) << ',' << csv_field(p.equation) << ',' << csv_field(p.ode) << ','
               << csv_field(defaults) << ',' << csv_field(p.reference) << '\n';
    }
  } else {
    json arr = json::array();
    for (const auto& p : presets()) {
      json defaults = json::array();
      for (const auto& d : p.defaults) defaults.push_back({{"name", d.name}, {"value", d.value}, {"description", d.description}});
      arr.push_back({{"name", p.name}, {"equation", p.equation}, {"ode", p.ode}, {"reference", p.reference},
                     {"defaults", defaults}});
    }
    o.body() << arr.dump(2) << '\n';
  }
  o.commit(out);
  write_echo(o, base_echo(c));
  return 0;
}

// ---- parser ---------------------------------------------------------------

void add_common(CLI::App* a, RunConfig& c) {
  a->add_option("--threads", c.threads, "Worker threads; results do not depend on it")->check(CLI::Range(1u, 1024u));
  a->add_option("--seed", c.seed, std::string("Random seed (default from ") + kSeedEnv + ")");
  a->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  a->add_option("--output,-o", c.output, "Output file, '-' for stdout");
  a->add_option("--config", "JSON file with the same keys as the long flags");
}

template <class T>
CLI::Option* add_list(CLI::App* a, const std::string& name, std::vector<T>& v, const std::string& help) {
  return a->add_option(name, v, help)->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
}

int dispatch(std::vector<std::string> args, std::ostream& out) {
  RunConfig c;
  c.seed = env_seed();
  CLI::App app{"Monte Carlo solver for sequential-Caputo fractional differential equations", "fracmc"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", kVersion);

  auto* solve = app.add_subcommand("solve", "Monte Carlo trajectory of a preset or custom linear problem");
  add_common(solve, c);
  solve->add_option("--preset", c.preset, "Preset name (default rc)");
  solve->add_option("--beta", c.beta, "Fractional order in (0, 1]");
  solve->add_option("--t-max", c.t_max, "Grid end; points are t_max k/n, k = 1..n");
  solve->add_option("--points", c.points, "Number of grid points");
  solve->add_option("--m", c.m, "Replicates per grid point")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
  solve->add_flag("--coupled", c.coupled, "Share one base draw per replicate across the grid");
  solve->add_option("--param", c.params, "Preset parameter key=value")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  add_list(solve, "--coeffs", c.coeffs, "Custom problem: a_1..a_{n+1}");
  add_list(solve, "--ics", c.ics, "Custom problem: z(0), ..., z^{(n-1)}(0)");
  solve->add_option("--forcing", c.forcing, "Custom ODE forcing: none|constant|exp|power|sin|cos");
  solve->add_option("--forcing-amp", c.forcing_amp, "Forcing amplitude");
  solve->add_option("--forcing-rate", c.forcing_rate, "Forcing rate (exponent for power)");

  auto* wave = app.add_subcommand("wave", "Fractional d'Alembert field on an x-t grid");
  add_common(wave, c);
  wave->add_option("--beta", c.beta, "Fractional order in (0, 1]");
  wave->add_option("--c", c.c, "Wave speed");
  wave->add_option("--profile", c.profile, "Initial profile: gauss10|gauss|sech|triangle|const");
  wave->add_option("--m", c.m, "Replicates per time slice")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
  wave->add_option("--x-min", c.x_min, "Left end of the x grid");
  wave->add_option("--x-max", c.x_max, "Right end of the x grid");
  wave->add_option("--nx", c.nx, "Number of x points");
  wave->add_option("--t-max", c.wave_t_max, "Last time slice");
  wave->add_option("--nt", c.nt, "Number of time slices on [0, t_max]");

  auto* sample = app.add_subcommand("sample", "Draws of the inverse stable time T_beta(t)");
  add_common(sample, c);
  sample->add_option("--beta", c.beta, "Fractional order in (0, 1]");
  sample->add_option("--t", c.t, "Time t > 0");
  sample->add_option("--m", c.sample_m, "Number of draws");

  auto* ml = app.add_subcommand("ml", "Mittag-Leffler function E_{beta,alpha}(z)");
  add_common(ml, c);
  ml->add_option("--beta", c.beta, "beta > 0");
  ml->add_option("--alpha", c.alpha, "alpha > 0");
  add_list(ml, "--z", c.z, "Arguments (repeat or comma-separate)")->allow_extra_args(false);

  auto* tr = app.add_subcommand("transform", "Tabulated transform pairs f -> f_beta");
  add_common(tr, c);
  tr->add_flag("--list", c.list_pairs, "List the pair names");
  tr->add_option("--pair", c.pair, "Pair name");
  tr->add_option("--beta", c.beta, "Fractional order in (0, 1]");
  tr->add_option("--t-max", c.transform_t_max, "Grid end");
  tr->add_option("--points", c.transform_points, "Number of grid points");
  tr->add_option("--m", c.transform_m, "Monte Carlo replicates for a cross-check (0: none)");

  auto* ffnn = app.add_subcommand("ffnn", "Feedforward surrogate of MC trajectories");
  ffnn->require_subcommand(1);
  auto add_training = [&](CLI::App* a) {
    a->add_option("--preset", c.ffnn_preset, "Preset; y0 replaces its first initial value");
    a->add_option("--param", c.params, "Preset parameter key=value")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    a->add_option("--window", c.window, "Lag window w");
    a->add_option("--epochs", c.epochs, "Training epochs");
    a->add_option("--learning-rate", c.learning_rate, "Gradient descent rate");
    a->add_option("--momentum", c.momentum, "Momentum in [0, 1)");
    a->add_option("--patience", c.patience, "Early stop after this many epochs without improvement (0: off)");
    add_list(a, "--hidden", c.hidden, "Hidden layer widths");
    a->add_option("--activation", c.activation, "tanh|sigmoid|identity");
    a->add_option("--trajectories", c.trajectories, "Number of MC trajectories");
    a->add_option("--points", c.ffnn_points, "Points per trajectory on [0, t_max]");
    a->add_option("--t-max", c.ffnn_t_max, "Trajectory end time");
    a->add_option("--m", c.ffnn_m, "Replicates per trajectory (coupled)");
  };
  auto* ftrain = ffnn->add_subcommand("train", "Train on simulated trajectories; writes the model JSON");
  add_common(ftrain, c);
  add_training(ftrain);
  ftrain->add_option("--beta", c.beta, "Fractional order in (0, 1]");
  auto* fpred = ffnn->add_subcommand("predict", "Autoregressive rollout of a saved model");
  add_common(fpred, c);
  fpred->add_option("--model", c.model, "Model JSON file")->required();
  add_list(fpred, "--window-values", c.window_values, "Seed window, oldest first")->required();
  fpred->add_option("--steps", c.steps, "Number of predicted steps");
  auto* fmem = ffnn->add_subcommand("memory-exp", "Test MSE by (beta, window)");
  add_common(fmem, c);
  add_training(fmem);
  add_list(fmem, "--betas", c.betas, "Orders to compare");
  add_list(fmem, "--lags", c.lags, "Window lengths to compare");

  auto* list = app.add_subcommand("list-presets", "Preset problems and their defaults");
  add_common(list, c);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, out);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    throw UsageError(msg.empty() ? e.get_name() : msg);
  }

  const std::pair<CLI::App*, int (*)(const RunConfig&, std::ostream&)> table[] = {
      {solve, do_solve},          {wave, do_wave},           {sample, do_sample},
      {ml, do_ml},                {tr, do_transform},        {ftrain, do_ffnn_train},
      {fpred, do_ffnn_predict},   {fmem, do_ffnn_memory},    {list, do_list},
  };
  for (const auto& [sub, fn] : table) {
    if (!sub->parsed()) continue;
    c.command = sub->get_parent() == ffnn ? "ffnn " + sub->get_name() : sub->get_name();
    return fn(c, out);
  }
  throw UsageError("no subcommand given");
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  auto fail = [&](const char* kind, const std::string& message, int code, std::optional<double> last_good = {}) {
    json e{{"error", kind}, {"message", message}, {"exit_code", code}};
    if (last_good) e["last_good_time"] = *last_good;
    err << e.dump() << '\n';
    return code;
  };
  try {
    return dispatch(splice_config(std::move(args)), out);
  } catch (const IntegrationError& e) {
    return fail(e.kind(), e.what(), 2, e.last_good_time());
  } catch (const Error& e) {
    return fail(e.kind(), e.what(), e.numerical() ? 2 : 1);
  } catch (const std::bad_alloc&) {
    return fail("memory", "out of memory", 2);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 2);
  }
}

}  // namespace fracmc::cli
