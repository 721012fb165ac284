#include "fracmc/odeint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fracmc/errors.hpp"

namespace fracmc {
namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

void validate(const OdeSystem& sys, double t_end) {
  if (sys.dimension == 0 || sys.initial_state.size() != sys.dimension)
    throw DomainError("ode system: initial state size must equal dimension >= 1");
  if (!sys.rhs) throw DomainError("ode system: missing right-hand side");
  for (double v : sys.initial_state)
    if (!std::isfinite(v)) throw DomainError("ode system: initial state must be finite");
  if (!std::isfinite(sys.t0) || !std::isfinite(t_end) || t_end < sys.t0)
    throw DomainError("integrate: requires finite t_end >= t0");
}

}  // namespace

// Runs the stages and stores accepted steps.
class DenseBuilder {
 public:
  explicit DenseBuilder(const OdeSystem& sys) : sys_(sys), n_(sys.dimension) {
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &y_, &y1_, &tmp_, &err_}) v->assign(n_, 0.0);
    y_ = sys.initial_state;
    sol_.dim_ = n_;
    sol_.t_.push_back(sys.t0);
    sol_.y_.insert(sol_.y_.end(), y_.begin(), y_.end());
    call(sys.t0, y_, k1_);
  }

  // Trial step from (t_, y_) with size h; fills y1_ and k2..k7, returns error norm.
  double trial(double h, double rtol, double atol) {
    const double t = sol_.t_.back();
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y_[i] + h * a21 * k1_[i];
    call(t + c2 * h, tmp_, k2_);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
    call(t + c3 * h, tmp_, k3_);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
    call(t + c4 * h, tmp_, k4_);
    for (std::size_t i = 0; i < n_; ++i)
      tmp_[i] = y_[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
    call(t + c5 * h, tmp_, k5_);
    for (std::size_t i = 0; i < n_; ++i)
      tmp_[i] = y_[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] + a65 * k5_[i]);
    call(t + h, tmp_, k6_);
    for (std::size_t i = 0; i < n_; ++i)
      y1_[i] = y_[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] + a76 * k6_[i]);
    call(t + h, y1_, k7_);

    double sq = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      err_[i] = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] + e7 * k7_[i]);
      const double sk = atol + rtol * std::max(std::fabs(y_[i]), std::fabs(y1_[i]));
      const double r = err_[i] / sk;
      sq += r * r;
    }
    return std::sqrt(sq / static_cast<double>(n_));
  }

  void accept(double h, double t_new) {
    for (std::size_t i = 0; i < n_; ++i) {
      const double r2 = y1_[i] - y_[i];
      const double r3 = h * k1_[i] - r2;
      const double r4 = r2 - h * k7_[i] - r3;
      const double r5 =
          h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] + d6 * k6_[i] + d7 * k7_[i]);
      sol_.coeff_.insert(sol_.coeff_.end(), {r2, r3, r4, r5});
    }
    sol_.t_.push_back(t_new);
    sol_.y_.insert(sol_.y_.end(), y1_.begin(), y1_.end());
    y_.swap(y1_);
    k1_.swap(k7_);  // first-same-as-last
  }

  [[nodiscard]] double t() const { return sol_.t_.back(); }
  [[nodiscard]] const State& y() const { return y_; }
  [[nodiscard]] const State& f() const { return k1_; }
  void call(double t, const State& y, State& out) { sys_.rhs(t, y, out); }
  DenseSolution finish() { return std::move(sol_); }

 private:
  const OdeSystem& sys_;
  std::size_t n_;
  State k1_, k2_, k3_, k4_, k5_, k6_, k7_, y_, y1_, tmp_, err_;
  DenseSolution sol_;
};

namespace {

double rms_scaled(const State& v, const State& y, double rtol, double atol) {
  double sq = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = v[i] / (atol + rtol * std::fabs(y[i]));
    sq += r * r;
  }
  return std::sqrt(sq / static_cast<double>(v.size()));
}

// Starting step from the norms of y0, f0 and a finite-difference second derivative.
double initial_step(DenseBuilder& b, double span, double rtol, double atol) {
  const State& y0 = b.y();
  const State& f0 = b.f();
  const double d0 = rms_scaled(y0, y0, rtol, atol);
  const double d1n = rms_scaled(f0, y0, rtol, atol);
  double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
  h0 = std::min(h0, span);
  State y1(y0.size()), f1(y0.size());
  for (std::size_t i = 0; i < y0.size(); ++i) y1[i] = y0[i] + h0 * f0[i];
  b.call(b.t() + h0, y1, f1);
  for (std::size_t i = 0; i < y0.size(); ++i) f1[i] -= f0[i];
  const double d2 = rms_scaled(f1, y0, rtol, atol) / h0;
  const double dmax = std::max(d1n, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
  return std::min({100.0 * h0, h1, span});
}

}  // namespace

DenseSolution integrate(const OdeSystem& sys, double t_end, const IntegrateOptions& opts) {
  validate(sys, t_end);
  if (!(opts.rtol > 0.0) || !(opts.atol > 0.0)) throw DomainError("integrate: tolerances must be positive");
  DenseBuilder b(sys);
  if (t_end == sys.t0) return b.finish();

  double h = initial_step(b, t_end - sys.t0, opts.rtol, opts.atol);
  bool last_rejected = false;
  std::size_t steps = 0;
  while (b.t() < t_end) {
    if (steps++ >= opts.max_steps)
      throw IntegrationError("integrate: step limit exceeded", b.t());
    const double t = b.t();
    const double min_step = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(t));
    if (h < min_step) throw IntegrationError("integrate: step size underflow", t);
    const bool final_step = t + h >= t_end || t + 1.01 * h >= t_end;
    const double h_try = final_step ? t_end - t : h;
    const double err = b.trial(h_try, opts.rtol, opts.atol);
    if (!std::isfinite(err)) {
      h = 0.2 * h_try;
      last_rejected = true;
      continue;
    }
    double factor = err == 0.0 ? 10.0 : 0.9 * std::pow(err, -0.2);
    factor = std::clamp(factor, 0.2, 10.0);
    if (err <= 1.0) {
      b.accept(h_try, final_step ? t_end : t + h_try);
      if (last_rejected) factor = std::min(factor, 1.0);
      last_rejected = false;
      h = h_try * factor;
    } else {
      h = h_try * factor;
      last_rejected = true;
    }
  }
  return b.finish();
}

DenseSolution integrate(const OdeSystem& sys, double t_end, double rtol, double atol) {
  IntegrateOptions opts;
  opts.rtol = rtol;
  opts.atol = atol;
  return integrate(sys, t_end, opts);
}

DenseSolution integrate_fixed(const OdeSystem& sys, double t_end, std::size_t steps) {
  validate(sys, t_end);
  if (steps == 0) throw DomainError("integrate_fixed: steps must be >= 1");
  DenseBuilder b(sys);
  const double span = t_end - sys.t0;
  for (std::size_t s = 0; s < steps; ++s) {
    const double t_next = s + 1 == steps ? t_end : sys.t0 + span * static_cast<double>(s + 1) / steps;
    const double h = t_next - b.t();
    (void)b.trial(h, 1.0, 1.0);
    b.accept(h, t_next);
  }
  return b.finish();
}

std::size_t DenseSolution::locate(double t) const {
  if (!(t >= t_.front() && t <= t_.back()))
    throw DomainError("dense solution: query " + std::to_string(t) + " outside [" +
                      std::to_string(t_.front()) + ", " + std::to_string(t_.back()) + "]");
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  return static_cast<std::size_t>(it - t_.begin()) - 1;  // t_[i] <= t < t_[i+1], or the last knot
}

void DenseSolution::eval_in(std::size_t step, double t, std::span<double> out) const {
  if (step + 1 >= t_.size() || t == t_[step]) {
    std::copy_n(y_.begin() + static_cast<std::ptrdiff_t>(step * dim_), dim_, out.begin());
    return;
  }
  for (std::size_t c = 0; c < dim_; ++c) eval_component_in(step, t, c, out[c]);
}

void DenseSolution::eval_component_in(std::size_t step, double t, std::size_t c, double& out) const {
  if (step + 1 >= t_.size() || t == t_[step]) {
    out = y_[step * dim_ + c];
    return;
  }
  const double h = t_[step + 1] - t_[step];
  const double theta = (t - t_[step]) / h;
  const double theta1 = 1.0 - theta;
  const double* r = coeff_.data() + (step * dim_ + c) * 4;
  out = y_[step * dim_ + c] + theta * (r[0] + theta1 * (r[1] + theta * (r[2] + theta1 * r[3])));
}

void DenseSolution::eval(double t, std::span<double> out) const {
  if (out.size() != dim_) throw DomainError("dense solution: output size mismatch");
  eval_in(locate(t), t, out);
}

State DenseSolution::eval(double t) const {
  State out(dim_);
  eval(t, out);
  return out;
}

std::vector<double> DenseSolution::eval_component(std::span<const double> sorted_t, std::size_t c) const {
  if (c >= dim_) throw DomainError("dense solution: component out of range");
  std::vector<double> out(sorted_t.size());
  if (sorted_t.empty()) return out;
  if (!std::is_sorted(sorted_t.begin(), sorted_t.end()))
    throw DomainError("dense solution: query points must be sorted");
  (void)locate(sorted_t.front());
  (void)locate(sorted_t.back());
  std::size_t step = 0;
  const std::size_t last = t_.size() - 1;
  for (std::size_t q = 0; q < sorted_t.size(); ++q) {
    const double t = sorted_t[q];
    while (step < last && t_[step + 1] <= t) ++step;
    eval_component_in(step, t, c, out[q]);
  }
  return out;
}

std::vector<State> eval_at(const DenseSolution& sol, std::span<const double> query_points) {
  std::vector<State> out;
  out.reserve(query_points.size());
  if (query_points.empty()) return out;
  if (!std::is_sorted(query_points.begin(), query_points.end()))
    throw DomainError("eval_at: query points must be sorted");
  for (double t : query_points) out.push_back(sol.eval(t));
  return out;
}

}  // namespace fracmc
