#include "elastica/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>

namespace elastica::lbfgs {
namespace {

struct Pair {
  Vector s;
  Vector y;
  double rho;
};

struct Probe {
  double alpha = 0.0;
  double f = 0.0;
  double d = 0.0;  // directional derivative along p
  Vector x;
  Vector g;
};

// Minimiser of the cubic through (a, fa, da) and (b, fb, db), kept away from
// the ends of the interval.
double cubic_step(const Probe& a, const Probe& b) {
  const double d1 = a.d + b.d - 3 * (a.f - b.f) / (a.alpha - b.alpha);
  const double disc = d1 * d1 - a.d * b.d;
  const double lo = std::min(a.alpha, b.alpha), hi = std::max(a.alpha, b.alpha);
  double t = 0.5 * (lo + hi);
  if (disc >= 0 && std::isfinite(b.f)) {
    const double d2 = std::copysign(std::sqrt(disc), b.alpha - a.alpha);
    t = b.alpha - (b.alpha - a.alpha) * (b.d + d2 - d1) / (b.d - a.d + 2 * d2);
  }
  const double margin = 0.1 * (hi - lo);
  if (!std::isfinite(t) || t < lo + margin || t > hi - margin) t = 0.5 * (lo + hi);
  return t;
}

class StrongWolfe {
 public:
  StrongWolfe(const Objective& fun, const Vector& x, double f0, const Vector& g0, const Vector& p,
              const Options& opts)
      : fun_(fun), x_(x), p_(p), opts_(opts), f0_(f0), d0_(g0.dot(p)) {}

  int evaluations() const { return evaluations_; }

  // Returns the accepted point, or nullopt when no point with sufficient
  // decrease was found.
  std::optional<Probe> run() {
    Probe prev{0.0, f0_, d0_, {}, {}};
    double step = 1.0;
    for (int k = 0; k < opts_.max_line_search; ++k) {
      Probe cur = eval(step);
      if (!sufficient(cur) || (k > 0 && worse(cur, prev))) return zoom(std::move(prev), std::move(cur));
      if (std::abs(cur.d) <= -opts_.c2 * d0_) return cur;
      if (cur.d >= 0) return zoom(std::move(cur), std::move(prev));
      prev = std::move(cur);
      step *= 2.0;
    }
    return prev.alpha > 0 ? std::optional<Probe>(std::move(prev)) : std::nullopt;
  }

 private:
  Probe eval(double alpha) {
    Probe pr;
    pr.alpha = alpha;
    pr.x = x_ + alpha * p_;
    pr.g.resize(x_.size());
    pr.f = fun_(pr.x, pr.g);
    pr.d = pr.g.dot(p_);
    ++evaluations_;
    return pr;
  }

  bool in_band(const Probe& pr) const {
    return std::isfinite(pr.f) && pr.f <= f0_ + opts_.round_off * std::abs(f0_);
  }

  // Armijo, or its derivative form when f is within round-off of f0.
  bool sufficient(const Probe& pr) const {
    if (!std::isfinite(pr.f)) return false;
    if (pr.f <= f0_ + opts_.c1 * pr.alpha * d0_) return true;
    return in_band(pr) && pr.d <= (2 * opts_.c1 - 1) * d0_;
  }

  // cur is no improvement over ref. Inside the round-off band function
  // values carry no information and only the slope is used.
  bool worse(const Probe& cur, const Probe& ref) const {
    if (in_band(cur) && in_band(ref)) return cur.d >= 0;
    return cur.f >= ref.f;
  }

  // lo satisfies sufficient decrease and has the lowest f seen so far.
  std::optional<Probe> zoom(Probe lo, Probe hi) {
    for (int k = 0; k < opts_.max_line_search; ++k) {
      if (std::abs(hi.alpha - lo.alpha) <= 1e-15 * std::max(1.0, lo.alpha)) break;
      Probe cur = eval(cubic_step(lo, hi));
      if (!sufficient(cur)) {
        hi = std::move(cur);
        continue;
      }
      if (std::abs(cur.d) <= -opts_.c2 * d0_) return cur;
      if (in_band(cur) && in_band(lo)) {
        // Bisect on the sign of the slope.
        if (cur.d * (hi.alpha - lo.alpha) >= 0) hi = std::move(cur); else lo = std::move(cur);
        continue;
      }
      if (cur.f >= lo.f) {
        hi = std::move(cur);
        continue;
      }
      if (cur.d * (hi.alpha - lo.alpha) >= 0) hi = std::move(lo);
      lo = std::move(cur);
    }
    // Curvature condition not met; still accept a point that decreased f.
    if (lo.alpha > 0 && (lo.f < f0_ || (in_band(lo) && lo.d < 0))) return lo;
    return std::nullopt;
  }

  const Objective& fun_;
  const Vector& x_;
  const Vector& p_;
  const Options& opts_;
  double f0_;
  double d0_;
  int evaluations_ = 0;
};

}  // namespace

Result minimize(const Objective& fun, Vector x0, const GradientTest& done,
                const Preconditioner& precondition, const Options& opts) {
  Result res;
  const Eigen::Index n = x0.size();
  Vector x = std::move(x0);
  Vector g(n);
  double f = fun(x, g);
  res.evaluations = 1;
  std::deque<Pair> history;
  Vector q(n), r(n), hy(n);
  auto apply_h0 = [&](const Vector& in, Vector& out) {
    if (precondition) precondition(in, out); else out = in;
  };
  bool just_reset = false;

  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    if (!std::isfinite(f)) {
      res.message = "objective is not finite";
      break;
    }
    if (done(x, g)) {
      res.converged = true;
      res.message = "gradient test satisfied";
      break;
    }
    // Two-loop recursion with a scaled preconditioner as H0.
    q = g;
    std::vector<double> alpha(history.size());
    for (std::size_t i = history.size(); i-- > 0;) {
      alpha[i] = history[i].rho * history[i].s.dot(q);
      q -= alpha[i] * history[i].y;
    }
    apply_h0(q, r);
    if (!history.empty()) {
      const auto& last = history.back();
      apply_h0(last.y, hy);
      const double gamma = last.s.dot(last.y) / last.y.dot(hy);
      if (std::isfinite(gamma) && gamma > 0) r *= gamma;
    }
    for (std::size_t i = 0; i < history.size(); ++i) {
      const double beta = history[i].rho * history[i].y.dot(r);
      r += history[i].s * (alpha[i] - beta);
    }
    Vector p = -r;
    if (!(g.dot(p) < 0)) {
      history.clear();
      apply_h0(g, r);
      p = -r;
      if (!(g.dot(p) < 0)) {
        res.message = "no descent direction";
        break;
      }
    }

    StrongWolfe ls(fun, x, f, g, p, opts);
    auto accepted = ls.run();
    res.evaluations += ls.evaluations();
    if (!accepted) {
      if (just_reset || history.empty()) {
        res.message = "line search failed";
        break;
      }
      history.clear();
      just_reset = true;
      continue;
    }
    just_reset = false;
    if (accepted->f > f + opts.round_off * std::abs(f)) res.monotone = false;
    Vector s = accepted->x - x;
    Vector y = accepted->g - g;
    const double sy = s.dot(y);
    x = std::move(accepted->x);
    g = std::move(accepted->g);
    f = accepted->f;
    if (sy > 1e-14 * s.norm() * y.norm()) {
      history.push_back({std::move(s), std::move(y), 1.0 / sy});
      if (static_cast<int>(history.size()) > opts.memory) history.pop_front();
    }
  }
  res.iterations = it;
  if (!res.converged) {
    res.converged = std::isfinite(f) && done(x, g);
    if (it >= opts.max_iterations && !res.converged) res.message = "iteration limit";
  }
  res.x = std::move(x);
  res.f = f;
  return res;
}

}  // namespace elastica::lbfgs
