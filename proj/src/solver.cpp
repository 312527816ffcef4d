#include "elastica/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "elastica/error.hpp"
#include "elastica/lbfgs.hpp"

namespace elastica::solver {
namespace {

constexpr double kPi = std::numbers::pi;
using Eigen::Vector2d;
using Eigen::VectorXd;

double chord(const ClampedProblem& p) {
  return p.free_vertical ? std::abs(p.ell_x) : std::hypot(p.ell_x, p.ell_y);
}

// Sum of h (cos, sin) over midpoint angles.
Vector2d closure_sum(const std::vector<double>& theta, double h) {
  double cx = 0, cy = 0;
  for (std::size_t i = 0; i + 1 < theta.size(); ++i) {
    const double mid = 0.5 * (theta[i] + theta[i + 1]);
    cx += std::cos(mid);
    cy += std::sin(mid);
  }
  return {h * cx, h * cy};
}

Vector2d defect(const ClampedProblem& p, const std::vector<double>& theta, double h) {
  Vector2d c = closure_sum(theta, h) - Vector2d(p.ell_x, p.ell_y);
  if (p.free_vertical) c.y() = 0.0;
  return c;
}

// Adds a sin(pi s/L) + b sin(2 pi s/L) to theta and picks (a, b) by damped
// Gauss-Newton on the closure defect, trying a few starting points. The
// clamped end values are untouched.
std::vector<double> fit_closure(const ClampedProblem& p, std::vector<double> theta, double h) {
  const int N = static_cast<int>(theta.size()) - 1;
  const double L = h * N;
  auto shaped = [&](double a, double b) {
    std::vector<double> t = theta;
    for (int i = 1; i < N; ++i) {
      const double s = static_cast<double>(i) / N;
      t[i] += a * std::sin(kPi * s) + b * std::sin(2 * kPi * s);
    }
    return t;
  };
  auto residual = [&](double a, double b) {
    Vector2d c = defect(p, shaped(a, b), h) / L;
    // Mild pull toward small amplitudes keeps the fit well posed.
    return Eigen::Vector4d(c.x(), c.y(), 1e-3 * a, 1e-3 * b);
  };
  double best_a = 0, best_b = 0;
  double best = residual(0, 0).squaredNorm();
  const double starts[][2] = {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {2.5, 0}, {-2.5, 0}};
  for (const auto& st : starts) {
    double a = st[0], b = st[1];
    double mu = 1e-3;
    Eigen::Vector4d r = residual(a, b);
    for (int it = 0; it < 40; ++it) {
      Eigen::Matrix<double, 4, 2> J;
      const double d = 1e-7;
      J.col(0) = (residual(a + d, b) - residual(a - d, b)) / (2 * d);
      J.col(1) = (residual(a, b + d) - residual(a, b - d)) / (2 * d);
      const Eigen::Matrix2d JtJ = J.transpose() * J;
      const Eigen::Vector2d step =
          -(JtJ + mu * Eigen::Matrix2d::Identity()).ldlt().solve(J.transpose() * r);
      const Eigen::Vector4d rn = residual(a + step.x(), b + step.y());
      if (rn.squaredNorm() < r.squaredNorm()) {
        a += step.x();
        b += step.y();
        r = rn;
        mu = std::max(mu * 0.3, 1e-12);
      } else {
        mu *= 10;
      }
      if (step.norm() < 1e-12) break;
    }
    if (r.squaredNorm() < best) {
      best = r.squaredNorm();
      best_a = a;
      best_b = b;
    }
  }
  return shaped(best_a, best_b);
}

// Initial inverse Hessian: (A + rho J^T J)^{-1} with A block diagonal
// [(2/h) tridiag(-1, 2, -1), a_t], applied through the Woodbury identity.
class Preconditioner {
 public:
  Preconditioner(const ClampedProblem& p, const DiscreteCurve& c, double rho) {
    const int N = c.segments();
    n_theta_ = N - 1;
    const bool pen = p.penalised();
    n_ = n_theta_ + (pen ? 1 : 0);
    const double h = c.h;
    diag_ = 4.0 / h;
    off_ = -2.0 / h;
    // Thomas factorization of the constant tridiagonal matrix.
    cprime_.resize(n_theta_);
    denom_.resize(n_theta_);
    double prev = 0.0;
    for (int i = 0; i < n_theta_; ++i) {
      const double den = diag_ - off_ * prev;
      denom_[i] = den;
      prev = off_ / den;
      cprime_[i] = prev;
    }
    if (pen) {
      const double B = discrete_bending(c);
      t_diag_ = std::max(B + p.lambda() * c.length(), 1e-12);
    }
    // Constraint Jacobian rows.
    const int k = p.free_vertical ? 1 : 2;
    J_.setZero(k, n_);
    std::vector<double> sn(N), cs(N);
    for (int i = 0; i < N; ++i) {
      const double mid = 0.5 * (c.theta[i] + c.theta[i + 1]);
      sn[i] = std::sin(mid);
      cs[i] = std::cos(mid);
    }
    for (int j = 1; j < N; ++j) {
      J_(0, j - 1) = -0.5 * h * (sn[j - 1] + sn[j]);
      if (k == 2) J_(1, j - 1) = 0.5 * h * (cs[j - 1] + cs[j]);
    }
    if (pen) {
      const Vector2d sum = closure_sum(c.theta, h);
      J_(0, n_theta_) = sum.x();
      if (k == 2) J_(1, n_theta_) = sum.y();
    }
    if (rho > 0) {
      Z_.resize(n_, k);
      VectorXd col(n_);
      for (int r = 0; r < k; ++r) {
        apply_a_inverse(J_.row(r).transpose(), col);
        Z_.col(r) = col;
      }
      const Eigen::MatrixXd small =
          Eigen::MatrixXd::Identity(k, k) / rho + J_ * Z_;
      S_ = small.inverse();
      woodbury_ = true;
    }
  }

  void operator()(const VectorXd& q, VectorXd& r) const {
    apply_a_inverse(q, r);
    if (woodbury_) r -= Z_ * (S_ * (Z_.transpose() * q));
  }

 private:
  void apply_a_inverse(const VectorXd& q, VectorXd& r) const {
    r.resize(n_);
    double prev = 0.0;
    for (int i = 0; i < n_theta_; ++i) {
      prev = (q[i] - off_ * prev) / denom_[i];
      r[i] = prev;
    }
    for (int i = n_theta_ - 2; i >= 0; --i) r[i] -= cprime_[i] * r[i + 1];
    if (n_ > n_theta_) r[n_theta_] = q[n_theta_] / t_diag_;
  }

  int n_theta_ = 0;
  int n_ = 0;
  double diag_ = 0, off_ = 0, t_diag_ = 1;
  std::vector<double> cprime_, denom_;
  Eigen::MatrixXd J_, Z_, S_;
  bool woodbury_ = false;
};

// Scale used to make the gradient test dimensionless.
double energy_scale(const DiscreteCurve& c) {
  return std::max(1.0, discrete_bending(c) / c.length());
}

double gradient_measure(const VectorXd& g, const DiscreteCurve& c, bool penalised) {
  const int n_theta = c.segments() - 1;
  double m = 0.0;
  for (int i = 0; i < n_theta; ++i) m = std::max(m, std::abs(g[i]));
  m /= c.h;
  if (penalised) m = std::max(m, std::abs(g[n_theta]) / c.length());
  return m / energy_scale(c);
}

double theta_distance(const DiscreteCurve& a, const DiscreteCurve& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.theta.size(); ++i) d = std::max(d, std::abs(a.theta[i] - b.theta[i]));
  return d;
}

}  // namespace

double ClampedProblem::lambda() const {
  if (const auto* pen = std::get_if<Penalised>(&mode)) return pen->lambda;
  return 0.0;
}

void validate(const ClampedProblem& p, const SolverConfig& config) {
  if (config.N < 8) throw DomainError("solver: N must be at least 8");
  if (!(config.grad_tol > 0) || !(config.constraint_tol > 0)) {
    throw DomainError("solver: tolerances must be positive");
  }
  for (double v : {p.ell_x, p.ell_y, p.theta0, p.theta1}) {
    if (!std::isfinite(v)) throw DomainError("solver: non-finite boundary data");
  }
  if (const auto* f = std::get_if<FixedLength>(&p.mode)) {
    if (!(f->L > 0)) throw DomainError("solver: L must be positive");
    if (f->L < chord(p)) {
      std::ostringstream os;
      os << "solver: length " << f->L << " is shorter than the chord " << chord(p);
      throw InfeasibleError(os.str());
    }
  } else if (!(p.lambda() > 0)) {
    throw DomainError("solver: lambda must be positive");
  }
}

DiscreteCurve initial_curve(const ClampedProblem& p, int N, double length,
                            std::optional<std::uint64_t> noise_seed) {
  DiscreteCurve c;
  c.h = length / N;
  c.theta.resize(N + 1);
  double a[3] = {0, 0, 0};
  if (noise_seed) {
    std::mt19937_64 rng(*noise_seed);
    std::uniform_real_distribution<double> amp(-kPi / 2, kPi / 2);
    for (double& v : a) v = amp(rng);
  }
  for (int i = 0; i <= N; ++i) {
    const double s = static_cast<double>(i) / N;
    double t = p.theta0 + (p.theta1 - p.theta0) * s;
    for (int j = 0; j < 3; ++j) t += a[j] * std::sin((j + 1) * kPi * s);
    c.theta[i] = t;
  }
  c.theta.front() = p.theta0;
  c.theta.back() = p.theta1;
  c.theta = fit_closure(p, std::move(c.theta), c.h);
  return c;
}

std::vector<Vector2d> positions(const DiscreteCurve& c) {
  std::vector<Vector2d> pts(c.theta.size());
  pts[0].setZero();
  for (std::size_t i = 0; i + 1 < c.theta.size(); ++i) {
    const double mid = 0.5 * (c.theta[i] + c.theta[i + 1]);
    pts[i + 1] = pts[i] + c.h * Vector2d(std::cos(mid), std::sin(mid));
  }
  return pts;
}

std::vector<double> curvature(const DiscreteCurve& c) {
  const std::size_t n = c.theta.size();
  std::vector<double> k(n);
  for (std::size_t i = 1; i + 1 < n; ++i) k[i] = (c.theta[i + 1] - c.theta[i - 1]) / (2 * c.h);
  k[0] = (-3 * c.theta[0] + 4 * c.theta[1] - c.theta[2]) / (2 * c.h);
  k[n - 1] = (3 * c.theta[n - 1] - 4 * c.theta[n - 2] + c.theta[n - 3]) / (2 * c.h);
  return k;
}

double discrete_bending(const DiscreteCurve& c) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < c.theta.size(); ++i) {
    const double d = c.theta[i + 1] - c.theta[i];
    sum += d * d;
  }
  return sum / c.h;
}

double discrete_energy(const DiscreteCurve& c, const ClampedProblem& p) {
  return discrete_bending(c) + p.lambda() * c.length();
}

Vector2d closure_defect(const DiscreteCurve& c, const ClampedProblem& p) {
  return defect(p, c.theta, c.h);
}

VectorXd pack(const ClampedProblem& p, const DiscreteCurve& c) {
  const int N = c.segments();
  VectorXd x(N - 1 + (p.penalised() ? 1 : 0));
  for (int i = 1; i < N; ++i) x[i - 1] = c.theta[i];
  if (p.penalised()) x[N - 1] = std::log(c.length());
  return x;
}

DiscreteCurve unpack(const ClampedProblem& p, const VectorXd& x, int N, double h_fixed) {
  DiscreteCurve c;
  c.theta.resize(N + 1);
  c.theta[0] = p.theta0;
  c.theta[N] = p.theta1;
  for (int i = 1; i < N; ++i) c.theta[i] = x[i - 1];
  c.h = p.penalised() ? std::exp(x[N - 1]) / N : h_fixed;
  return c;
}

double augmented_value(const ClampedProblem& p, const DiscreteCurve& c, const Augmentation& aug,
                       VectorXd* gradient) {
  const int N = c.segments();
  const double h = c.h;
  const bool pen = p.penalised();
  double bend = 0.0;
  double sx = 0.0, sy = 0.0;
  std::vector<double> sn(N), cs(N);
  for (int i = 0; i < N; ++i) {
    const double d = c.theta[i + 1] - c.theta[i];
    bend += d * d;
    const double mid = 0.5 * (c.theta[i] + c.theta[i + 1]);
    sn[i] = std::sin(mid);
    cs[i] = std::cos(mid);
    sx += cs[i];
    sy += sn[i];
  }
  bend /= h;
  const double L = h * N;
  const double lambda = p.lambda();
  const double cx = h * sx - p.ell_x;
  const double cy = p.free_vertical ? 0.0 : h * sy - p.ell_y;
  const double value = bend + lambda * L - aug.mu_x * cx - aug.mu_y * cy +
                       0.5 * aug.rho * (cx * cx + cy * cy);
  if (gradient) {
    VectorXd& g = *gradient;
    g.resize(N - 1 + (pen ? 1 : 0));
    const double wx = aug.rho * cx - aug.mu_x;
    const double wy = p.free_vertical ? 0.0 : aug.rho * cy - aug.mu_y;
    for (int j = 1; j < N; ++j) {
      const double dprev = c.theta[j] - c.theta[j - 1];
      const double dnext = c.theta[j + 1] - c.theta[j];
      double gj = 2 * (dprev - dnext) / h;
      gj += wx * (-0.5 * h * (sn[j - 1] + sn[j]));
      gj += wy * (0.5 * h * (cs[j - 1] + cs[j]));
      g[j - 1] = gj;
    }
    if (pen) {
      // d/dt with h = exp(t)/N: bending scales as 1/h, closure sums as h.
      g[N - 1] = -bend + lambda * L + wx * (h * sx) + wy * (h * sy);
    }
  }
  return value;
}

SolveReport solve(const ClampedProblem& p, const SolverConfig& config,
                  const std::optional<DiscreteCurve>& start) {
  validate(p, config);
  const int N = config.N;
  double L0;
  if (const auto* f = std::get_if<FixedLength>(&p.mode)) {
    L0 = f->L;
  } else {
    L0 = std::max(1.1 * chord(p), 2.0 / std::sqrt(p.lambda()));
  }
  DiscreteCurve curve = start ? *start : initial_curve(p, N, L0, std::nullopt);
  if (curve.segments() != N) throw DomainError("solve: start curve has the wrong size");
  if (!p.penalised()) curve.h = L0 / N;
  curve.theta.front() = p.theta0;
  curve.theta.back() = p.theta1;
  const double h_fixed = curve.h;
  const bool pen = p.penalised();

  SolveReport rep;
  Augmentation aug;
  {
    const double L = curve.length();
    aug.rho = 10.0 * std::max(discrete_energy(curve, p), 1.0 / L) / (L * L);
  }
  const double rho_max = aug.rho * 1e10;
  VectorXd x = pack(p, curve);
  double last_defect = std::numeric_limits<double>::infinity();
  lbfgs::Options opts;
  opts.max_iterations = config.max_inner;

  for (int outer = 0; outer < config.max_outer; ++outer) {
    const bool final_tol = outer >= 3;
    const double tol = final_tol ? config.grad_tol
                                 : std::max(config.grad_tol, 1e-2 * std::pow(0.1, outer));
    const Preconditioner pre(p, curve, aug.rho);
    auto fun = [&](const VectorXd& xv, VectorXd& g) {
      const DiscreteCurve c = unpack(p, xv, N, h_fixed);
      return augmented_value(p, c, aug, &g);
    };
    auto done = [&](const VectorXd& xv, const VectorXd& g) {
      return gradient_measure(g, unpack(p, xv, N, h_fixed), pen) <= tol;
    };
    auto precond = [&](const VectorXd& q, VectorXd& r) { pre(q, r); };
    auto res = lbfgs::minimize(fun, x, done, precond, opts);
    x = res.x;
    curve = unpack(p, x, N, h_fixed);
    rep.iterations += res.iterations;
    rep.outer_iterations = outer + 1;
    rep.monotone_descent = rep.monotone_descent && res.monotone;

    const Vector2d c = closure_defect(curve, p);
    const double cn = c.norm();
    VectorXd g;
    augmented_value(p, curve, aug, &g);
    rep.gradient_norm = gradient_measure(g, curve, pen);
    aug.mu_x -= aug.rho * c.x();
    aug.mu_y -= aug.rho * c.y();
    if (cn <= config.constraint_tol * curve.length() && final_tol && res.converged) {
      rep.converged = true;
      break;
    }
    const bool feasible = cn <= config.constraint_tol * curve.length();
    if (!feasible && cn > 0.25 * last_defect && aug.rho < rho_max) aug.rho *= 10.0;
    last_defect = cn;
  }
  rep.curve = curve;
  rep.bending = discrete_bending(curve);
  rep.energy = discrete_energy(curve, p);
  rep.constraint_residual = closure_defect(curve, p).norm();
  rep.multiplier_x = aug.mu_x;
  rep.multiplier_y = aug.mu_y;
  return rep;
}

UniquenessResult uniqueness_probe(const ClampedProblem& p, const SolverConfig& config) {
  validate(p, config);
  if (config.restarts < 1) throw DomainError("uniqueness_probe: need at least one restart");
  double L0;
  if (const auto* f = std::get_if<FixedLength>(&p.mode)) {
    L0 = f->L;
  } else {
    L0 = std::max(1.1 * chord(p), 2.0 / std::sqrt(p.lambda()));
  }
  std::vector<SolveReport> ok;
  UniquenessResult out;
  for (int r = 0; r < config.restarts; ++r) {
    std::optional<std::uint64_t> seed;
    if (r > 0) seed = config.seed * 1000003ULL + static_cast<std::uint64_t>(r);
    const auto start = initial_curve(p, config.N, L0, seed);
    auto rep = solve(p, config, start);
    if (rep.converged) ok.push_back(std::move(rep)); else ++out.failed;
  }
  if (ok.empty()) throw NonConvergenceError("uniqueness_probe: no restart converged");

  // Greedy clustering in energy order.
  std::sort(ok.begin(), ok.end(), [](const SolveReport& a, const SolveReport& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return a.curve.theta[a.curve.theta.size() / 2] < b.curve.theta[b.curve.theta.size() / 2];
  });
  double theta_max = 0.0;
  for (const auto& r : ok) {
    for (double t : r.curve.theta) theta_max = std::max(theta_max, std::abs(t));
  }
  const double tol = 1e-3 * std::max(1.0, theta_max);
  auto distance = [&](const SolveReport& a, const SolveReport& b) {
    double d = theta_distance(a.curve, b.curve);
    if (p.penalised()) {
      const double la = a.curve.length(), lb = b.curve.length();
      d = std::max(d, std::abs(la - lb) / std::max(la, lb));
    }
    return d;
  };
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < ok.size(); ++i) {
    bool placed = false;
    for (auto& cl : clusters) {
      if (distance(ok[cl.front()], ok[i]) <= tol) {
        cl.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({i});
  }
  for (const auto& cl : clusters) {
    out.cluster_energies.push_back(ok[cl.front()].energy);
    for (std::size_t a = 0; a < cl.size(); ++a) {
      for (std::size_t b = a + 1; b < cl.size(); ++b) {
        out.spread = std::max(out.spread, distance(ok[cl[a]], ok[cl[b]]));
      }
    }
  }
  out.cluster_count = static_cast<int>(clusters.size());
  out.best = ok.front();
  return out;
}

Comparison compare_to_analytic(const DiscreteCurve& curve, const families::PlacedCurve& placed) {
  if (placed.infinite()) throw DomainError("compare_to_analytic: infinite analytic curve");
  const double La = placed.length();
  const double Ld = curve.length();
  if (std::abs(La - Ld) > 0.02 * La) {
    std::ostringstream os;
    os << "compare_to_analytic: lengths differ (" << Ld << " vs " << La << ")";
    throw DomainError(os.str());
  }
  const int N = curve.segments();
  const auto pts = positions(curve);
  const auto a0 = families::eval(placed, placed.s_min);
  // Rotate the analytic curve so both start with the same tangent.
  const double rot = curve.theta[0] - a0.angle;
  const Eigen::Matrix2d R = Eigen::Rotation2Dd(rot).toRotationMatrix();
  double sup = 0.0;
  for (int i = 0; i <= N; ++i) {
    const double s = std::min(placed.s_min + La * i / N, placed.s_max);
    const Vector2d q = R * (families::eval(placed, s).position - a0.position);
    sup = std::max(sup, (pts[i] - q).norm());
  }
  const double Ea = fbp::exact_bending_energy(placed);
  const double Ed = discrete_bending(curve);
  const double gap = Ea > 0 ? std::abs(Ed - Ea) / Ea : std::abs(Ed - Ea);
  return {sup / La, gap};
}

LoopDemo negative_lambda_demo(double lambda, double ell, int max_loops) {
  if (!std::isfinite(lambda) || !(ell > 0) || max_loops < 1) {
    throw DomainError("negative_lambda_demo: need finite lambda, ell > 0, max_loops >= 1");
  }
  LoopDemo out;
  out.segment_energy = lambda * ell;
  for (int n = 1; n <= max_loops; ++n) {
    const double r = n;
    const double loop_len = 2 * kPi * r * n;
    const double energy = 2 * kPi * n / r + lambda * (ell + loop_len);
    out.loops.push_back(n);
    out.energies.push_back(energy);
    const double margin = 1e-12 * std::max(1.0, std::abs(out.segment_energy) + std::abs(energy));
    if (!out.crossover && energy < out.segment_energy - margin) out.crossover = n;

    // The same competitor on a uniform theta grid: straight, loops, straight.
    const int M = 4000;
    DiscreteCurve c;
    const double total = ell + loop_len;
    c.h = total / M;
    c.theta.resize(M + 1);
    const double a = 0.5 * ell;
    for (int i = 0; i <= M; ++i) {
      const double s = c.h * i;
      const double u = std::clamp((s - a) / loop_len, 0.0, 1.0);
      c.theta[i] = 2 * kPi * n * u;
    }
    out.discrete_energies.push_back(discrete_bending(c) + lambda * c.length());
  }
  return out;
}

}  // namespace elastica::solver
