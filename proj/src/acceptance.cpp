#include "elastica/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "elastica/elliptic.hpp"
#include "elastica/families.hpp"
#include "elastica/fbp.hpp"
#include "elastica/maps.hpp"
#include "elastica/solver.hpp"
#include "elastica/straighten.hpp"

namespace elastica::acceptance {
namespace {

constexpr double kPi = std::numbers::pi;

struct Check {
  bool ok = true;
  std::ostringstream out;

  Check() { out << std::setprecision(6); }
  template <class T>
  Check& note(const char* key, const T& v) {
    if (out.tellp() > 0) out << ", ";
    out << key << "=" << v;
    return *this;
  }
  void require(bool cond, const char* what) {
    if (!cond) {
      ok = false;
      if (out.tellp() > 0) out << ", ";
      out << "FAILED: " << what;
    }
  }
};

using Body = std::function<void(Check&)>;

// 1
void m_zero_check(Check& c) {
  const double m0 = maps::m_zero();
  const auto ke = elliptic::complete_integrals(m0);
  const double resid = std::abs(2 * ke.E - ke.K);
  c.note("m0", m0).note("|2E-K|", resid);
  c.require(std::abs(m0 - 0.8261) <= 1e-3, "m0 within 0.8261 +- 1e-3");
  c.require(resid < 1e-12, "|2E(m0) - K(m0)| < 1e-12");
}

// 2
void extremum_check(Check& c) {
  const auto ex = maps::wave_pen_extremum();
  c.note("m*", ex.m_star).note("M*", ex.M_star);
  c.require(std::abs(ex.m_star - 0.628) <= 1e-3, "m* within 0.628 +- 1e-3");
  c.require(std::abs(ex.M_star - 0.837) <= 1e-3, "M* within 0.837 +- 1e-3");
  const auto below = maps::pinned_modes(0.8 * ex.M_star, 1);
  const auto at = maps::pinned_modes(ex.M_star, 1);
  const auto above = maps::pinned_modes(1.2 * ex.M_star, 1);
  c.note("roots below/at/above", std::to_string(below.roots.size()) + "/" +
                                     std::to_string(at.roots.size()) + "/" +
                                     std::to_string(above.roots.size()));
  c.require(below.roots.size() == 3 && at.roots.size() == 2 && above.roots.size() == 1,
            "3/2/1 pinned roots");
}

// 3
void elliptic_check(Check& c) {
  double ident = 0, round = 0;
  for (int j = 0; j < 20; ++j) {
    const double m = 0.01 + 0.98 * j / 19.0;
    const double K = elliptic::complete_K(m);
    for (int i = 0; i < 50; ++i) {
      const double u = -4 * K + 8 * K * i / 49.0;
      const auto f = elliptic::jacobi_sn_cn_dn(u, m);
      ident = std::max(ident, std::abs(f.sn * f.sn + f.cn * f.cn - 1.0));
      ident = std::max(ident, std::abs(f.dn * f.dn - (1.0 - m * f.sn * f.sn)));
      round = std::max(round, std::abs(elliptic::incomplete_F(elliptic::jacobi_am(u, m), m) - u));
    }
  }
  double legendre = 0;
  for (int i = 1; i <= 9; ++i) {
    const double m = i / 10.0;
    const auto a = elliptic::complete_integrals(m), b = elliptic::complete_integrals(1 - m);
    legendre = std::max(legendre, std::abs(a.E * b.K + b.E * a.K - a.K * b.K - kPi / 2));
  }
  double deriv = 0;
  const double step = 1e-6;
  for (int i = 1; i < 50; ++i) {
    const double m = i / 50.0;
    const double fdK = (elliptic::complete_K(m + step) - elliptic::complete_K(m - step)) / (2 * step);
    const double fdE = (elliptic::complete_E(m + step) - elliptic::complete_E(m - step)) / (2 * step);
    deriv = std::max(deriv, std::abs(elliptic::dK_dm(m) / fdK - 1));
    deriv = std::max(deriv, std::abs(elliptic::dE_dm(m) / fdE - 1));
  }
  c.note("identities", ident).note("F(am)", round).note("legendre", legendre).note("deriv rel", deriv);
  c.require(ident < 1e-12, "Jacobi identities to 1e-12");
  c.require(round < 1e-12, "F(am(u)) = u to 1e-12");
  c.require(legendre < 1e-12, "Legendre relation to 1e-12");
  c.require(deriv < 1e-7, "derivatives vs finite differences rel 1e-7");
}

// 4
void residual_check(Check& c) {
  using families::FamilyKind;
  double worst = 0, law = 0;
  for (double scale : {1.0, 0.5, 2.5}) {
    families::Placement p;
    p.scale = scale;
    const double kw = elliptic::complete_K(0.7), ko = elliptic::complete_K(0.4);
    const std::pair<FamilyKind, std::pair<double, double>> cases[] = {
        {FamilyKind::linear(), {0, 3 * scale}},
        {FamilyKind::wavelike(0.7), {0, 4 * kw * scale}},
        {FamilyKind::borderline(), {-5 * scale, 5 * scale}},
        {FamilyKind::orbitlike(0.4), {0, 4 * ko * scale}},
        {FamilyKind::circular(), {0, 2 * kPi * scale}},
    };
    for (const auto& [fam, dom] : cases) {
      const families::PlacedCurve curve{fam, p, dom.first, dom.second};
      const auto lam = families::multiplier(fam, scale);
      // Any multiplier works for a straight line.
      const double lambda = lam ? *lam : 0.3;
      worst = std::max(worst, families::elastica_residual(families::sample(curve, 1e-3 * scale), lambda));
      if (lam) {
        const double base = *families::multiplier(fam, 1.0);
        law = std::max(law, std::abs(*lam * scale * scale - base) / std::max(1.0, std::abs(base)));
      }
    }
  }
  c.note("max residual", worst).note("scaling law", law);
  c.require(worst < 1e-5, "residual < 1e-5 at h = 1e-3");
  c.require(law < 1e-10, "multiplier scales as Lambda^-2 to 1e-10");
}

// 5
void maps_check(Check& c) {
  struct Range {
    maps::MapKind kind;
    double lo, hi;
  };
  const Range ranges[] = {{maps::MapKind::WaveFixed, -0.7, 0.95},
                          {maps::MapKind::OrbitFixed, -0.7, -0.01},
                          {maps::MapKind::WavePenalised, -12.0, 0.0},
                          {maps::MapKind::OrbitPenalised, -6.0, -0.005}};
  double worst = 0;
  for (const auto& r : ranges) {
    for (int i = 0; i < 100; ++i) {
      const double t = r.lo + (r.hi - r.lo) * i / 99.0;
      worst = std::max(worst, std::abs(maps::forward(r.kind, maps::invert(r.kind, t)) - t));
    }
  }
  // Limits of OrbitFixed, approached monotonically: log grids toward both ends.
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(std::pow(10.0, -12.0 + 11.7 * i / 100.0));
  for (int i = 1; i <= 150; ++i) grid.push_back(1 - std::pow(10.0, -0.3 - 14.7 * i / 150.0));
  bool mono = true;
  const double at0 = maps::forward(maps::MapKind::OrbitFixed, grid.front());
  double prev = at0, last = at0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    last = maps::forward(maps::MapKind::OrbitFixed, grid[i]);
    if (!(last < prev)) mono = false;
    prev = last;
  }
  bool g_neg = true;
  for (int i = 1; i <= 100; ++i) {
    const double m = i / 101.0;
    const auto ke = elliptic::complete_integrals(m);
    if (!((1 - m) * ke.K * ke.K - ke.E * ke.E < 0)) g_neg = false;
  }
  const double K15 = elliptic::complete_K(1 - 1e-15);
  c.note("round trip", worst).note("f(0+)", at0).note("f(1-1e-15)+1", last + 1).note("2/K", 2 / K15);
  c.require(worst < 1e-10, "forward(invert(t)) = t to 1e-10");
  c.require(std::abs(at0) < 1e-10, "OrbitFixed -> 0 at m -> 0+");
  c.require(mono, "OrbitFixed monotone toward -1");
  c.require(std::abs(last + 1 - 2 / K15) < 1e-12 && last > -1, "OrbitFixed + 1 ~ 2/K -> 0 as m -> 1-");
  c.require(g_neg, "(1-m)K^2 - E^2 < 0 on 100 points");
}

// 6
void adapted_check(Check& c) {
  const double v = fbp::adapted_energy(fbp::borderline_minimiser(2.0), 2.0);
  c.out << std::setprecision(15);
  c.note("adapted", v);
  c.require(std::abs(v - 8.0) < 1e-8, "half borderline adapted energy = 8 to 1e-8");
}

solver::ClampedProblem figure_eight_problem() {
  const double m0 = maps::m_zero();
  solver::ClampedProblem p;
  p.ell_y = 4 * std::sqrt(m0) / (2 * elliptic::complete_K(m0));
  p.mode = solver::FixedLength{1.0};
  return p;
}

// 7
void benchmark_check(Check& c) {
  const auto p = figure_eight_problem();
  const auto analytic = fbp::minimiser({0.0, fbp::FixedLength{1.0}, fbp::Orientation::SameTangent});
  solver::SolverConfig cfg;
  cfg.N = 400;
  const auto a = solver::solve(p, cfg);
  cfg.N = 800;
  const auto b = solver::solve(p, cfg);
  const auto ca = solver::compare_to_analytic(a.curve, analytic);
  const auto cb = solver::compare_to_analytic(b.curve, analytic);
  const double ratio = ca.energy_gap / cb.energy_gap;
  c.note("gap", ca.energy_gap).note("sup", ca.sup_distance).note("ratio", ratio);
  c.require(a.converged && b.converged, "solves converged");
  c.require(ca.energy_gap < 0.01, "energy gap < 1%");
  c.require(ca.sup_distance < 1e-2, "sup distance < 1e-2");
  c.require(ratio >= 3 && ratio <= 5, "halving h ratio in [3, 5]");
}

solver::ClampedProblem from_arc(const families::PlacedCurve& arc) {
  const auto a = families::eval(arc, arc.s_min), b = families::eval(arc, arc.s_max);
  solver::ClampedProblem p;
  p.ell_x = b.position.x() - a.position.x();
  p.ell_y = b.position.y() - a.position.y();
  p.theta0 = a.angle;
  p.theta1 = b.angle;
  p.mode = solver::FixedLength{arc.length()};
  return p;
}

// 8
void uniqueness_check(Check& c) {
  using families::FamilyKind;
  const double K85 = elliptic::complete_K(0.85), K95 = elliptic::complete_K(0.95);
  const double K3 = elliptic::complete_K(0.3), K7 = elliptic::complete_K(0.7);
  std::vector<std::pair<std::string, solver::ClampedProblem>> problems = {
      {"wave0.85", from_arc({FamilyKind::wavelike(0.85), {}, 0.3 * K85, 1.6 * K85})},
      {"wave0.95", from_arc({FamilyKind::wavelike(0.95), {}, 0.3 * K95, 1.6 * K95})},
      {"orbit0.3", from_arc({FamilyKind::orbitlike(0.3), {}, 0.1 * K3, 0.9 * K3})},
      {"orbit0.7", from_arc({FamilyKind::orbitlike(0.7), {}, 0.1 * K7, 0.9 * K7})},
  };
  auto border = from_arc({FamilyKind::borderline(), {}, 0.3, 3.0});
  border.mode = solver::Penalised{2.0};
  problems.emplace_back("borderline", border);
  solver::SolverConfig cfg;
  cfg.N = 200;
  cfg.restarts = 20;
  std::string counts;
  bool all_one = true;
  for (const auto& [name, p] : problems) {
    const auto r = solver::uniqueness_probe(p, cfg);
    counts += (counts.empty() ? "" : " ") + name + ":" + std::to_string(r.cluster_count);
    if (r.cluster_count != 1) all_one = false;
  }
  c.note("clusters", counts);
  c.require(all_one, "exactly one cluster per problem");
}

// 9
void gradient_check(Check& c) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int N = 64;
  double worst = 0;
  int states = 0;
  for (int trial = 0; trial < 20; ++trial) {
    for (bool penalised : {false, true}) {
      solver::ClampedProblem p;
      p.ell_x = 0.6 + 0.2 * u(rng);
      p.ell_y = 0.2 * u(rng);
      p.theta0 = u(rng);
      p.theta1 = u(rng);
      if (penalised) p.mode = solver::Penalised{1.0 + 5.0 * std::abs(u(rng))};
      solver::DiscreteCurve curve;
      curve.h = (1.0 + 0.3 * std::abs(u(rng))) / N;
      for (int i = 0; i <= N; ++i) curve.theta.push_back(0.8 * u(rng) + std::sin(3.0 * i / N));
      curve.theta.front() = p.theta0;
      curve.theta.back() = p.theta1;
      const solver::Augmentation aug{10 * u(rng), 10 * u(rng), 50 * std::abs(u(rng))};
      Eigen::VectorXd g;
      solver::augmented_value(p, curve, aug, &g);
      const auto x = solver::pack(p, curve);
      Eigen::VectorXd fd(x.size());
      const double d = 1e-6;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        Eigen::VectorXd a = x, b = x;
        a[i] += d;
        b[i] -= d;
        fd[i] = (solver::augmented_value(p, solver::unpack(p, a, N, curve.h), aug, nullptr) -
                 solver::augmented_value(p, solver::unpack(p, b, N, curve.h), aug, nullptr)) /
                (2 * d);
      }
      worst = std::max(worst, (g - fd).lpNorm<Eigen::Infinity>() / g.lpNorm<Eigen::Infinity>());
      ++states;
    }
  }
  c.note("states", states).note("max rel error", worst);
  c.require(worst < 1e-6, "gradient matches central differences rel 1e-6");
}

// 10
void straightening_check(Check& c) {
  const solver::SolverConfig cfg;
  const std::vector<double> grid{0.05, 0.02, 0.01, 0.005};
  for (auto [t0, t1] : {std::pair{kPi / 2, kPi / 2}, std::pair{kPi / 3, -kPi / 3}}) {
    const auto scan = straighten::length_map_scan(t0, t1, 1.0, grid, cfg);
    const double ratio = scan.rows.back().ratio;
    std::ostringstream key;
    key << std::setprecision(4) << "(" << t0 << "," << t1 << ") ratio/limit";
    c.note(key.str().c_str(), ratio / scan.limit);
    c.require(std::abs(ratio / scan.limit - 1) <= 0.05, "ratio within 5% of the limit at eps = 0.005");
    c.require(scan.strictly_increasing, "L(eps) strictly increasing");
  }
}

// 11
void classification_check(Check& c) {
  const solver::SolverConfig cfg;
  const auto a = straighten::straighten_solve({1.0, 0.99, kPi / 3, -kPi / 3}, cfg);
  const auto b = straighten::straighten_solve({1.0, 0.99, kPi / 3, kPi / 3}, cfg);
  c.note("opposite", straighten::to_string(a.shape)).note("same", straighten::to_string(b.shape));
  c.require(a.shape == straighten::Shape::MonotoneAngle, "theta0 theta1 < 0 gives monotone angle");
  c.require(b.shape == straighten::Shape::MonotoneCurvatureOneInflection,
            "theta0 theta1 > 0 gives monotone curvature with one inflection");
}

// 12
void negative_lambda_check(Check& c) {
  const auto d = solver::negative_lambda_demo(-1.0, 1.0, 10);
  bool dec = d.energies.size() == 10;
  for (std::size_t i = 1; i < d.energies.size(); ++i) dec = dec && d.energies[i] < d.energies[i - 1];
  // E_n = 2 pi + lambda (ell + 2 pi n^2): the decrements grow with n.
  bool accelerating = true;
  for (std::size_t i = 2; i < d.energies.size(); ++i) {
    accelerating = accelerating && (d.energies[i - 1] - d.energies[i]) > (d.energies[i - 2] - d.energies[i - 1]);
  }
  c.note("E_1", d.energies.front()).note("E_10", d.energies.back());
  c.require(dec, "strictly decreasing over 10 loop counts");
  c.require(accelerating && d.energies.back() < -600, "unbounded below (quadratic decrease)");
}

struct Entry {
  int id;
  const char* title;
  Body body;
  double budget;  // seconds, 0 = none
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> list = {
      {1, "m0 reproduction", m_zero_check, 0},
      {2, "pinned-mode extremum", extremum_check, 0},
      {3, "elliptic identity suite", elliptic_check, 0},
      {4, "family residual suite", residual_check, 0},
      {5, "map round trips", maps_check, 0},
      {6, "adapted-energy oracle", adapted_check, 0},
      {7, "discrete vs analytic figure-eight half", benchmark_check, 120},
      {8, "uniqueness probes", uniqueness_check, 600},
      {9, "gradient check", gradient_check, 0},
      {10, "straightening limit", straightening_check, 0},
      {11, "straightening classification", classification_check, 0},
      {12, "negative multiplier non-minimality", negative_lambda_check, 0},
  };
  return list;
}

}  // namespace

std::vector<int> all_ids() {
  std::vector<int> ids;
  for (const auto& e : entries()) ids.push_back(e.id);
  return ids;
}

Outcome run(int id) {
  for (const auto& e : entries()) {
    if (e.id != id) continue;
    Outcome o;
    o.id = id;
    o.title = e.title;
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      e.body(c);
    } catch (const std::exception& ex) {
      c.require(false, ex.what());
    }
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (e.budget > 0 && o.seconds > e.budget) c.require(false, "runtime budget exceeded");
    o.passed = c.ok;
    o.detail = c.out.str();
    return o;
  }
  Outcome o;
  o.id = id;
  o.title = "unknown criterion";
  o.detail = "no criterion with this id";
  return o;
}

std::vector<Outcome> run_all(const std::vector<int>& ids) {
  std::vector<Outcome> out;
  for (int id : ids) out.push_back(run(id));
  return out;
}

std::string format(const Outcome& o) {
  std::ostringstream os;
  os << (o.passed ? "PASS" : "FAIL") << " [" << o.id << "] " << o.title << ": " << o.detail
     << std::fixed << std::setprecision(2) << " (" << o.seconds << " s)";
  return os.str();
}

}  // namespace elastica::acceptance
