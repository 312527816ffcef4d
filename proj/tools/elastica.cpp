#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "elastica/acceptance.hpp"
#include "elastica/elliptic.hpp"
#include "elastica/error.hpp"
#include "elastica/families.hpp"
#include "elastica/fbp.hpp"
#include "elastica/maps.hpp"
#include "elastica/solver.hpp"
#include "elastica/straighten.hpp"
#include "report.hpp"

#ifndef ELASTICA_VERSION
#define ELASTICA_VERSION "unknown"
#endif

using namespace elastica;
using elastica::cli::Json;

namespace {

namespace fs = std::filesystem;

enum ExitCode { kOk = 0, kUsage = 1, kDomain = 2, kNonConvergence = 3, kVerifyFailed = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// What a subcommand produced. Formats it cannot emit stay empty.
struct Artifacts {
  Json json;
  std::optional<cli::CsvTable> csv;
  std::optional<cli::SvgScene> svg;
  std::optional<std::string> text;  // plain stdout output, no file form
  int exit_code = kOk;
};

struct OutputOptions {
  std::string out;
  std::string output_dir;
  std::string stem;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

double parse_number(const std::string& s, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw UsageError(std::string("cannot parse ") + what + ": '" + s + "'");
  return v;
}

Json point_json(const Eigen::Vector2d& p) { return Json::array({p.x(), p.y()}); }

// Samples of a placed curve as CSV rows s, x, y, theta, k.
cli::CsvTable curve_table(const families::SampledCurve& c) {
  cli::CsvTable t({"s", "x", "y", "theta", "k"});
  for (std::size_t i = 0; i < c.size(); ++i) {
    t.add({c.s_start + c.h * static_cast<double>(i), c.points[i].x(), c.points[i].y(), c.theta[i],
           c.k[i]});
  }
  return t;
}

families::SampledCurve sample_by_h(const families::PlacedCurve& placed, double h) {
  if (!(h > 0.0)) throw DomainError("--h must be positive");
  const int n = std::max(1, static_cast<int>(std::ceil(placed.length() / h - 1e-9)));
  return families::sample_segments(placed, n);
}

// ---------------------------------------------------------------- elliptic

struct EllipticArgs {
  std::string fn = "K";
  double m = 0.5;
  double x = 0.0;
};

Artifacts run_elliptic(const EllipticArgs& a) {
  Artifacts out;
  Json values;
  if (a.fn == "K") {
    values["K"] = elliptic::complete_K(a.m);
  } else if (a.fn == "E") {
    values["E"] = elliptic::complete_E(a.m);
  } else if (a.fn == "F") {
    values["F"] = elliptic::incomplete_F(a.x, a.m);
  } else if (a.fn == "Einc") {
    values["Einc"] = elliptic::incomplete_E(a.x, a.m);
  } else if (a.fn == "am") {
    values["am"] = elliptic::jacobi_am(a.x, a.m);
  } else if (a.fn == "sncndn") {
    const auto f = elliptic::jacobi_sn_cn_dn(a.x, a.m);
    values["sn"] = f.sn;
    values["cn"] = f.cn;
    values["dn"] = f.dn;
  } else if (a.fn == "dK") {
    values["dK"] = elliptic::dK_dm(a.m);
  } else if (a.fn == "dE") {
    values["dE"] = elliptic::dE_dm(a.m);
  } else {
    throw UsageError("unknown --fn '" + a.fn + "'");
  }
  out.json = {{"fn", a.fn}, {"m", a.m}, {"x", a.x}, {"values", values}};
  cli::CsvTable t({"fn", "m", "x", "value"});
  for (const auto& [name, v] : values.items()) {
    t.add_text({name, cli::format_double(a.m), cli::format_double(a.x),
                cli::format_double(v.get<double>())});
  }
  out.csv = std::move(t);
  return out;
}

// ------------------------------------------------------------------ family

struct FamilyArgs {
  std::string kind = "wavelike";
  double m = 0.5;
  double scale = 1.0;
  std::optional<std::string> from;
  std::string to = "auto-half-period";
  double h = 1e-3;
};

Artifacts run_family(const FamilyArgs& a) {
  const auto tag = families::parse_family_tag(a.kind);
  if (!tag) throw UsageError("unknown --kind '" + a.kind + "'");
  if (!(a.scale > 0.0)) throw DomainError("--scale must be positive");

  families::FamilyKind kind;
  double half = 0.0;  // intrinsic half period
  switch (*tag) {
    case families::FamilyTag::Linear: kind = families::FamilyKind::linear(); half = 1.0; break;
    case families::FamilyTag::Wavelike:
      kind = families::FamilyKind::wavelike(a.m);
      half = 2.0 * elliptic::complete_K(a.m);
      break;
    case families::FamilyTag::Orbitlike:
      kind = families::FamilyKind::orbitlike(a.m);
      half = elliptic::complete_K(a.m);
      break;
    case families::FamilyTag::Circular: kind = families::FamilyKind::circular(); half = std::numbers::pi; break;
    case families::FamilyTag::Borderline: kind = families::FamilyKind::borderline(); half = 8.0; break;
  }
  const bool border = *tag == families::FamilyTag::Borderline;

  families::PlacedCurve placed;
  placed.family = kind;
  placed.placement.scale = a.scale;
  // Borderline has no period; "auto" means the truncation window [-8, 8].
  placed.s_min = a.from ? parse_number(*a.from, "--from") : (border ? -8.0 * a.scale : 0.0);
  if (a.to == "auto-half-period") {
    placed.s_max = border ? 8.0 * a.scale : placed.s_min + half * a.scale;
  } else if (a.to == "auto-period") {
    placed.s_max = border ? 8.0 * a.scale : placed.s_min + 2.0 * half * a.scale;
  } else {
    placed.s_max = parse_number(a.to, "--to");
  }
  if (!(placed.s_max > placed.s_min)) throw DomainError("--to must exceed --from");

  const auto s = sample_by_h(placed, a.h);
  const auto lambda = families::multiplier(kind, a.scale);

  Artifacts out;
  out.json["kind"] = to_string(*tag);
  out.json["m"] = kind.m;
  out.json["scale"] = a.scale;
  out.json["domain"] = Json::array({placed.s_min, placed.s_max});
  out.json["h"] = s.h;
  out.json["samples"] = s.size();
  out.json["multiplier"] = lambda ? Json(*lambda) : Json(nullptr);
  out.json["residual"] = families::elastica_residual(s, lambda.value_or(0.0));
  out.json["bending_energy"] = fbp::bending_energy(s);
  if (*tag == families::FamilyTag::Wavelike) {
    out.json["criticality"] = to_string(families::classify_wavelike(a.m));
  }
  out.csv = curve_table(s);
  out.svg = cli::SvgScene{{cli::Polyline{s.points}}, {}, std::string(to_string(*tag))};
  return out;
}

// -------------------------------------------------------------------- maps

struct MapsArgs {
  bool m0 = false;
  bool extremum = false;
  bool pinned = false;
  std::string kind = "wave-fixed";
  std::optional<double> forward;
  std::optional<double> invert;
  double target = 0.0;
  int n_mode = 1;
};

Artifacts run_maps(const MapsArgs& a, bool text_ok) {
  Artifacts out;
  const int chosen = int(a.m0) + int(a.extremum) + int(a.pinned) + int(a.forward.has_value()) +
                     int(a.invert.has_value());
  if (chosen != 1) {
    throw UsageError("choose exactly one of --m0, --extremum, --pinned, --forward, --invert");
  }
  if (a.m0) {
    const double m0 = maps::m_zero();
    out.json = {{"m0", m0}};
    cli::CsvTable t({"m0"});
    t.add({m0});
    out.csv = std::move(t);
    if (text_ok) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.12f\n", m0);
      out.text = buf;
    }
    return out;
  }
  if (a.extremum) {
    const auto e = maps::wave_pen_extremum();
    out.json = {{"m_star", e.m_star}, {"M_star", e.M_star}};
    cli::CsvTable t({"m_star", "M_star"});
    t.add({e.m_star, e.M_star});
    out.csv = std::move(t);
    return out;
  }
  if (a.pinned) {
    if (a.n_mode < 1) throw DomainError("--n must be at least 1");
    const auto r = maps::pinned_modes(a.target, a.n_mode);
    Json roots = Json::array();
    cli::CsvTable t({"m", "multiplicity"});
    for (const auto& root : r.roots) {
      roots.push_back({{"m", root.m}, {"multiplicity", root.multiplicity}});
      t.add({root.m, static_cast<double>(root.multiplicity)});
    }
    out.json = {{"target", a.target},
                {"n", a.n_mode},
                {"roots", roots},
                {"degenerate_subcritical_endpoint", r.degenerate_subcritical_endpoint}};
    out.csv = std::move(t);
    return out;
  }
  const auto kind = maps::parse_map_kind(a.kind);
  if (!kind) throw UsageError("unknown --kind '" + a.kind + "'");
  double m = 0.0, value = 0.0;
  if (a.forward) {
    m = *a.forward;
    value = maps::forward(*kind, m);
  } else {
    value = *a.invert;
    m = maps::invert(*kind, value);
  }
  out.json = {{"kind", a.kind}, {"m", m}, {"value", value}, {"derivative", maps::derivative(*kind, m)}};
  cli::CsvTable t({"m", "value"});
  t.add({m, value});
  out.csv = std::move(t);
  return out;
}

// --------------------------------------------------------------------- fbp

struct FbpArgs {
  std::string mode = "fixed";
  double ell = 0.0;
  double L = 1.0;
  double lambda = 1.0;
  std::string orient = "same";
  double h = 1e-3;
};

Artifacts run_fbp(const FbpArgs& a) {
  fbp::FreeBoundarySpec spec;
  spec.ell = a.ell;
  if (a.mode == "fixed") {
    spec.mode = fbp::FixedLength{a.L};
  } else if (a.mode == "penalised") {
    spec.mode = fbp::Penalised{a.lambda};
  } else {
    throw UsageError("--mode must be fixed or penalised");
  }
  if (a.orient == "same") {
    spec.orientation = fbp::Orientation::SameTangent;
  } else if (a.orient == "opposite") {
    spec.orientation = fbp::Orientation::OppositeTangent;
  } else {
    throw UsageError("--orient must be same or opposite");
  }

  const auto placed = fbp::minimiser(spec);
  const auto s = sample_by_h(placed, a.h);
  const bool penalised = a.mode == "penalised";
  const auto e = fbp::energy_report(s, penalised ? std::optional<double>(a.lambda) : std::nullopt);

  Artifacts out;
  out.json["mode"] = a.mode;
  out.json["orient"] = a.orient;
  out.json["ell"] = a.ell;
  out.json[penalised ? "lambda" : "L"] = penalised ? a.lambda : a.L;
  out.json["family"] = to_string(placed.family.tag);
  out.json["m"] = placed.family.m;
  out.json["Lambda"] = placed.placement.scale;
  out.json["domain"] = Json::array({placed.s_min, placed.s_max});
  Json energies = {{"bending", e.bending},
                   {"bending_exact", fbp::exact_bending_energy(placed)},
                   {"length", e.length}};
  if (e.modified) energies["modified"] = *e.modified;
  if (e.adapted) energies["adapted"] = *e.adapted;
  out.json["energies"] = energies;
  const auto flux = fbp::noflux_check(s);
  out.json["noflux"] = {{"start", flux.start}, {"end", flux.end}};
  out.json["start"] = point_json(s.points.front());
  out.json["end"] = point_json(s.points.back());

  // The penalised same-tangent minimiser jumps at ell = 0; report both branches.
  if (penalised && spec.orientation == fbp::Orientation::SameTangent && std::abs(a.ell) <= 1e-12) {
    const auto c = fbp::penalised_zero_candidates(a.lambda);
    out.json["zero_ell_candidates"] = {{"figure_eight", c.figure_eight},
                                       {"segment_limit", c.segment_limit}};
    std::cerr << "note: ell is at the discontinuity; figure-eight energy " << c.figure_eight
              << ", segment limit " << c.segment_limit << "\n";
  }

  out.csv = curve_table(s);
  const double x0 = s.points.front().x();
  out.svg = cli::SvgScene{{cli::Polyline{s.points}}, {x0, x0 + a.ell},
                          "free-boundary minimiser"};
  return out;
}

// ------------------------------------------------------------------- solve

struct SolveArgs {
  std::vector<double> ell{0.0, 0.0};
  double theta0 = 0.0;
  double theta1 = 0.0;
  std::optional<double> L;
  std::optional<double> lambda;
  int n = 400;
  int restarts = 1;
  std::uint64_t seed = 7;
  bool support_lines = false;
  double grad_tol = 1e-7;
  double constraint_tol = 1e-8;
  int max_outer = 40;
  int max_inner = 20000;
};

Json report_json(const solver::SolveReport& r) {
  return {{"energy", r.energy},
          {"bending", r.bending},
          {"length", r.curve.length()},
          {"N", r.curve.segments()},
          {"h", r.curve.h},
          {"constraint_residual", r.constraint_residual},
          {"gradient_norm", r.gradient_norm},
          {"multiplier", Json::array({r.multiplier_x, r.multiplier_y})},
          {"iterations", r.iterations},
          {"outer_iterations", r.outer_iterations},
          {"converged", r.converged},
          {"monotone_descent", r.monotone_descent}};
}

cli::CsvTable node_table(const solver::DiscreteCurve& c) {
  const auto p = solver::positions(c);
  const auto k = solver::curvature(c);
  cli::CsvTable t({"i", "s", "theta", "x", "y", "k"});
  for (std::size_t i = 0; i < c.theta.size(); ++i) {
    t.add({static_cast<double>(i), c.h * static_cast<double>(i), c.theta[i], p[i].x(), p[i].y(), k[i]});
  }
  return t;
}

Artifacts run_solve(const SolveArgs& a) {
  if (a.ell.size() != 2) throw UsageError("--ell takes two numbers x,y");
  if (a.L.has_value() == a.lambda.has_value()) throw UsageError("give exactly one of --L and --lambda");
  if (a.restarts < 1) throw DomainError("--restarts must be at least 1");

  solver::ClampedProblem p;
  p.ell_x = a.ell[0];
  p.ell_y = a.ell[1];
  p.theta0 = a.theta0;
  p.theta1 = a.theta1;
  if (a.L) {
    p.mode = solver::FixedLength{*a.L};
  } else {
    p.mode = solver::Penalised{*a.lambda};
  }
  p.free_vertical = a.support_lines;

  solver::SolverConfig cfg;
  cfg.N = a.n;
  cfg.restarts = a.restarts;
  cfg.seed = a.seed;
  cfg.grad_tol = a.grad_tol;
  cfg.constraint_tol = a.constraint_tol;
  cfg.max_outer = a.max_outer;
  cfg.max_inner = a.max_inner;
  solver::validate(p, cfg);

  Artifacts out;
  solver::SolveReport best;
  if (a.restarts == 1) {
    best = solver::solve(p, cfg);
  } else {
    const auto u = solver::uniqueness_probe(p, cfg);
    best = u.best;
    out.json["clusters"] = {{"count", u.cluster_count},
                            {"energies", u.cluster_energies},
                            {"spread", u.spread},
                            {"failed", u.failed}};
  }
  out.json["report"] = report_json(best);
  out.json["end"] = point_json(solver::positions(best.curve).back());
  out.csv = node_table(best.curve);
  std::vector<double> lines;
  if (a.support_lines) lines = {0.0, a.ell[0]};
  out.svg = cli::SvgScene{{cli::Polyline{solver::positions(best.curve)}}, lines, "clamped elastica"};
  if (!best.converged) {
    std::cerr << "solver did not converge (residual " << best.constraint_residual << ", gradient "
              << best.gradient_norm << ")\n";
    out.exit_code = kNonConvergence;
  }
  return out;
}

// -------------------------------------------------------------- straighten

struct StraightenArgs {
  double theta0 = 1.0;
  double theta1 = 1.0;
  double L = 1.0;
  double ell = 0.99;
  int n = 400;
  double points_per_eps = 40.0;
  double window = 3.0;
  std::vector<double> eps{0.05, 0.02, 0.01};
};

Artifacts run_straighten(const StraightenArgs& a) {
  solver::SolverConfig cfg;
  cfg.N = a.n;
  const auto r = straighten::straighten_solve({a.L, a.ell, a.theta0, a.theta1}, cfg, a.points_per_eps);

  Artifacts out;
  out.json["shape"] = to_string(r.shape);
  out.json["epsilon"] = r.epsilon;
  out.json["N"] = r.N;
  out.json["length_slope"] = straighten::length_slope(a.theta0, a.theta1);
  const double window = std::min(a.window, a.L / r.epsilon);
  out.json["rescaled_window"] = window;
  out.json["rescaled_error"] = straighten::rescaled_error(r.report.curve, r.epsilon, a.theta0, window);
  out.json["report"] = report_json(r.report);
  out.csv = node_table(r.report.curve);
  out.svg = cli::SvgScene{{cli::Polyline{solver::positions(r.report.curve)}}, {0.0, a.ell},
                          std::string(to_string(r.shape))};
  return out;
}

Artifacts run_straighten_scan(const StraightenArgs& a) {
  solver::SolverConfig cfg;
  cfg.N = a.n;
  const auto scan = straighten::length_map_scan(a.theta0, a.theta1, a.ell, a.eps, cfg, a.points_per_eps);

  Artifacts out;
  Json rows = Json::array();
  cli::CsvTable t({"epsilon", "length", "ratio", "energy", "converged"});
  for (const auto& row : scan.rows) {
    rows.push_back({{"epsilon", row.epsilon},
                    {"length", row.length},
                    {"ratio", row.ratio},
                    {"energy", row.energy},
                    {"converged", row.converged}});
    t.add({row.epsilon, row.length, row.ratio, row.energy, row.converged ? 1.0 : 0.0});
  }
  out.json = {{"rows", rows},
              {"limit", scan.limit},
              {"strictly_increasing", scan.strictly_increasing},
              {"N", scan.N}};
  out.csv = std::move(t);
  return out;
}

// ------------------------------------------------------------------ output

std::string write_text(const fs::path& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << body;
  return path.string();
}

int emit(const Artifacts& art, cli::Manifest manifest, const OutputOptions& o,
         std::chrono::steady_clock::time_point started) {
  const std::string hash = manifest.hash();
  auto formats = split_list(o.out);
  if (formats.empty()) {
    if (art.text && o.output_dir.empty()) {
      std::cout << *art.text;
      return art.exit_code;
    }
    formats = {"json"};
  }

  std::vector<std::pair<std::string, std::string>> bodies;
  for (const auto& f : formats) {
    if (f == "json") {
      Json j = art.json;
      j["manifest"] = {{"manifest_hash", hash},
                       {"subcommand", manifest.subcommand},
                       {"config", manifest.config},
                       {"config_hash", manifest.config_hash()},
                       {"seed", manifest.seed ? Json(*manifest.seed) : Json(nullptr)},
                       {"version", manifest.version}};
      bodies.emplace_back(f, j.dump(2) + "\n");
    } else if (f == "csv") {
      if (!art.csv) throw UsageError(manifest.subcommand + " has no csv output");
      bodies.emplace_back(f, art.csv->render(hash));
    } else if (f == "svg") {
      if (!art.svg) throw UsageError(manifest.subcommand + " has no svg output");
      bodies.emplace_back(f, cli::render_svg(*art.svg, hash));
    } else {
      throw UsageError("unknown output format '" + f + "'");
    }
  }

  if (o.output_dir.empty() && bodies.size() == 1) {
    std::cout << bodies.front().second;
    return art.exit_code;
  }
  const fs::path dir = o.output_dir.empty() ? fs::path(".") : fs::path(o.output_dir);
  fs::create_directories(dir);
  const std::string stem = o.stem.empty() ? manifest.subcommand : o.stem;
  for (const auto& [f, body] : bodies) {
    std::cerr << "wrote " << write_text(dir / (stem + "." + f), body) << "\n";
  }
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::cerr << "wrote " << write_text(dir / (stem + ".manifest.json"), manifest.to_json().dump(2) + "\n")
            << "\n";
  return art.exit_code;
}

void add_output_options(CLI::App* sub, OutputOptions& o, const std::string& default_out) {
  o.out = default_out;
  sub->add_option("--out", o.out, "Comma list of json, csv, svg")->capture_default_str();
  sub->add_option("--output-dir", o.output_dir, "Write <stem>.<fmt> files and a manifest here");
  sub->add_option("--stem", o.stem, "File stem (default: subcommand name)");
}

std::string joined(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  const auto started = std::chrono::steady_clock::now();
  CLI::App app{"Planar elasticae: elliptic functions, free-boundary minimisers, clamped solver"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", std::string(ELASTICA_VERSION));
  app.require_subcommand(1);

  EllipticArgs ea;
  OutputOptions eo;
  auto* s_ell = app.add_subcommand("elliptic", "Elliptic integrals and Jacobi functions");
  s_ell->add_option("--fn", ea.fn, "K, E, F, Einc, am, sncndn, dK, dE")->capture_default_str();
  s_ell->add_option("--m", ea.m, "Parameter m = k^2")->required();
  s_ell->add_option("--x", ea.x, "Amplitude for F and Einc, argument u for am and sncndn");
  add_output_options(s_ell, eo, "json");

  FamilyArgs fa;
  OutputOptions fo;
  auto* s_fam = app.add_subcommand("family", "Sample an elastica family");
  s_fam->add_option("--kind", fa.kind, "linear, wavelike, borderline, orbitlike, circular")
      ->capture_default_str();
  s_fam->add_option("--m", fa.m, "Elliptic parameter (wavelike, orbitlike)")->capture_default_str();
  s_fam->add_option("--scale", fa.scale, "Scale Lambda")->capture_default_str();
  s_fam->add_option("--from", fa.from, "Start arc length (default 0, borderline -8)");
  s_fam->add_option("--to", fa.to, "End arc length, auto-half-period or auto-period")
      ->capture_default_str();
  s_fam->add_option("--h", fa.h, "Sample spacing")->capture_default_str();
  add_output_options(s_fam, fo, "csv");

  MapsArgs ma;
  OutputOptions mo;
  auto* s_map = app.add_subcommand("maps", "Parameter maps, m0 and pinned modes");
  s_map->add_flag("--m0", ma.m0, "Figure-eight parameter m0");
  s_map->add_flag("--extremum", ma.extremum, "Maximum of the penalised wavelike map");
  s_map->add_flag("--pinned", ma.pinned, "Roots for a pinned target");
  s_map->add_option("--kind", ma.kind, "wave-fixed, orbit-fixed, wave-penalised, orbit-penalised")
      ->capture_default_str();
  s_map->add_option("--forward", ma.forward, "Evaluate the map at m");
  s_map->add_option("--invert", ma.invert, "Solve map(m) = target");
  s_map->add_option("--target", ma.target, "Pinned target ell sqrt(lambda)");
  s_map->add_option("--n", ma.n_mode, "Pinned mode number")->capture_default_str();
  add_output_options(s_map, mo, "");

  FbpArgs ba;
  OutputOptions bo;
  auto* s_fbp = app.add_subcommand("fbp", "Free-boundary minimiser");
  s_fbp->add_option("--mode", ba.mode, "fixed or penalised")->capture_default_str();
  s_fbp->add_option("--ell", ba.ell, "Signed distance between the support lines")->capture_default_str();
  s_fbp->add_option("--L", ba.L, "Length (fixed mode)")->capture_default_str();
  s_fbp->add_option("--lambda", ba.lambda, "Length penalty (penalised mode)")->capture_default_str();
  s_fbp->add_option("--orient", ba.orient, "same or opposite end tangent")->capture_default_str();
  s_fbp->add_option("--h", ba.h, "Sample spacing")->capture_default_str();
  add_output_options(s_fbp, bo, "json");

  SolveArgs sa;
  OutputOptions so;
  auto* s_sol = app.add_subcommand("solve", "Discrete clamped elastica");
  s_sol->add_option("--ell", sa.ell, "End point x,y")->delimiter(',')->expected(2);
  s_sol->add_option("--theta0", sa.theta0, "Start angle")->capture_default_str();
  s_sol->add_option("--theta1", sa.theta1, "End angle")->capture_default_str();
  auto* optL = s_sol->add_option("--L", sa.L, "Fixed length");
  auto* optLam = s_sol->add_option("--lambda", sa.lambda, "Length penalty");
  optL->excludes(optLam);
  s_sol->add_option("--n", sa.n, "Segments")->capture_default_str();
  s_sol->add_option("--restarts", sa.restarts, "Restarts; above 1 runs a uniqueness probe")
      ->capture_default_str();
  s_sol->add_option("--seed", sa.seed, "Seed for restart noise")->capture_default_str();
  s_sol->add_flag("--support-lines", sa.support_lines, "End point slides on the line x = ell_x");
  s_sol->add_option("--grad-tol", sa.grad_tol)->capture_default_str();
  s_sol->add_option("--constraint-tol", sa.constraint_tol)->capture_default_str();
  s_sol->add_option("--max-outer", sa.max_outer)->capture_default_str();
  s_sol->add_option("--max-inner", sa.max_inner)->capture_default_str();
  add_output_options(s_sol, so, "json");

  StraightenArgs ta;
  OutputOptions to;
  auto* s_str = app.add_subcommand("straighten", "Clamped solve with ell close to L");
  s_str->add_option("--theta0", ta.theta0)->capture_default_str();
  s_str->add_option("--theta1", ta.theta1)->capture_default_str();
  s_str->add_option("--L", ta.L)->capture_default_str();
  s_str->add_option("--ell", ta.ell)->capture_default_str();
  s_str->add_option("--n", ta.n, "Minimum segments")->capture_default_str();
  s_str->add_option("--points-per-eps", ta.points_per_eps)->capture_default_str();
  s_str->add_option("--window", ta.window, "Rescaled comparison window")->capture_default_str();
  add_output_options(s_str, to, "json");

  StraightenArgs ka;
  ka.ell = 1.0;
  OutputOptions ko;
  auto* s_scan = app.add_subcommand("straighten-scan", "Length map over a decreasing eps grid");
  s_scan->add_option("--theta0", ka.theta0)->capture_default_str();
  s_scan->add_option("--theta1", ka.theta1)->capture_default_str();
  s_scan->add_option("--ell", ka.ell)->capture_default_str();
  s_scan->add_option("--eps", ka.eps, "Comma list, strictly decreasing")->delimiter(',');
  s_scan->add_option("--n", ka.n, "Minimum segments")->capture_default_str();
  s_scan->add_option("--points-per-eps", ka.points_per_eps)->capture_default_str();
  add_output_options(s_scan, ko, "json");

  std::string suite = "all";
  auto* s_ver = app.add_subcommand("verify", "Run the acceptance checks");
  s_ver->add_option("--suite", suite, "all or a comma list of ids")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return kOk;
    for (auto* sub : app.get_subcommands()) std::cerr << sub->help();
    return kUsage;
  }

  cli::Manifest manifest;
  manifest.command_line = joined(argc, argv);
  manifest.version = ELASTICA_VERSION;

  try {
    if (s_ver->parsed()) {
      std::vector<int> ids;
      if (suite == "all") {
        ids = acceptance::all_ids();
      } else {
        for (const auto& s : split_list(suite)) ids.push_back(static_cast<int>(parse_number(s, "--suite")));
      }
      int failed = 0;
      for (int id : ids) {
        const auto o = acceptance::run(id);
        std::cout << acceptance::format(o) << std::endl;
        failed += o.passed ? 0 : 1;
      }
      std::cout << ids.size() - failed << " of " << ids.size() << " criteria passed\n";
      return failed ? kVerifyFailed : kOk;
    }

    Artifacts art;
    OutputOptions* o = nullptr;
    if (s_ell->parsed()) {
      manifest.subcommand = "elliptic";
      manifest.config = {{"fn", ea.fn}, {"m", ea.m}, {"x", ea.x}};
      art = run_elliptic(ea);
      o = &eo;
    } else if (s_fam->parsed()) {
      manifest.subcommand = "family";
      manifest.config = {{"kind", fa.kind}, {"m", fa.m}, {"scale", fa.scale},
                         {"from", fa.from ? Json(*fa.from) : Json(nullptr)}, {"to", fa.to}, {"h", fa.h}};
      art = run_family(fa);
      o = &fo;
    } else if (s_map->parsed()) {
      manifest.subcommand = "maps";
      manifest.config = {{"m0", ma.m0}, {"extremum", ma.extremum}, {"pinned", ma.pinned},
                         {"kind", ma.kind}, {"target", ma.target}, {"n", ma.n_mode},
                         {"forward", ma.forward ? Json(*ma.forward) : Json(nullptr)},
                         {"invert", ma.invert ? Json(*ma.invert) : Json(nullptr)}};
      art = run_maps(ma, mo.out.empty());
      o = &mo;
    } else if (s_fbp->parsed()) {
      manifest.subcommand = "fbp";
      manifest.config = {{"mode", ba.mode}, {"ell", ba.ell}, {"L", ba.L}, {"lambda", ba.lambda},
                         {"orient", ba.orient}, {"h", ba.h}};
      art = run_fbp(ba);
      o = &bo;
    } else if (s_sol->parsed()) {
      manifest.subcommand = "solve";
      manifest.seed = sa.seed;
      manifest.config = {{"ell", sa.ell}, {"theta0", sa.theta0}, {"theta1", sa.theta1},
                         {"L", sa.L ? Json(*sa.L) : Json(nullptr)},
                         {"lambda", sa.lambda ? Json(*sa.lambda) : Json(nullptr)},
                         {"n", sa.n}, {"restarts", sa.restarts}, {"support_lines", sa.support_lines},
                         {"grad_tol", sa.grad_tol}, {"constraint_tol", sa.constraint_tol},
                         {"max_outer", sa.max_outer}, {"max_inner", sa.max_inner}};
      art = run_solve(sa);
      o = &so;
    } else if (s_str->parsed()) {
      manifest.subcommand = "straighten";
      manifest.config = {{"theta0", ta.theta0}, {"theta1", ta.theta1}, {"L", ta.L}, {"ell", ta.ell},
                         {"n", ta.n}, {"points_per_eps", ta.points_per_eps}, {"window", ta.window}};
      art = run_straighten(ta);
      o = &to;
    } else {
      manifest.subcommand = "straighten-scan";
      manifest.config = {{"theta0", ka.theta0}, {"theta1", ka.theta1}, {"ell", ka.ell}, {"eps", ka.eps},
                         {"n", ka.n}, {"points_per_eps", ka.points_per_eps}};
      art = run_straighten_scan(ka);
      o = &ko;
    }
    return emit(art, manifest, *o, started);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (auto* sub : app.get_subcommands()) std::cerr << sub->help();
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const NonConvergenceError& e) {
    std::cerr << "no convergence: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
