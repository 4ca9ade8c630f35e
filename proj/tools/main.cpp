#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bvg/analysis.hpp"
#include "bvg/decompose.hpp"
#include "bvg/io.hpp"
#include "bvg/parallel.hpp"
#include "bvg/projector.hpp"
#include "bvg/roads.hpp"
#include "bvg/synth.hpp"
#include "reports.hpp"

#ifndef BVG_VERSION
#define BVG_VERSION "0.0.0"
#endif

namespace {

using namespace bvg;
using cli::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitNumerical = 3;

bool g_quiet = false;

void note(const std::string& msg) {
  if (!g_quiet) std::cerr << msg << '\n';
}

Image load(const std::string& path, cli::RunManifest& manifest) {
  Image img = read_image(path);
  manifest.add_input(path);
  return img;
}

/// Writes by extension: .bvgf raw, anything else PGM. Returns the value
/// mapping used for PGM output (null for raw files).
json save(const std::string& path, const Image& img) {
  if (std::filesystem::path(path).extension() == ".bvgf") {
    write_bvgf(path, img);
    return nullptr;
  }
  return cli::to_json(write_pgm(path, img));
}

std::pair<std::size_t, std::size_t> parse_size(const std::string& s) {
  std::size_t w = 0, h = 0;
  char x = 0;
  std::istringstream is(s);
  if (!(is >> w >> x >> h) || x != 'x' || !is.eof()) {
    throw InvalidParams("--grid: expected WxH, got '" + s + "'");
  }
  return {w, h};
}

std::vector<double> parse_list(const std::string& s, std::size_t n, const char* flag) {
  std::vector<double> out;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidParams(std::string(flag) + ": '" + item + "' is not a number");
    }
  }
  if (out.size() != n) {
    throw InvalidParams(std::string(flag) + ": expected " + std::to_string(n) + " values");
  }
  return out;
}

double radius_from(std::optional<double> lambda, std::optional<double> ball_radius) {
  if (lambda) return 1.0 / (2.0 * *lambda);
  if (ball_radius) return *ball_radius;
  throw InvalidParams("one of --lambda or --ball-radius is required");
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string kind = "disk";
  double r = 1.0;
  double amplitude = 1.0;
  std::string grid = "256x256";
  std::string domain = "0,0,1,1";
  std::string center;
  double side = 1.0;
  double frequency = 8.0;
  double length = 0.8;
  double thickness = 0.01;
  double angle_deg = 0.0;
  double sigma = 1.0;
  std::uint64_t seed = 0;
  int supersample = 1;
  double edge_width = 0.0;
  bool strict = false;
  std::string out;
  std::string oracle;
};

void add_synth(CLI::App& app, SynthArgs& a) {
  app.add_option("--kind", a.kind, "disk, texture, bar, bump, noise")->capture_default_str();
  app.add_option("--r", a.r, "Disk radius, or bump standard deviation")->capture_default_str();
  app.add_option("--amplitude", a.amplitude)->capture_default_str();
  app.add_option("--grid", a.grid, "Pixels, WxH")->capture_default_str();
  app.add_option("--domain", a.domain, "xmin,ymin,xmax,ymax")->capture_default_str();
  app.add_option("--center", a.center, "cx,cy (default: domain center)");
  app.add_option("--side", a.side, "Textured square side")->capture_default_str();
  app.add_option("--frequency", a.frequency, "Texture cycles per unit length")
      ->capture_default_str();
  app.add_option("--length", a.length, "Bar length")->capture_default_str();
  app.add_option("--thickness", a.thickness, "Bar thickness")->capture_default_str();
  app.add_option("--angle", a.angle_deg, "Bar direction in degrees")->capture_default_str();
  app.add_option("--sigma", a.sigma, "Noise standard deviation")->capture_default_str();
  app.add_option("--seed", a.seed, "Noise seed")->capture_default_str();
  app.add_option("--supersample", a.supersample, "Subsamples per axis on edges")
      ->capture_default_str();
  app.add_option("--edge-width", a.edge_width, "Edge ramp width in pixels")->capture_default_str();
  app.add_flag("--strict", a.strict, "Fail on under-resolved features");
  app.add_option("-o,--out", a.out, "Output image (.pgm or .bvgf)")->required();
  app.add_option("--oracle", a.oracle, "Analytic norms JSON");
}

int run_synth(const SynthArgs& a, cli::RunManifest& manifest) {
  const auto [w, h] = parse_size(a.grid);
  const auto d = parse_list(a.domain, 4, "--domain");
  if (!(d[2] > d[0]) || !(d[3] > d[1])) throw InvalidParams("--domain: empty domain");
  const Grid grid = Grid::covering(w, h, d[0], d[2], d[1]);
  if (std::abs(grid.spacing * static_cast<double>(h) - (d[3] - d[1])) > 1e-9 * (d[3] - d[1])) {
    throw InvalidParams("--domain: aspect ratio does not match --grid (pixels must be square)");
  }
  SceneSpec s;
  const std::string kind = a.kind == "texture" ? "textured_square" : a.kind == "bump" ? "gaussian_bump" : a.kind;
  s.kind = scene_kind_from_string(kind);
  s.grid = grid;
  if (a.center.empty()) {
    s.cx = 0.5 * (d[0] + d[2]);
    s.cy = 0.5 * (d[1] + d[3]);
  } else {
    const auto c = parse_list(a.center, 2, "--center");
    s.cx = c[0];
    s.cy = c[1];
  }
  s.amplitude = a.amplitude;
  s.radius = a.r;
  s.side = a.side;
  s.frequency = a.frequency;
  s.length = a.length;
  s.thickness = a.thickness;
  s.angle = a.angle_deg * std::numbers::pi / 180.0;
  s.sigma = a.sigma;
  s.seed = a.seed;
  s.supersample = a.supersample;
  s.edge_width = a.edge_width;
  s.strict = a.strict;
  if (s.kind == SceneKind::Composite) throw InvalidParams("--kind: composite scenes need the library API");

  for (const std::string& warn : resolution_warnings(s)) note("warning: " + warn);
  const Image img = render(s);
  manifest.set_seed(a.seed);
  json& p = manifest.parameters();
  p = {{"kind", to_string(s.kind)}, {"grid", cli::to_json(grid)}, {"cx", s.cx}, {"cy", s.cy},
       {"amplitude", s.amplitude}, {"r", s.radius}, {"side", s.side},
       {"frequency", s.frequency}, {"length", s.length}, {"thickness", s.thickness},
       {"angle_deg", a.angle_deg}, {"sigma", s.sigma}, {"supersample", s.supersample},
       {"edge_width", s.edge_width}, {"strict", s.strict}};
  const json mapping = save(a.out, img);
  if (!a.oracle.empty()) {
    json j;
    j["oracle"] = cli::to_json(oracle_norms(s));
    j["mapping"] = mapping;
    j["warnings"] = resolution_warnings(s);
    j["manifest"] = manifest.to_json();
    cli::write_json(a.oracle, j);
  }
  note("wrote " + a.out);
  return kExitOk;
}

// ---------------------------------------------------------------- rof

struct RofArgs {
  std::string in;
  std::optional<double> lambda;
  std::optional<double> ball_radius;
  double tol = 1e-6;
  int max_iters = 5000;
  std::string out;
  std::string v_out;
  std::string report;
};

void add_rof(CLI::App& app, RofArgs& a) {
  app.add_option("-i,--input", a.in, "Input image (.pgm or .bvgf)")->required();
  auto* l = app.add_option("--lambda", a.lambda, "Fidelity weight; ball radius 1/(2 lambda)");
  auto* r = app.add_option("--ball-radius", a.ball_radius, "G-ball radius");
  l->excludes(r);
  app.add_option("--tol", a.tol, "Dual fixed-point tolerance (max-norm)")->capture_default_str();
  app.add_option("--max-iters", a.max_iters)->capture_default_str();
  app.add_option("-o,--out", a.out, "Structure image u")->required();
  app.add_option("--v-out", a.v_out, "Residual image v = f - u");
  app.add_option("--report", a.report, "Report JSON");
}

int run_rof(const RofArgs& a, cli::RunManifest& manifest) {
  const double radius = radius_from(a.lambda, a.ball_radius);
  if (!(radius > 0.0)) throw InvalidParams("--lambda/--ball-radius must be > 0");
  const double lambda = 1.0 / (2.0 * radius);
  const Image f = load(a.in, manifest);
  ProjectorParams pp;
  pp.fp_tol = a.tol;
  pp.max_iters = a.max_iters;
  pp = pp.with_radius(radius);
  pp.validate();
  manifest.parameters() = {{"lambda", lambda}, {"ball_radius", radius}, {"projector", cli::to_json(pp)}};

  const RofResult res = rof_solve(f, lambda, pp);
  json j;
  j["u_mapping"] = save(a.out, res.u);
  if (!a.v_out.empty()) j["v_mapping"] = save(a.v_out, res.v);
  const SolveTrace& t = res.trace;
  note("rof: " + std::to_string(t.iterations_used) + " iterations, residual " +
       std::to_string(t.final_residual) + (t.converged ? "" : " (not converged)"));
  if (!a.report.empty()) {
    j["iterations_used"] = t.iterations_used;
    j["final_residual"] = t.final_residual;
    j["converged"] = t.converged;
    j["energy"] = cli::to_json(rof_energy(f, res.u, lambda));
    j["grid"] = cli::to_json(f.grid());
    j["manifest"] = manifest.to_json();
    cli::write_json(a.report, j);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- decompose

struct DecomposeArgs {
  std::string in;
  double lambda = 1.0;
  double mu = 1.0;
  double tol = 1e-4;
  int max_iters = 200;
  int inner_max_iters = 5000;
  double inner_tol = 1e-6;
  bool no_warm_start = false;
  bool constrained = false;
  bool seminorm = false;
  double gnorm_tol = 1e-2;
  std::string prefix;
};

void add_decompose(CLI::App& app, DecomposeArgs& a) {
  app.add_option("-i,--input", a.in, "Input image (.pgm or .bvgf)")->required();
  app.add_option("--lambda", a.lambda, "Weight of the residual L2 term")->capture_default_str();
  app.add_option("--mu", a.mu, "Weight of the texture G term")->capture_default_str();
  app.add_option("--tol", a.tol, "Outer stop tolerance (max-norm change)")->capture_default_str();
  app.add_option("--max-iters", a.max_iters, "Outer iteration cap")->capture_default_str();
  app.add_option("--inner-tol", a.inner_tol, "Projector tolerance")->capture_default_str();
  app.add_option("--inner-max-iters", a.inner_max_iters, "Projector iteration cap")
      ->capture_default_str();
  app.add_flag("--no-warm-start", a.no_warm_start, "Start every projection afresh");
  app.add_flag("--constrained", a.constrained, "Constrain w to the G-ball of radius mu");
  app.add_flag("--seminorm", a.seminorm, "Use J(u) as the BV norm in the check");
  app.add_option("--gnorm-tol", a.gnorm_tol, "G-norm estimator tolerance")->capture_default_str();
  app.add_option("--out-prefix", a.prefix, "Output prefix P: P_{u,v,w}.{pgm,bvgf}, P_report.json")
      ->required();
}

int run_decompose(const DecomposeArgs& a, cli::RunManifest& manifest) {
  const Image f = load(a.in, manifest);
  BvgParams p;
  p.lambda = a.lambda;
  p.mu = a.mu;
  p.stop_tol = a.tol;
  p.max_outer_iters = a.max_iters;
  p.projector.fp_tol = a.inner_tol;
  p.projector.max_iters = a.inner_max_iters;
  p.warm_start = !a.no_warm_start;
  p.texture_model = a.constrained ? TextureModel::Constrained : TextureModel::Penalized;
  p.validate();
  CheckOptions co;
  co.convention = a.seminorm ? BvConvention::Seminorm : BvConvention::Full;
  co.gnorm.tol = a.gnorm_tol;
  manifest.parameters() = {{"bvg", cli::to_json(p)},
                           {"convention", to_string(co.convention)},
                           {"gnorm_tol", a.gnorm_tol}};

  const Decomposition d = bvg_decompose(f, p);
  note("decompose: " + std::to_string(d.trace.outer_iterations) + " outer iterations" +
       (d.trace.converged ? "" : " (not converged)"));
  json j;
  json mappings;
  for (const auto& [name, img] :
       {std::pair<const char*, const Image*>{"u", &d.u}, {"v", &d.v}, {"w", &d.w}}) {
    const std::string base = a.prefix + "_" + name;
    write_bvgf(base + ".bvgf", *img);
    mappings[name] = save(base + ".pgm", *img);
  }
  j["pgm_mappings"] = mappings;
  j["trace"] = cli::to_json(d.trace);

  GnormOptions go = co.gnorm;
  go.subtract_mean = true;
  j["norms"] = {{"f", cli::to_json(norms(f, go))},
                {"u", cli::to_json(norms(d.u, go))},
                {"v", cli::to_json(norms(d.v, go))},
                {"w", cli::to_json(norms(d.w, go))}};
  j["objective"] = cli::to_json(objective(d, p.lambda, p.mu, co.gnorm, co.convention));
  j["case_report"] = cli::to_json(check_optimality(d.u, d.v, d.w, p.lambda, p.mu, co));
  j["grid"] = cli::to_json(f.grid());
  j["manifest"] = manifest.to_json();
  cli::write_json(a.prefix + "_report.json", j);
  return kExitOk;
}

// ---------------------------------------------------------------- analyze / gnorm

struct AnalyzeArgs {
  std::string in;
  bool subtract_mean = false;
  double tol = 1e-2;
  std::string json_out;
};

void add_analyze(CLI::App& app, AnalyzeArgs& a) {
  app.add_option("-i,--input", a.in, "Input image (.pgm or .bvgf)")->required();
  app.add_flag("--subtract-mean", a.subtract_mean, "Remove the mean before the G-norm");
  app.add_option("--tol", a.tol, "G-norm estimator tolerance")->capture_default_str();
  app.add_option("--json", a.json_out, "Report JSON");
}

GnormOptions gnorm_options(const AnalyzeArgs& a) {
  GnormOptions o;
  o.tol = a.tol;
  o.subtract_mean = a.subtract_mean;
  return o;
}

int run_analyze(const AnalyzeArgs& a, cli::RunManifest& manifest) {
  const Image f = load(a.in, manifest);
  const GnormOptions o = gnorm_options(a);
  manifest.parameters() = {{"gnorm", cli::to_json(o)}};
  const NormReport r = norms(f, o);
  if (!r.g_valid) throw NonZeroMean(r.g_error);
  json j = cli::to_json(r);
  j["grid"] = cli::to_json(f.grid());
  j["manifest"] = manifest.to_json();
  if (!a.json_out.empty()) cli::write_json(a.json_out, j);
  if (!g_quiet) std::cout << j.dump(2) << '\n';
  return kExitOk;
}

int run_gnorm(const AnalyzeArgs& a, cli::RunManifest& manifest) {
  const Image f = load(a.in, manifest);
  const GnormOptions o = gnorm_options(a);
  manifest.parameters() = {{"gnorm", cli::to_json(o)}};
  json j = cli::to_json(gnorm_estimate(f, o));
  j["grid"] = cli::to_json(f.grid());
  j["manifest"] = manifest.to_json();
  if (!a.json_out.empty()) cli::write_json(a.json_out, j);
  if (!g_quiet) std::cout << j.dump(2) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- classify / check

struct CheckArgs {
  std::string in;
  std::string u, v, w;
  double lambda = 1.0;
  double mu = 1.0;
  double tol = 0.05;
  double gnorm_tol = 1e-2;
  bool seminorm = false;
  std::string json_out;
};

void add_case_options(CLI::App& app, CheckArgs& a) {
  app.add_option("--lambda", a.lambda)->required();
  app.add_option("--mu", a.mu)->required();
  app.add_option("--tol", a.tol, "Relative tolerance on every condition")->capture_default_str();
  app.add_option("--gnorm-tol", a.gnorm_tol, "G-norm estimator tolerance")->capture_default_str();
  app.add_flag("--seminorm", a.seminorm, "Use J(u) as the BV norm");
  app.add_option("--json", a.json_out, "Report JSON");
}

CheckOptions check_options(const CheckArgs& a, cli::RunManifest& manifest) {
  CheckOptions o;
  o.tol = a.tol;
  o.convention = a.seminorm ? BvConvention::Seminorm : BvConvention::Full;
  o.gnorm.tol = a.gnorm_tol;
  manifest.parameters() = {{"lambda", a.lambda}, {"mu", a.mu}, {"tol", a.tol},
                           {"convention", to_string(o.convention)}, {"gnorm", cli::to_json(o.gnorm)}};
  return o;
}

void emit(const CheckArgs& a, json j, cli::RunManifest& manifest) {
  j["manifest"] = manifest.to_json();
  if (!a.json_out.empty()) cli::write_json(a.json_out, j);
  if (!g_quiet) std::cout << j.dump(2) << '\n';
}

int run_classify(const CheckArgs& a, cli::RunManifest& manifest) {
  const Image f = load(a.in, manifest);
  const CheckOptions o = check_options(a, manifest);
  emit(a, cli::to_json(classify_input(f, a.lambda, a.mu, o)), manifest);
  return kExitOk;
}

int run_check(const CheckArgs& a, cli::RunManifest& manifest) {
  const Image u = load(a.u, manifest);
  const Image v = load(a.v, manifest);
  const Image w = load(a.w, manifest);
  require_same_grid(u.grid(), v.grid(), "check: u and v");
  require_same_grid(u.grid(), w.grid(), "check: u and w");
  const CheckOptions o = check_options(a, manifest);
  emit(a, cli::to_json(check_optimality(u, v, w, a.lambda, a.mu, o)), manifest);
  return kExitOk;
}

// ---------------------------------------------------------------- detect-roads

struct RoadArgs {
  std::string in;
  double lambda = 1.0;
  double mu = 1.0;
  bool no_decompose = false;
  DetectionParams det;
  double merge_angle_deg = 5.0;
  std::string segments;
  std::string csv;
  std::string overlay;
  std::string texture;
};

void add_roads(CLI::App& app, RoadArgs& a) {
  app.add_option("-i,--input", a.in, "Input image (.pgm or .bvgf)")->required();
  app.add_option("--lambda", a.lambda)->capture_default_str();
  app.add_option("--mu", a.mu)->capture_default_str();
  app.add_flag("--no-decompose", a.no_decompose, "Detect on the input instead of its texture part");
  app.add_option("--epsilon", a.det.epsilon, "NFA threshold")->capture_default_str();
  app.add_option("--precision", a.det.precision, "Angular precision p")->capture_default_str();
  app.add_option("--min-length", a.det.min_length, "Minimum physical length")->capture_default_str();
  app.add_option("--directions", a.det.directions, "Candidate directions")->capture_default_str();
  app.add_option("--gradient-threshold", a.det.gradient_threshold, "Per-pixel gradient threshold");
  app.add_option("--merge-dist", a.det.merge_dist, "Physical merge distance (default 3 px)");
  app.add_option("--merge-angle", a.merge_angle_deg, "Merge angle in degrees")->capture_default_str();
  app.add_option("--chain-gap", a.det.chain_gap, "Physical chaining gap (default 10 px)");
  app.add_option("--segments", a.segments, "Segments JSON")->required();
  app.add_option("--csv", a.csv, "Segments CSV");
  app.add_option("--overlay", a.overlay, "Input with segments drawn");
  app.add_option("--texture-out", a.texture, "Texture part w");
}

int run_roads(RoadArgs a, cli::RunManifest& manifest) {
  const Image f = load(a.in, manifest);
  a.det.merge_angle = a.merge_angle_deg * std::numbers::pi / 180.0;
  a.det.validate();
  const DetectionParams det = a.det.resolved(f.grid().spacing);
  BvgParams bp;
  bp.lambda = a.lambda;
  bp.mu = a.mu;
  manifest.parameters() = {{"detection", cli::to_json(det)}, {"decompose", !a.no_decompose}};
  if (!a.no_decompose) manifest.parameters()["bvg"] = cli::to_json(bp);

  SegmentSet raw;
  SegmentSet fused;
  Image overlay;
  if (a.no_decompose) {
    raw = detect_segments(f, det);
    fused = fuse_segments(raw, det);
    overlay = draw_segments(f, fused);
  } else {
    RoadResult r = road_pipeline(f, bp, det);
    if (!a.texture.empty()) save(a.texture, r.decomposition.w);
    raw = std::move(r.raw);
    fused = std::move(r.segments);
    overlay = std::move(r.overlay);
  }
  note("detect-roads: " + std::to_string(raw.segments.size()) + " raw, " +
       std::to_string(fused.segments.size()) + " fused segments");
  json segs = json::array();
  for (const Segment& s : fused.segments) segs.push_back(cli::to_json(s));
  json j;
  j["segments"] = segs;
  j["raw_count"] = raw.segments.size();
  j["log10_tests"] = raw.log10_tests;
  j["degenerate"] = raw.degenerate;
  j["grid"] = cli::to_json(f.grid());
  j["manifest"] = manifest.to_json();
  cli::write_json(a.segments, j);
  if (!a.csv.empty()) write_file_atomic(a.csv, cli::segments_csv(fused));
  if (!a.overlay.empty()) save(a.overlay, overlay);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure / residual / texture image decomposition"};
  app.set_version_flag("--version", "bvg " BVG_VERSION);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0: all)")->envname("BVG_THREADS");
  app.add_flag("--quiet", g_quiet, "Suppress progress messages");
  app.require_subcommand(1);
  app.fallthrough();

  SynthArgs synth;
  RofArgs rof;
  DecomposeArgs dec;
  AnalyzeArgs analyze;
  AnalyzeArgs gnorm;
  CheckArgs classify;
  CheckArgs check;
  RoadArgs roads;

  add_synth(*app.add_subcommand("synth", "Render a synthetic scene"), synth);
  add_rof(*app.add_subcommand("rof", "ROF denoising"), rof);
  add_decompose(*app.add_subcommand("decompose", "Three-part decomposition"), dec);
  add_analyze(*app.add_subcommand("analyze", "L1, L2, TV, BV and G norms"), analyze);
  add_analyze(*app.add_subcommand("gnorm", "G-norm estimate with bounds"), gnorm);
  auto* cls = app.add_subcommand("classify", "Predict the optimality case for an input");
  cls->add_option("-i,--input", classify.in, "Input image (.pgm or .bvgf)")->required();
  add_case_options(*cls, classify);
  auto* chk = app.add_subcommand("check", "Check the optimality conditions of a decomposition");
  chk->add_option("-u", check.u, "Structure part (.bvgf)")->required();
  chk->add_option("-v", check.v, "Residual part (.bvgf)")->required();
  chk->add_option("-w", check.w, "Texture part (.bvgf)")->required();
  add_case_options(*chk, check);
  add_roads(*app.add_subcommand("detect-roads", "Detect long thin segments"), roads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return kExitOk;
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    if (threads < 0) throw InvalidParams("--threads must be >= 0");
    set_thread_count(threads);
    cli::RunManifest manifest(argc, argv);
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "synth") return run_synth(synth, manifest);
    if (cmd == "rof") return run_rof(rof, manifest);
    if (cmd == "decompose") return run_decompose(dec, manifest);
    if (cmd == "analyze") return run_analyze(analyze, manifest);
    if (cmd == "gnorm") return run_gnorm(gnorm, manifest);
    if (cmd == "classify") return run_classify(classify, manifest);
    if (cmd == "check") return run_check(check, manifest);
    return run_roads(roads, manifest);
  } catch (const InvalidParams& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const GridMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
