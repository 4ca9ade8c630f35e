#include "reports.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

#include "bvg/parallel.hpp"

#ifndef BVG_VERSION
#define BVG_VERSION "0.0.0"
#endif

namespace bvg::cli {

namespace {

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

const char* convention_name(BvConvention c) { return to_string(c); }

}  // namespace

std::string file_hash(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunManifest::RunManifest(int argc, char** argv) : start_(now_seconds()) {
  for (int i = 0; i < argc; ++i) command_line_.emplace_back(argv[i]);
}

void RunManifest::add_input(const std::filesystem::path& path) {
  inputs_.push_back({{"path", path.string()}, {"fnv1a64", file_hash(path)}});
}

json RunManifest::to_json() const {
  json j;
  j["command_line"] = command_line_;
  j["parameters"] = parameters_;
  j["inputs"] = inputs_;
  j["seed"] = has_seed_ ? json(seed_) : json(nullptr);
  j["version"] = BVG_VERSION;
  j["threads"] = thread_count();
  j["wall_time_s"] = now_seconds() - start_;
  return j;
}

json to_json(const Grid& g) {
  return {{"width", g.width}, {"height", g.height}, {"spacing", g.spacing}, {"x0", g.x0},
          {"y0", g.y0}};
}

json to_json(const ProjectorParams& p) {
  return {{"radius", p.radius}, {"step", p.step}, {"fp_tol", p.fp_tol}, {"max_iters", p.max_iters}};
}

json to_json(const SolveTrace& t) {
  return {{"iterations_used", t.iterations_used},
          {"final_residual", t.final_residual},
          {"converged", t.converged}};
}

json to_json(const RofEnergy& e) {
  return {{"total", e.total()}, {"tv_term", e.tv}, {"fidelity_term", e.fidelity}};
}

json to_json(const GnormOptions& o) {
  return {{"tol", o.tol},
          {"subtract_mean", o.subtract_mean},
          {"projector", to_json(o.projector)},
          {"check_every", o.check_every},
          {"levels", o.levels}};
}

json to_json(const GnormResult& r) {
  return {{"estimate", r.estimate},
          {"bracket", r.bracket},
          {"lower", r.lower},
          {"upper", r.upper},
          {"certified_lower", r.certified_lower},
          {"certified_upper", r.certified_upper},
          {"poisson_upper", r.poisson_upper},
          {"isoperimetric_upper", r.isoperimetric_upper},
          {"upper_expanded", r.upper_expanded},
          {"subtracted_mean", r.subtracted_mean},
          {"projections", r.projections},
          {"projector_iterations", r.projector_iterations},
          {"undecided", r.undecided}};
}

json to_json(const NormReport& r) {
  json j = {{"l1", r.l1},
            {"l2", r.l2},
            {"tv", r.tv},
            {"bv", r.bv},
            {"g_valid", r.g_valid},
            {"subtracted_mean", r.subtracted_mean}};
  j["g"] = r.g_valid ? json(r.g) : json(nullptr);
  j["g_tolerance"] = r.g_valid ? json(r.g_tolerance) : json(nullptr);
  if (!r.g_error.empty()) j["g_error"] = r.g_error;
  return j;
}

json to_json(const CaseReport& r) {
  json j = {{"lambda", r.lambda},
            {"mu", r.mu},
            {"tol", r.tol},
            {"convention", convention_name(r.convention)},
            {"g_thresh", r.g_thresh},
            {"bv_thresh", r.bv_thresh},
            {"input_class", to_string(r.input_class)},
            {"f_g", r.f_g},
            {"f_bv", r.f_bv},
            {"predicts_case1", r.predicts_case1},
            {"theorem1_regime", r.theorem1_regime},
            {"has_decomposition", r.has_decomposition},
            {"diagnostics", r.diagnostics}};
  if (r.has_decomposition) {
    j["gaps"] = {{"bv", r.gaps.bv}, {"g", r.gaps.g}, {"uv", r.gaps.uv}, {"vw", r.gaps.vw}};
    j["u_bv"] = r.u_bv;
    j["v_bv"] = r.v_bv;
    j["v_g"] = r.v_g_valid ? json(r.v_g) : json(nullptr);
    j["w_g"] = r.w_g_valid ? json(r.w_g) : json(nullptr);
    j["uv_inner"] = r.uv_inner;
    j["vw_inner"] = r.vw_inner;
    j["u_zero"] = r.u_zero;
    j["w_zero"] = r.w_zero;
    j["case1"] = r.case1;
    j["case2"] = r.case2;
    j["case3"] = r.case3;
    j["trivial_optimum"] = r.trivial_optimum;
  }
  return j;
}

json to_json(const BvgParams& p) {
  return {{"lambda", p.lambda},
          {"mu", p.mu},
          {"stop_tol", p.stop_tol},
          {"max_outer_iters", p.max_outer_iters},
          {"projector", to_json(p.projector)},
          {"warm_start", p.warm_start},
          {"texture_model", to_string(p.texture_model)},
          {"level_tol", p.level_tol}};
}

json to_json(const BvgTrace& t) {
  json steps = json::array();
  for (const OuterStep& s : t.steps) {
    steps.push_back({{"change_u", s.change_u},
                     {"change_w", s.change_w},
                     {"texture_radius", s.texture_radius},
                     {"inner_iterations", s.inner_iterations},
                     {"projections", s.projections},
                     {"energy", s.energy}});
  }
  return {{"outer_iterations", t.outer_iterations},
          {"converged", t.converged},
          {"final_change", t.final_change},
          {"inner_iterations", t.inner_iterations},
          {"steps", steps}};
}

json to_json(const Objective& o) {
  json j = {{"bv_term", o.bv_term}, {"l2_term", o.l2_term}, {"g_valid", o.g_valid}};
  j["total"] = o.g_valid ? json(o.total) : json(nullptr);
  j["g_term"] = o.g_valid ? json(o.g_term) : json(nullptr);
  j["g_error"] = o.g_valid ? json(o.g_error) : json(nullptr);
  return j;
}

json to_json(const OracleNorms& o) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  return {{"l1", opt(o.l1)}, {"l2", opt(o.l2)},           {"tv", opt(o.tv)},
          {"bv", opt(o.bv)}, {"g", opt(o.g)},             {"g_upper", opt(o.g_upper)},
          {"notes", o.notes}};
}

json to_json(const PgmMapping& m) { return {{"lo", m.lo}, {"hi", m.hi}}; }

json to_json(const Segment& s) {
  return {{"x1", s.x1}, {"y1", s.y1}, {"x2", s.x2},         {"y2", s.y2},
          {"length", s.length}, {"k", s.k}, {"l", s.l}, {"log10_nfa", s.log10_nfa}};
}

json to_json(const DetectionParams& p) {
  return {{"precision", p.precision},
          {"epsilon", p.epsilon},
          {"min_length", p.min_length},
          {"directions", p.directions},
          {"sample_step", p.sample_step},
          {"line_step", p.line_step},
          {"gradient_threshold", p.gradient_threshold},
          {"merge_dist", p.merge_dist},
          {"merge_angle_deg", p.merge_angle * 180.0 / std::numbers::pi},
          {"chain_gap", p.chain_gap}};
}

std::string segments_csv(const SegmentSet& set) {
  std::ostringstream os;
  os.precision(17);
  os << "x1,y1,x2,y2,length,k,l,log10_nfa\n";
  for (const Segment& s : set.segments) {
    os << s.x1 << ',' << s.y1 << ',' << s.x2 << ',' << s.y2 << ',' << s.length << ',' << s.k << ','
       << s.l << ',' << s.log10_nfa << '\n';
  }
  return os.str();
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
}

}  // namespace bvg::cli
