#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "bvg/analysis.hpp"
#include "bvg/decompose.hpp"
#include "bvg/io.hpp"
#include "bvg/projector.hpp"
#include "bvg/roads.hpp"
#include "bvg/synth.hpp"

namespace bvg::cli {

using nlohmann::json;

/// FNV-1a 64-bit hash of a file's bytes, as 16 hex digits.
std::string file_hash(const std::filesystem::path& path);

/// Reproducibility record embedded in every JSON report.
class RunManifest {
 public:
  RunManifest(int argc, char** argv);

  void add_input(const std::filesystem::path& path);
  void set_seed(std::uint64_t seed) { seed_ = seed; has_seed_ = true; }
  json& parameters() { return parameters_; }
  json to_json() const;

 private:
  std::vector<std::string> command_line_;
  json inputs_ = json::array();
  json parameters_ = json::object();
  std::uint64_t seed_ = 0;
  bool has_seed_ = false;
  double start_ = 0.0;
};

json to_json(const Grid& g);
json to_json(const ProjectorParams& p);
json to_json(const SolveTrace& t);
json to_json(const RofEnergy& e);
json to_json(const GnormOptions& o);
json to_json(const GnormResult& r);
json to_json(const NormReport& r);
json to_json(const CaseReport& r);
json to_json(const BvgParams& p);
json to_json(const BvgTrace& t);
json to_json(const Objective& o);
json to_json(const OracleNorms& o);
json to_json(const PgmMapping& m);
json to_json(const Segment& s);
json to_json(const DetectionParams& p);

/// Segments as CSV with the columns x1,y1,x2,y2,length,k,l,log10_nfa.
std::string segments_csv(const SegmentSet& set);

void write_json(const std::filesystem::path& path, const json& j);

}  // namespace bvg::cli
