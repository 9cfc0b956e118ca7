#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "vvi/analysis.hpp"
#include "vvi/problem.hpp"
#include "vvi/topology.hpp"
#include "vvi/vi.hpp"

namespace vvi {

/// Malformed problem document. `path()` names the offending field, e.g.
/// `fields[1].exprs[0]`.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& path, const std::string& what)
      : std::runtime_error(path.empty() ? what : path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

using Json = nlohmann::json;

// Problem documents:
//   {"name", "n", "m",
//    "fields": [{"type":"poly","exprs":[...]} | {"type":"affine","M":[[...]],"q":[...]}],
//    "K": {"type":"whole_space"} | {"type":"box","lower":[...],"upper":[...]}
//       | {"type":"ball","center":[...],"radius":r}
//       | {"type":"polyhedron","A":[[...]],"b":[...]}
//       | {"type":"ball_intersection","base":{...},"radius":r}}
// Box bounds may be null for an infinite side.
Json convex_set_to_json(const ConvexSet& k);
ConvexSet convex_set_from_json(const Json& j, std::size_t n, const std::string& path = "K");

Json problem_to_json(const VviProblem& problem);
VviProblem problem_from_json(const Json& j);

VviProblem read_problem_file(const std::filesystem::path& path);
void write_problem_file(const VviProblem& problem, const std::filesystem::path& path);

/// A catalog name, or else a path to a problem document.
VviProblem resolve_problem(std::string_view ref);

Json outcome_to_json(const SolveOutcome& outcome);

struct ReportContext {
  std::string problem_name;
  SampleSet sample_set = SampleSet::Weak;
  AuditTarget target = AuditTarget::Weak;
  std::size_t bridge_samples = 0;
  bool monotone_certified = false;
  bool polyhedral = true;
};

Json component_report_to_json(const ComponentAnalysis& analysis, const TheoremVerdict& verdict,
                              const ReportContext& ctx);

Json monotone_to_json(const MonotoneReport& r);
Json symmetry_to_json(const SymmetryReport& r);

/// Pretty JSON with a trailing newline.
std::string dump(const Json& j);

}  // namespace vvi
