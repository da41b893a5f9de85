#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zzspec/asymptotics.hpp"
#include "zzspec/dirac.hpp"
#include "zzspec/geometry.hpp"
#include "zzspec/pipeline.hpp"
#include "zzspec/studies.hpp"

namespace zzspec {

using Json = nlohmann::json;

/// Version tag written into every result document; bumped on incompatible
/// layout changes.
inline constexpr const char* kResultSchema = "zzspec.result/1";
inline constexpr const char* kConfigSchema = "zzspec.config/1";

// Geometry. Every parser throws ConfigError on missing, mistyped or unknown keys.
Json to_json(const CurvatureProfile& p);
CurvatureProfile curvature_from_json(const Json& j);
Json to_json(const DeformationProfile& p);
DeformationProfile deformation_from_json(const Json& j);
Json to_json(const CrossSection2D& s);
CrossSection2D section_from_json(const Json& j);
/// {"kind": ..., "unit": ..., geometry fields}.
Json to_json(const DomainSpec& spec);
DomainSpec domain_from_json(const Json& j);

// Settings.
Json to_json(const SolverSettings& s);
SolverSettings solver_from_json(const Json& j);
Json to_json(const UnitSystem& u);
UnitSystem units_from_json(const Json& j);
Json to_json(const SweepSettings& s);
SweepSettings sweep_from_json(const Json& j);

// Results. Wall-clock times are left out so that identical inputs give
// identical documents.
Json to_json(const Extrapolation& e);
Json to_json(const EigResult& r);
Json to_json(const SolveReport& r);
Json to_json(const DiracSpectrum& d);
Json to_json(const AsymptoticPrediction& p);
Json to_json(const LinearFit& f);
Json to_json(const PowerLawFit& f);
Json to_json(const SweepReport& r);
Json to_json(const LoopComparison& c);
Json to_json(const FiberStudy& s);
Json to_json(const Adjudication& a);

/// Eigenvalue table, one row per Dirac pair (discrete, then near-threshold,
/// then excluded), header
///   lambda_laplace,lambda_dirac_plus,lambda_dirac_minus,multiplicity,residual,class
/// where `class` names the bucket.
std::string eigen_table_csv(const DiracSpectrum& d);

/// Sweep table: x, eigenvalue, gap, count, censored, predicted_gap,
/// literal_gap, truncation, h.
std::string sweep_table_csv(const SweepReport& r);

// ---------------------------------------------------------------------------

enum class StudyKind { sweep, loops, fiber, adjudicate };

struct LoopStudyConfig {
  double radius = 3.0;
  double halfwidth = 1.0;
  double eps = 0.3;
  std::vector<int> modes{2, 3, 4};
};

struct AdjudicationConfig {
  DeformationProfile first;
  DeformationProfile second;
  double width = 1.0;
  std::vector<double> betas;
};

struct StudyConfig {
  StudyKind kind = StudyKind::sweep;
  SweepSettings sweep;
  LoopStudyConfig loops;
  std::vector<double> twist_rates;
  AdjudicationConfig adjudicate;
};

enum class OutputFormat { json, csv, both };

/// Batch configuration: domain, solver recipe, units, optional study block and
/// output location.
struct RunConfig {
  std::string command;                 // "solve" or "study"; may be set by the caller
  std::optional<DomainSpec> domain;    // required by solve and sweeps
  SolverSettings solver;
  UnitSystem units;
  std::optional<StudyConfig> study;
  std::string out_dir = ".";
  std::string stem = "result";
  OutputFormat format = OutputFormat::both;

  void validate() const;
};

RunConfig config_from_json(const Json& j);
/// Reads and parses a config file; I/O and syntax errors become ConfigError.
RunConfig load_config(const std::string& path);

OutputFormat format_from_string(const std::string& name);
std::string to_string(StudyKind kind);

}  // namespace zzspec
