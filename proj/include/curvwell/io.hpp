#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "curvwell/hetero1d.hpp"
#include "curvwell/model.hpp"
#include "curvwell/saddle2d.hpp"
#include "curvwell/verify.hpp"

namespace curvwell::io {

using json = nlohmann::json;

// --- CSV ---------------------------------------------------------------

/// Profile export: header `t,q,dq` at node resolution.
void write_profile_csv(const std::filesystem::path& path, const Profile1D& profile);

/// Extended-field export: `x,y,u` over [-R, R]^2 (Cartesian) or
/// `rho,theta,u` over the disk (polar), decimated by `stride` nodes.
void write_field_csv(const std::filesystem::path& path, const ExtendedField& field, int stride);
void write_field_json(const std::filesystem::path& path, const ExtendedField& field, int stride);

/// Tabulated potential, header `t,V,V1,V2`.
Potential read_potential_csv(const std::filesystem::path& path, double alpha);

/// Tabulated coefficient, header `x,y,A`, rows filling a rectangular lattice.
CoefficientField read_coefficient_csv(const std::filesystem::path& path);

// --- JSON reports -------------------------------------------------------

json to_json(const ConditionReport& report);
json to_json(const TheoremReport& report);
json to_json(const TruncationReport& report);
json to_json(const ResidualNorms& norms);
json to_json(const BracketReport& report);
json to_json(const DecayFit& fit);

/// `{config, iterations: [{k, energy, gradInf}], converged, wallSeconds}`.
json history_json(const std::vector<IterRecord>& history, bool converged, double wall_seconds,
                  const json& config);

// --- solution persistence ------------------------------------------------

void save_solution(const std::filesystem::path& path, const Solution& solution,
                   const SolveConfig& cfg);
Solution load_solution(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace curvwell::io
