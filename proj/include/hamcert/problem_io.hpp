#pragma once

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>

#include "hamcert/certificates.hpp"
#include "hamcert/radial.hpp"
#include "hamcert/solver.hpp"

namespace hamcert {

struct SpectralSettings {
    int grid = 128;
    double tol = 1e-12;
    int max_iter = 5000;
};

struct CertificateSettings {
    int density = 64;
    double strictness = 1e-12;
    double nonexistence_cap = 10.0;
    bool use_refined_m = false;
};

struct SolverSettings {
    int nodes = 65;
    MultistartOptions multistart{};
};

/// A fully validated problem file: the system, the ladder, the effective
/// settings, and the annulus it was reduced from (when given).
struct LoadedProblem {
    ProblemSpec problem;
    std::optional<RadiiLadder> ladder;
    std::optional<AnnulusSpec> annulus;
    PhiMode phi_mode = PhiMode::Derived;
    bool intervals_optimal = false; // intervals came from the "optimal" keyword
    SpectralSettings spectral;
    CertificateSettings certificate;
    SolverSettings solver;
    double tol = 1e-10;
};

/// Parses and validates a problem document. Schema violations are collected
/// and reported all at once. `phi_mode_override`, when set, wins over the
/// file's annulus.phi_mode.
LoadedProblem load_problem(const nlohmann::json& doc,
                           std::optional<PhiMode> phi_mode_override = std::nullopt);
LoadedProblem load_problem_file(const std::string& path,
                                std::optional<PhiMode> phi_mode_override = std::nullopt);

nlohmann::json record_to_json(const ConditionRecord& rec);
nlohmann::json conclusion_to_json(const Conclusion& c);
nlohmann::json localization_to_json(const Localization& loc);

/// Round-trips a condition record (used by the report-stability tests).
ConditionRecord record_from_json(const nlohmann::json& j);

} // namespace hamcert
