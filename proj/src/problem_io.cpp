#include "hamcert/problem_io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

#include "hamcert/bounds.hpp"

namespace hamcert {

using nlohmann::json;

namespace {

class SchemaErrors {
public:
    void add(const std::string& msg) { messages_.push_back(msg); }
    bool any() const { return !messages_.empty(); }
    [[noreturn]] void raise() const {
        std::string all = "problem file invalid:";
        for (const std::string& m : messages_) all += "\n  - " + m;
        throw ValidationError(all);
    }
    void raise_if_any() const {
        if (any()) raise();
    }

private:
    std::vector<std::string> messages_;
};

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where, SchemaErrors& errs) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) errs.add(where + ": unknown key '" + key + "'");
    }
}

std::optional<double> get_number(const json& obj, const char* key, const std::string& where,
                                 SchemaErrors& errs, bool required = true) {
    if (!obj.contains(key)) {
        if (required) errs.add(where + ": missing '" + std::string(key) + "'");
        return std::nullopt;
    }
    if (!obj[key].is_number()) {
        errs.add(where + ": '" + std::string(key) + "' must be a number");
        return std::nullopt;
    }
    return obj[key].get<double>();
}

std::optional<Expression> get_expression(const json& obj, const char* key,
                                         const std::string& where, SchemaErrors& errs) {
    if (!obj.contains(key)) {
        errs.add(where + ": missing '" + std::string(key) + "'");
        return std::nullopt;
    }
    if (!obj[key].is_string()) {
        errs.add(where + ": '" + std::string(key) + "' must be an expression string");
        return std::nullopt;
    }
    try {
        return Expression::parse(obj[key].get<std::string>());
    } catch (const ExprParseError& e) {
        errs.add(where + "." + key + ": " + e.what());
        return std::nullopt;
    }
}

std::optional<std::array<double, 2>> get_pair(const json& obj, const char* key,
                                              const std::string& where, SchemaErrors& errs,
                                              bool required) {
    if (!obj.contains(key)) {
        if (required) errs.add(where + ": missing '" + std::string(key) + "'");
        return std::nullopt;
    }
    const json& v = obj[key];
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        errs.add(where + ": '" + std::string(key) + "' must be a pair of numbers");
        return std::nullopt;
    }
    return std::array<double, 2>{v[0].get<double>(), v[1].get<double>()};
}

std::optional<AnnulusSpec> parse_annulus(const json& doc, SchemaErrors& errs,
                                         PhiMode& mode) {
    if (!doc.contains("annulus")) return std::nullopt;
    const json& a = doc["annulus"];
    if (!a.is_object()) {
        errs.add("annulus: must be an object");
        return std::nullopt;
    }
    reject_unknown_keys(
        a, {"n", "R1", "R0", "h1", "h2", "alpha1", "alpha2", "R_eta", "R_xi", "phi_mode"},
        "annulus", errs);
    AnnulusSpec spec;
    if (a.contains("n") && a["n"].is_number_integer())
        spec.n = a["n"].get<int>();
    else
        errs.add("annulus: missing integer 'n'");
    auto num = [&](const char* key, double& into) {
        if (auto v = get_number(a, key, "annulus", errs)) into = *v;
    };
    num("R1", spec.R1);
    num("R0", spec.R0);
    num("alpha1", spec.alpha1);
    num("alpha2", spec.alpha2);
    num("R_eta", spec.R_eta);
    num("R_xi", spec.R_xi);
    if (auto h1 = get_expression(a, "h1", "annulus", errs)) spec.h1 = std::move(*h1);
    if (auto h2 = get_expression(a, "h2", "annulus", errs)) spec.h2 = std::move(*h2);
    if (a.contains("phi_mode")) {
        const std::string m = a["phi_mode"].is_string() ? a["phi_mode"].get<std::string>() : "";
        if (m == "derived")
            mode = PhiMode::Derived;
        else if (m == "paper_printed")
            mode = PhiMode::PaperPrinted;
        else
            errs.add("annulus.phi_mode: must be 'derived' or 'paper_printed'");
    }
    if (errs.any()) return std::nullopt;
    try {
        spec.validate();
    } catch (const ValidationError& e) {
        errs.add(e.what());
        return std::nullopt;
    }
    return spec;
}

} // namespace

LoadedProblem load_problem(const json& doc, std::optional<PhiMode> phi_mode_override) {
    SchemaErrors errs;
    if (!doc.is_object()) throw ValidationError("problem file: top level must be an object");
    reject_unknown_keys(doc,
                        {"spec", "kernels", "weights", "nonlinearities", "intervals",
                         "ladder", "solver", "spectral", "certificate", "annulus", "tol"},
                        "top level", errs);
    if (!doc.contains("spec") || !doc["spec"].is_number_integer() ||
        doc["spec"].get<int>() != 1)
        errs.add("top level: requires \"spec\": 1");

    PhiMode mode = PhiMode::Derived;
    std::optional<AnnulusSpec> annulus = parse_annulus(doc, errs, mode);
    if (phi_mode_override) mode = *phi_mode_override;

    // kernels: parameters first, intervals attached afterwards
    double alpha1 = 0.0, eta = 0.0, alpha2 = 0.0, xi = 0.0;
    bool have_kernel_params = false;
    if (annulus && !doc.contains("kernels")) {
        // parameters come from the reduction
        have_kernel_params = true;
    } else if (!doc.contains("kernels") || !doc["kernels"].is_object()) {
        errs.add("kernels: missing section");
    } else {
        const json& ks = doc["kernels"];
        reject_unknown_keys(ks, {"k1", "k2"}, "kernels", errs);
        if (ks.contains("k1") && ks["k1"].is_object()) {
            reject_unknown_keys(ks["k1"], {"alpha1", "eta"}, "kernels.k1", errs);
            if (auto v = get_number(ks["k1"], "alpha1", "kernels.k1", errs)) alpha1 = *v;
            if (auto v = get_number(ks["k1"], "eta", "kernels.k1", errs)) eta = *v;
        } else {
            errs.add("kernels: missing object 'k1'");
        }
        if (ks.contains("k2") && ks["k2"].is_object()) {
            reject_unknown_keys(ks["k2"], {"alpha2", "xi"}, "kernels.k2", errs);
            if (auto v = get_number(ks["k2"], "alpha2", "kernels.k2", errs)) alpha2 = *v;
            if (auto v = get_number(ks["k2"], "xi", "kernels.k2", errs)) xi = *v;
        } else {
            errs.add("kernels: missing object 'k2'");
        }
        have_kernel_params = !errs.any();
    }

    // weights: expressions, or "radial" resolved through the annulus
    std::optional<WeightFunction> g1, g2;
    std::optional<ReducedWeights> reduced;
    auto ensure_reduced = [&]() {
        if (!reduced && annulus) reduced = build_weights(*annulus, mode);
    };
    if (doc.contains("weights") || annulus) {
        auto resolve = [&](const char* key, std::optional<WeightFunction>& into) {
            if (!doc.contains("weights") || !doc["weights"].contains(key)) {
                if (annulus) {
                    ensure_reduced();
                    if (reduced)
                        into = std::string(key) == "g1" ? reduced->g1 : reduced->g2;
                } else {
                    errs.add("weights: missing '" + std::string(key) + "'");
                }
                return;
            }
            const json& w = doc["weights"][key];
            if (w.is_string() && w.get<std::string>() == "radial") {
                if (!annulus) {
                    errs.add("weights." + std::string(key) +
                             ": 'radial' requires an annulus section");
                    return;
                }
                ensure_reduced();
                if (reduced) into = std::string(key) == "g1" ? reduced->g1 : reduced->g2;
                return;
            }
            if (!w.is_string()) {
                errs.add("weights." + std::string(key) + ": must be an expression string");
                return;
            }
            try {
                into = WeightFunction::parse(w.get<std::string>());
            } catch (const ValidationError& e) {
                errs.add("weights." + std::string(key) + ": " + e.what());
            }
        };
        if (doc.contains("weights")) {
            if (!doc["weights"].is_object())
                errs.add("weights: must be an object");
            else
                reject_unknown_keys(doc["weights"], {"g1", "g2"}, "weights", errs);
        }
        resolve("g1", g1);
        resolve("g2", g2);
    } else {
        errs.add("weights: missing section");
    }
    if (annulus && reduced) {
        // parameters implied by the reduction when no kernels section is given
        if (!doc.contains("kernels")) {
            alpha1 = reduced->alpha1;
            eta = reduced->eta;
            alpha2 = reduced->alpha2;
            xi = reduced->xi;
        }
    }

    std::optional<Expression> f1, f2;
    if (!doc.contains("nonlinearities") || !doc["nonlinearities"].is_object()) {
        errs.add("nonlinearities: missing section");
    } else {
        reject_unknown_keys(doc["nonlinearities"], {"f1", "f2"}, "nonlinearities", errs);
        f1 = get_expression(doc["nonlinearities"], "f1", "nonlinearities", errs);
        f2 = get_expression(doc["nonlinearities"], "f2", "nonlinearities", errs);
    }

    // intervals
    bool intervals_optimal = false;
    std::optional<Interval> i1, i2;
    if (doc.contains("intervals")) {
        const json& iv = doc["intervals"];
        if (iv.is_string() && iv.get<std::string>() == "optimal") {
            intervals_optimal = true;
        } else if (iv.is_object()) {
            reject_unknown_keys(iv, {"i1", "i2"}, "intervals", errs);
            if (auto p = get_pair(iv, "i1", "intervals", errs, true)) i1 = Interval{(*p)[0], (*p)[1]};
            if (auto p = get_pair(iv, "i2", "intervals", errs, true)) i2 = Interval{(*p)[0], (*p)[1]};
        } else {
            errs.add("intervals: must be \"optimal\" or an object with i1/i2");
        }
    } else {
        intervals_optimal = true; // default to the optimal intervals
    }

    std::optional<RadiiLadder> ladder;
    if (doc.contains("ladder")) {
        const json& ld = doc["ladder"];
        if (!ld.is_object()) {
            errs.add("ladder: must be an object");
        } else {
            reject_unknown_keys(ld, {"rho", "r", "s", "sigma"}, "ladder", errs);
            RadiiLadder l;
            if (auto p = get_pair(ld, "rho", "ladder", errs, true)) l.rho = *p;
            if (auto p = get_pair(ld, "r", "ladder", errs, true)) l.r = *p;
            if (auto p = get_pair(ld, "s", "ladder", errs, false)) l.s = *p;
            if (auto p = get_pair(ld, "sigma", "ladder", errs, false)) l.sigma = *p;
            if (!errs.any()) {
                try {
                    l.validate();
                    ladder = l;
                } catch (const ValidationError& e) {
                    errs.add(e.what());
                }
            }
        }
    }

    double tol = 1e-10;
    SpectralSettings spectral;
    CertificateSettings certificate;
    SolverSettings solver;
    if (doc.contains("tol")) {
        if (auto v = get_number(doc, "tol", "top level", errs)) tol = *v;
    }
    if (doc.contains("spectral")) {
        const json& sp = doc["spectral"];
        reject_unknown_keys(sp, {"grid", "tol", "max_iter"}, "spectral", errs);
        if (sp.contains("grid")) spectral.grid = sp["grid"].get<int>();
        if (sp.contains("tol")) spectral.tol = sp["tol"].get<double>();
        if (sp.contains("max_iter")) spectral.max_iter = sp["max_iter"].get<int>();
    }
    if (doc.contains("certificate")) {
        const json& ce = doc["certificate"];
        reject_unknown_keys(ce, {"density", "strictness", "nonexistence_cap", "use_refined_m"},
                            "certificate", errs);
        if (ce.contains("density")) certificate.density = ce["density"].get<int>();
        if (ce.contains("strictness")) certificate.strictness = ce["strictness"].get<double>();
        if (ce.contains("nonexistence_cap"))
            certificate.nonexistence_cap = ce["nonexistence_cap"].get<double>();
        if (ce.contains("use_refined_m"))
            certificate.use_refined_m = ce["use_refined_m"].get<bool>();
    }
    if (doc.contains("solver")) {
        const json& so = doc["solver"];
        reject_unknown_keys(so,
                            {"nodes", "picard_damping", "picard_max_iter", "newton_max_iter",
                             "fd_step", "tol", "starts_per_shell", "dedupe_tol",
                             "residual_threshold"},
                            "solver", errs);
        if (so.contains("nodes")) solver.nodes = so["nodes"].get<int>();
        auto& ms = solver.multistart;
        if (so.contains("picard_damping")) ms.picard.damping = so["picard_damping"].get<double>();
        if (so.contains("picard_max_iter")) ms.picard.max_iter = so["picard_max_iter"].get<int>();
        if (so.contains("newton_max_iter")) ms.newton.max_iter = so["newton_max_iter"].get<int>();
        if (so.contains("fd_step")) ms.newton.fd_step = so["fd_step"].get<double>();
        if (so.contains("tol")) {
            ms.picard.tol = so["tol"].get<double>();
            ms.newton.tol = so["tol"].get<double>();
        }
        if (so.contains("starts_per_shell")) ms.starts_per_shell = so["starts_per_shell"].get<int>();
        if (so.contains("dedupe_tol")) ms.dedupe_tol = so["dedupe_tol"].get<double>();
        if (so.contains("residual_threshold"))
            ms.residual_threshold = so["residual_threshold"].get<double>();
    }

    errs.raise_if_any();
    if (!have_kernel_params || !g1 || !g2 || !f1 || !f2) errs.add("incomplete problem");
    errs.raise_if_any();

    // build the kernels, resolving "optimal" intervals through the bounds module
    auto build_kernel = [&](bool first) -> KernelSpec {
        std::optional<Interval> iv = first ? i1 : i2;
        KernelSpec base = first ? KernelSpec::three_point(alpha1, eta)
                                : KernelSpec::derivative_flux(alpha2, xi);
        if (iv) return base.with_interval(*iv);
        const WeightFunction& g = first ? *g1 : *g2;
        if (g.is_one()) return base.with_interval(optimal_interval(base).ab);
        return base.with_interval(optimal_interval_numeric(base, g, tol).ab);
    };
    try {
        ProblemSpec p{build_kernel(true), build_kernel(false), std::move(*g1), std::move(*g2),
                      std::move(*f1), std::move(*f2)};
        // the weight must carry mass against Phi on [a,b]
        auto check_mass = [&](const KernelSpec& k, const WeightFunction& g, const char* name) {
            const double mass =
                integrate([&](double s) { return k.phi_upper(s) * g(s); }, k.interval().lo,
                          k.interval().hi, {}, 1e-9);
            if (!(mass > 0.0))
                throw ValidationError(std::string("weights.") + name +
                                      ": integral of Phi*g over [a,b] must be positive");
        };
        check_mass(p.k1, p.g1, "g1");
        check_mass(p.k2, p.g2, "g2");
        // Caratheodory positivity, sampled on a moderate box
        for (int i = 0; i <= 16; ++i)
            for (int j = 0; j <= 16; ++j)
                for (int k = 0; k <= 16; ++k) {
                    ExprEnv env;
                    env.t = i / 16.0;
                    env.u = -2.0 + 4.0 * j / 16.0;
                    env.v = -2.0 + 4.0 * k / 16.0;
                    if (p.f1.eval(env) < 0.0 || p.f2.eval(env) < 0.0)
                        throw ValidationError(
                            "nonlinearities must be nonnegative (sampled violation)");
                }
        return LoadedProblem{std::move(p),  ladder,      annulus, mode,
                             intervals_optimal, spectral, certificate, solver, tol};
    } catch (const ValidationError& e) {
        errs.add(e.what());
        errs.raise();
    }
}

LoadedProblem load_problem_file(const std::string& path,
                                std::optional<PhiMode> phi_mode_override) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open problem file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ValidationError("problem file is not valid JSON: " + std::string(e.what()));
    }
    return load_problem(doc, phi_mode_override);
}

json record_to_json(const ConditionRecord& rec) {
    return json{{"id", rec.id},
                {"computed", rec.computed},
                {"threshold", rec.threshold},
                {"margin", rec.margin},
                {"density", rec.density},
                {"verdict", rec.verdict},
                {"witness", rec.witness},
                {"note", rec.note}};
}

ConditionRecord record_from_json(const json& j) {
    ConditionRecord rec;
    rec.id = j.at("id").get<std::string>();
    rec.computed = j.at("computed").get<double>();
    rec.threshold = j.at("threshold").get<double>();
    rec.margin = j.at("margin").get<double>();
    rec.density = j.at("density").get<int>();
    rec.verdict = j.at("verdict").get<bool>();
    rec.witness = j.at("witness").get<std::array<double, 3>>();
    rec.note = j.at("note").get<std::string>();
    return rec;
}

json conclusion_to_json(const Conclusion& c) {
    json shells = json::array();
    for (const ShellRegion& s : c.shells)
        shells.push_back(json{{"text", s.text},
                              {"outer_kind", s.outer_kind},
                              {"outer_radii", s.outer_radii},
                              {"inner_kind", s.inner_kind},
                              {"inner_radii", s.inner_radii}});
    return json{{"case", c.case_id},
                {"solutions", c.solutions},
                {"shells", shells},
                {"satisfied_by", c.satisfied_by},
                {"diagnostics", c.diagnostics}};
}

json localization_to_json(const Localization& loc) {
    json shells = json::array();
    for (const ShellMembership& m : loc.shells)
        shells.push_back(json{{"level", m.level},
                              {"in_K", m.in_K},
                              {"in_V", m.in_V},
                              {"on_V_boundary", m.on_V_boundary}});
    return json{{"norm_u", loc.norm_u},
                {"norm_v", loc.norm_v},
                {"min_u_ab", loc.min_u_ab},
                {"min_v_ab", loc.min_v_ab},
                {"cone_slack_u", loc.cone_slack_u},
                {"cone_slack_v", loc.cone_slack_v},
                {"u_changes_sign", loc.u_changes_sign},
                {"v_changes_sign", loc.v_changes_sign},
                {"shells", shells},
                {"label", loc.label}};
}

} // namespace hamcert
