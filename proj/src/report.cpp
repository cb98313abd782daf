#include "psidocalc/report.hpp"

namespace psido {

static json multi_map(const std::map<Multi, double>& m) {
    json j = json::object();
    for (const auto& [k, v] : m) j[multi_str(k)] = v;
    return j;
}

json to_json(const NetVerdict& v) {
    json j;
    j["kind"] = v.kind == NetClass::Moderate ? "Moderate"
               : v.kind == NetClass::Negligible ? "Negligible" : "NotModerate";
    if (v.kind == NetClass::Moderate) j["N"] = v.N;
    return j;
}

json to_json(const ExponentEstimate& e) {
    json j;
    j["slope"] = e.slope;
    j["verdict"] = to_json(e.verdict);
    j["used_samples"] = e.used_samples;
    j["all_zero"] = e.all_zero;
    return j;
}

json to_json(const ClassEstimate& e) {
    json j;
    j["m"] = e.m;
    j["rho"] = e.rho;
    j["N"] = e.N;
    j["verdict"] = verdict_str(e.verdict);
    j["constants"] = multi_map(e.constants);
    j["box_ratio"] = multi_map(e.box_ratio);
    j["eps_slope"] = multi_map(e.eps_slope);
    if (!e.per_alpha_N.empty()) {
        json pn = json::object();
        for (const auto& [k, v] : e.per_alpha_N) pn[multi_str(k)] = v;
        j["per_alpha_N"] = pn;
    }
    if (e.mprime) j["mprime"] = *e.mprime;
    j["exact_shortcut"] = e.exact_shortcut;
    if (!e.note.empty()) j["note"] = e.note;
    j["sample_spec"] = {{"box_L", e.spec.box_L},
                        {"n_samples", e.spec.n_samples},
                        {"eps_j", {e.spec.eps_j_lo, e.spec.eps_j_hi}},
                        {"exclude_radius", e.spec.exclude_radius},
                        {"seed", e.spec.seed}};
    return j;
}

json to_json(const WeightCheckReport& r) {
    json j;
    j["temperance_constant"] = r.temperance_constant;
    j["slow_variation_constant"] = r.slow_variation_constant;
    j["anisotropy_constant"] = r.anisotropy_constant;
    j["box_L"] = r.box_L;
    j["n_samples"] = r.n_samples;
    j["pass_temperance"] = r.pass_temperance;
    j["pass_slow_variation"] = r.pass_slow_variation;
    j["pass_anisotropy"] = r.pass_anisotropy;
    j["temperance_box_growth"] = r.temperance_box_growth;
    j["pass"] = r.pass();
    return j;
}

json to_json(const HypoCertificate& c) {
    json j;
    j["verdict"] = c.verdict_str();
    j["l"] = c.l;
    j["m"] = c.m;
    j["R"] = c.R;
    j["rho"] = c.rho;
    j["N"] = c.N;
    j["lower_constant"] = c.lower_constant;
    j["derivative_constants"] = multi_map(c.derivative_constants);
    if (!c.fail_reason.empty()) j["fail_reason"] = c.fail_reason;
    if (!c.witness.empty()) j["witness"] = c.witness;
    return j;
}

json to_json(const WeakEqReport& r) {
    json j;
    j["equal"] = r.equal;
    j["eps"] = r.eps;
    j["slopes"] = r.slopes;
    json verdicts = json::array();
    for (const auto& v : r.verdicts) verdicts.push_back(to_json(v));
    j["verdicts"] = verdicts;
    j["magnitudes"] = r.magnitudes;
    return j;
}

static json cplx(const complexd& c) { return json{{"re", c.real()}, {"im", c.imag()}}; }

json to_json(const OscIntResult& r) {
    json j;
    j["value"] = cplx(r.value);
    j["psi_limit"] = cplx(r.psi_limit);
    j["phi_limit"] = cplx(r.phi_limit);
    j["agreement"] = r.agreement;
    j["converged"] = r.converged;
    j["budget_limited"] = r.budget_limited;
    json pv = json::array(), fv = json::array();
    for (const auto& v : r.psi_values) pv.push_back(cplx(v));
    for (const auto& v : r.phi_values) fv.push_back(cplx(v));
    j["psi_values"] = pv;
    j["phi_values"] = fv;
    return j;
}

json to_json(const RegularityReport& r) {
    json j;
    j["Ks"] = r.Ks;
    j["eps_star"] = r.eps_star;
    j["defect_at_star"] = r.defect_at_star;
    j["eps"] = r.eps;
    j["defect"] = r.defect;
    j["monotone"] = r.monotone;
    j["weak"] = to_json(r.weak);
    j["weak_vs_corrected"] = to_json(r.weak_vs_corrected);
    return j;
}

json to_json(const Parametrix& p) {
    json j;
    j["K"] = p.K;
    j["R"] = p.R;
    j["side"] = p.side == ParametrixSide::Left ? "left" : "right";
    json terms = json::array();
    for (const auto& t : p.terms) {
        json jt;
        jt["text"] = t.str();
        if (t.claimed) {
            jt["claimed"] = {{"m", t.claimed->m}, {"rho", t.claimed->rho}, {"N", t.claimed->N}};
        }
        // coefficient lists: numerator / denominator per part
        json parts = json::array();
        for (const auto& part : t.parts()) {
            json jp;
            json num = json::array();
            for (const auto& [e, c] : part.num().monomials())
                num.push_back({{"exps", e}, {"coeff", c.str()}});
            jp["numerator"] = num;
            json den = json::array();
            for (const auto& [b, k] : part.den()) {
                json fac = json::array();
                for (const auto& [e, c] : b.monomials())
                    fac.push_back({{"exps", e}, {"coeff", c.str()}});
                den.push_back({{"factor", fac}, {"power", k}});
            }
            jp["denominator"] = den;
            if (part.cutoff_radius()) jp["cutoff_radius"] = *part.cutoff_radius();
            parts.push_back(jp);
        }
        jt["parts"] = parts;
        terms.push_back(jt);
    }
    j["terms"] = terms;
    j["residual_text"] = p.composed_residual.str();
    j["certificate"] = to_json(p.certificate);
    return j;
}

json report_envelope(const std::string& command, const json& config, uint64_t seed,
                     json results, std::optional<double> wall_ms) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["version"] = kToolVersion;
    j["command"] = command;
    j["config"] = config;
    j["config_hash"] = hex64(fnv1a64(config.dump()));
    j["seed"] = seed;
    j["results"] = std::move(results);
    if (wall_ms) j["wall_ms"] = *wall_ms;
    return j;
}

}  // namespace psido
