#ifndef PSATZ_SERIALIZE_HPP
#define PSATZ_SERIALIZE_HPP

#include <cstdint>

#include "psatz/certifiers.hpp"
#include "psatz/driver.hpp"
#include "psatz/json_io.hpp"
#include "psatz/oracle.hpp"
#include "psatz/reduction.hpp"

namespace psatz {

/// Floats are always wrapped as {"numeric": v} so every bare number or
/// string in the output is exact.
inline Json numeric(double v) {
    Json j;
    j["numeric"] = v;
    return j;
}

inline Json tolerances_to_json(const conic::Tolerances& t) {
    Json j;
    j["equality_residual"] = numeric(t.equality_residual);
    j["psd_min_eig"] = numeric(t.psd_min_eig);
    j["reconstruction"] = numeric(t.reconstruction);
    j["infeasibility_margin"] = numeric(t.infeasibility_margin);
    return j;
}

/// FNV-1a over the canonical JSON encoding; stable across runs.
inline std::string poly_hash(const Polynomial& p) {
    std::string s = poly_to_json(p).dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

inline Json gram_block_to_json(const GramBlock& gb) {
    Json j;
    Json basis = Json::array();
    for (const auto& m : gb.basis) basis.push_back(m.exp);
    j["basis"] = std::move(basis);
    switch (gb.kind) {
        case conic::BlockKind::Psd: j["class"] = "psd"; break;
        case conic::BlockKind::Dd: j["class"] = "dd"; break;
        case conic::BlockKind::Sdd: j["class"] = "sdd"; break;
        case conic::BlockKind::Nonneg: j["class"] = "nonneg"; break;
    }
    Json rows = Json::array();
    for (int i = 0; i < gb.G.rows(); ++i) {
        Json row = Json::array();
        for (int k = 0; k < gb.G.cols(); ++k) row.push_back(gb.G(i, k));
        rows.push_back(std::move(row));
    }
    j["gram"] = Json{{"numeric", std::move(rows)}};
    return j;
}

inline Json certificate_to_json(const Certificate& cert) {
    Json j;
    j["kind"] = to_string(cert.kind);
    j["level"] = cert.level;
    if (cert.kind == CertKind::Polya) {
        j["expanded_hash"] = poly_hash(cert.expanded);
        j["expanded_terms"] = cert.expanded.term_count();
        j["min_coefficient"] = to_string(cert.min_coeff);
        j["min_monomial"] = cert.min_monomial.exp;
        return j;
    }
    j["target"] = poly_to_json(cert.target);
    Json grams = Json::array();
    for (const auto& gb : cert.grams) grams.push_back(gram_block_to_json(gb));
    j["grams"] = std::move(grams);
    if (!cert.q_grams.empty()) {
        Json qg = Json::array();
        for (const auto& gb : cert.q_grams)
            qg.push_back(gram_block_to_json(gb));
        j["multiplier_grams"] = std::move(qg);
        Json mult = Json::array();
        for (const auto& [m, c] : cert.multiplier) {
            Json t;
            t["exp"] = m.exp;
            t["coef"] = numeric(c);
            mult.push_back(std::move(t));
        }
        j["multiplier"] = std::move(mult);
    }
    j["exact_roundtrip"] = cert.exact_roundtrip;
    return j;
}

inline Json certify_result_to_json(const CertifyResult& res,
                                   bool include_certificate = true) {
    Json j;
    j["status"] = to_string(res.status);
    if (!res.reason.empty()) j["reason"] = res.reason;
    if (include_certificate &&
        (res.status == CertStatus::Accept ||
         (res.status == CertStatus::Reject &&
          res.cert.kind == CertKind::Polya)))
        j["certificate"] = certificate_to_json(res.cert);
    return j;
}

inline Json reduced_form_to_json(const ReducedForm& rf) {
    Json j;
    if (rf.gamma) j["gamma"] = to_string(*rf.gamma);
    j["form"] = poly_to_json(rf.form);
    Json sq = Json::array();
    for (const auto& s : rf.squares) sq.push_back(poly_to_json(s));
    j["squares"] = std::move(sq);
    return j;
}

inline Json hierarchy_result_to_json(const HierarchyResult& hr,
                                     bool include_certificates = true) {
    Json j;
    j["bracket_low"] = to_string(hr.L0);
    j["bracket_high"] = to_string(hr.U0);
    Json levels = Json::array();
    for (const auto& lv : hr.levels) {
        Json l;
        l["r"] = lv.r;
        l["l_r_eps"] = to_string(lv.l_r_eps);
        l["m_r"] = to_string(lv.m_r);
        Json trace = Json::array();
        for (const auto& st : lv.trace) {
            Json s;
            s["gamma"] = to_string(st.gamma);
            s["status"] = to_string(st.status);
            trace.push_back(std::move(s));
        }
        l["trace"] = std::move(trace);
        l["wall_seconds"] = numeric(lv.wall_seconds);
        if (!lv.note.empty()) l["note"] = lv.note;
        if (include_certificates && lv.certificate)
            l["certificate"] = certificate_to_json(*lv.certificate);
        levels.push_back(std::move(l));
    }
    j["levels"] = std::move(levels);
    return j;
}

inline Json oracle_report_to_json(const oracle::OracleReport& rep) {
    Json j;
    j["direction"] = rep.direction;
    if (rep.infeasible_grid) j["infeasible_grid"] = true;
    if (rep.has_estimate) {
        if (rep.direction == "upper-bound-on-min") {
            j["estimate"] = to_string(rep.estimate);
            Json w = Json::array();
            for (const auto& x : rep.witness) w.push_back(to_string(x));
            j["witness"] = std::move(w);
        } else {
            j["estimate"] = numeric(rep.numeric_estimate);
            Json w = Json::array();
            for (double x : rep.numeric_witness) w.push_back(numeric(x));
            j["witness"] = std::move(w);
        }
    }
    if (rep.samples) j["samples"] = rep.samples;
    if (rep.resolution) j["resolution"] = rep.resolution;
    return j;
}

inline Json bound_report_to_json(const PolyaBoundReport& rep) {
    Json j;
    j["d"] = rep.d;
    j["norm"] = to_string(rep.norm);
    if (rep.lambda != 0) j["lambda"] = to_string(rep.lambda);
    if (rep.c_gamma) {
        j["c_gamma"] = to_string(*rep.c_gamma);
        j["r_hat"] = *rep.r_hat;
    } else {
        j["nbar"] = rep.nbar;
    }
    return j;
}

}  // namespace psatz

#endif
