#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dictionary.hpp"
#include "field.hpp"
#include "realize.hpp"

namespace essfield {

using json = nlohmann::json;

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::parse, (where.empty() ? "/" : where) + ": " + what);
}

inline double get_number(const json& j, const std::string& where) {
    if (!j.is_number()) parse_fail(where, "expected a number");
    return j.get<double>();
}

inline int get_int(const json& j, const std::string& where) {
    if (!j.is_number_integer()) parse_fail(where, "expected an integer");
    return j.get<int>();
}

} // namespace detail

// [re, im]; a bare number is read as real.
inline Complex complex_from_json(const json& j, const std::string& where = "") {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) detail::parse_fail(where, "expected [re, im]");
    return {detail::get_number(j[0], where + "/0"), detail::get_number(j[1], where + "/1")};
}

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Polynomial polynomial_from_json(const json& j, const std::string& where = "") {
    if (!j.is_object()) detail::parse_fail(where, "expected an object with roots or coeffs");
    bool has_roots = j.contains("roots"), has_coeffs = j.contains("coeffs");
    if (has_roots == has_coeffs) detail::parse_fail(where, "exactly one of roots / coeffs is required");
    if (has_coeffs) {
        const auto& c = j["coeffs"];
        if (!c.is_array() || c.empty()) detail::parse_fail(where + "/coeffs", "expected a nonempty array");
        std::vector<Complex> v;
        for (std::size_t i = 0; i < c.size(); ++i) v.push_back(complex_from_json(c[i], where + "/coeffs/" + std::to_string(i)));
        if (j.contains("leading")) detail::parse_fail(where + "/leading", "leading only applies to roots form");
        return Polynomial(std::move(v));
    }
    const auto& r = j["roots"];
    if (!r.is_array()) detail::parse_fail(where + "/roots", "expected an array");
    RootList roots;
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::string at = where + "/roots/" + std::to_string(i);
        const auto& e = r[i];
        if (e.is_array() && e.size() == 2 && e[0].is_array()) {
            int m = detail::get_int(e[1], at + "/1");
            if (m < 1) detail::parse_fail(at + "/1", "multiplicity must be positive");
            roots.push_back({complex_from_json(e[0], at + "/0"), m});
        } else {
            roots.push_back({complex_from_json(e, at), 1});
        }
    }
    Complex lead = j.contains("leading") ? complex_from_json(j["leading"], where + "/leading") : Complex{1.0};
    if (lead == Complex{0.0}) detail::parse_fail(where + "/leading", "leading coefficient must be nonzero");
    return expand_from_roots(lead, std::move(roots));
}

inline json polynomial_to_json(const Polynomial& p) {
    json j;
    if (p.root_view() && !p.is_zero()) {
        json r = json::array();
        for (const auto& x : *p.root_view()) {
            if (x.multiplicity == 1)
                r.push_back(complex_to_json(x.z));
            else
                r.push_back(json::array({complex_to_json(x.z), x.multiplicity}));
        }
        j["roots"] = r;
        if (p.leading() != Complex{1.0}) j["leading"] = complex_to_json(p.leading());
    } else {
        json c = json::array();
        for (auto v : p.coeffs()) c.push_back(complex_to_json(v));
        j["coeffs"] = c;
    }
    return j;
}

struct FieldDocument {
    VectorField field;
    std::optional<double> tolerance;
};

inline FieldDocument parse_field_document(const json& j, const Tolerances& tol = {}) {
    if (!j.is_object()) detail::parse_fail("", "field document must be an object");
    if (!j.contains("lambda")) detail::parse_fail("/lambda", "missing");
    Complex lambda = complex_from_json(j["lambda"], "/lambda");
    Polynomial Q = j.contains("Q") ? polynomial_from_json(j["Q"], "/Q") : Polynomial::constant(1.0);
    Polynomial P = j.contains("P") ? polynomial_from_json(j["P"], "/P") : Polynomial::constant(1.0);
    Polynomial E = j.contains("E") ? polynomial_from_json(j["E"], "/E") : Polynomial();
    if (Q.is_zero()) detail::parse_fail("/Q", "Q must be nonzero");
    if (P.is_zero()) detail::parse_fail("/P", "P must be nonzero");
    FieldDocument doc{make_field(lambda, std::move(Q), std::move(P), std::move(E)), std::nullopt};
    if (j.contains("tolerance")) {
        double t = detail::get_number(j["tolerance"], "/tolerance");
        if (!(t > 0)) detail::parse_fail("/tolerance", "must be positive");
        doc.tolerance = t;
    }
    Tolerances t = tol;
    if (doc.tolerance) t.symmetry = *doc.tolerance;
    auto diags = validate(doc.field, t);
    if (!diags.empty()) {
        std::string msg;
        for (const auto& d : diags) msg += (msg.empty() ? "" : "; ") + d.code + ": " + d.message;
        throw Error(ErrorCode::invalid_field, msg);
    }
    return doc;
}

inline VectorField parse_field(const json& j, const Tolerances& tol = {}) { return parse_field_document(j, tol).field; }

inline json emit_field(const VectorField& x) {
    json j;
    j["lambda"] = complex_to_json(x.lambda);
    j["Q"] = polynomial_to_json(x.Q);
    j["P"] = polynomial_to_json(x.P);
    j["E"] = polynomial_to_json(x.E);
    return j;
}

inline json roots_to_json(const RootList& roots) {
    json a = json::array();
    for (const auto& r : roots) a.push_back(json::array({complex_to_json(r.z), r.multiplicity}));
    return a;
}

inline json affine_to_json(const AffineMap& t) { return {{"a", complex_to_json(t.a)}, {"b", complex_to_json(t.b)}}; }

inline SymmetrySpec parse_spec(const json& j) {
    if (!j.is_object()) detail::parse_fail("", "symmetry spec must be an object");
    SymmetrySpec sp;
    if (!j.contains("k")) detail::parse_fail("/k", "missing");
    sp.k = detail::get_int(j["k"], "/k");
    if (j.contains("center")) sp.center = complex_from_json(j["center"], "/center");
    if (j.contains("center_kind")) {
        const auto& ck = j["center_kind"];
        if (ck == "pole")
            sp.center_kind = CenterKind::pole;
        else if (ck == "zero")
            sp.center_kind = CenterKind::zero;
        else
            detail::parse_fail("/center_kind", "expected \"pole\" or \"zero\"");
    }
    if (j.contains("nu")) sp.nu = detail::get_int(j["nu"], "/nu");
    auto orbits = [&](const char* key, std::vector<Orbit>& out) {
        if (!j.contains(key)) return;
        std::string at = std::string("/") + key;
        const auto& a = j[key];
        if (!a.is_array()) detail::parse_fail(at, "expected an array of [radius, angle, multiplicity]");
        for (std::size_t i = 0; i < a.size(); ++i) {
            std::string ai = at + "/" + std::to_string(i);
            const auto& e = a[i];
            if (!e.is_array() || e.size() < 2 || e.size() > 3) detail::parse_fail(ai, "expected [radius, angle, multiplicity]");
            Orbit o{detail::get_number(e[0], ai + "/0"), detail::get_number(e[1], ai + "/1"),
                    e.size() == 3 ? detail::get_int(e[2], ai + "/2") : 1};
            out.push_back(o);
        }
    };
    orbits("zero_orbits", sp.zero_orbits);
    orbits("pole_orbits", sp.pole_orbits);
    orbits("exp_orbits", sp.exp_orbits);
    if (j.contains("exp_center_multiplicity"))
        sp.exp_center_multiplicity = detail::get_int(j["exp_center_multiplicity"], "/exp_center_multiplicity");
    if (j.contains("lambda")) sp.lambda = complex_from_json(j["lambda"], "/lambda");
    if (j.contains("c0")) sp.c0 = complex_from_json(j["c0"], "/c0");
    return sp;
}

inline PathSpec parse_path(const json& j) {
    if (!j.is_array()) detail::parse_fail("", "path must be an array of [re, im] vertices");
    PathSpec p;
    for (std::size_t i = 0; i < j.size(); ++i) p.vertices.push_back(complex_from_json(j[i], "/" + std::to_string(i)));
    return p;
}

} // namespace essfield
