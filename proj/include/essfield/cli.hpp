#pragma once

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dictionary.hpp"
#include "io.hpp"
#include "normal_form.hpp"
#include "portrait.hpp"
#include "quotient.hpp"
#include "realize.hpp"
#include "symmetry.hpp"

namespace essfield::cli {

inline json read_json_file(const std::string& path) {
    std::string text;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
        std::ifstream f(path);
        if (!f) throw Error(ErrorCode::io, "cannot read " + path);
        text.assign(std::istreambuf_iterator<char>(f), {});
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::parse, path + ": " + e.what());
    }
}

inline json isotropy_to_json(const IsotropyResult& iso) {
    json j;
    switch (iso.kind) {
    case IsotropyKind::trivial: j["kind"] = "trivial"; break;
    case IsotropyKind::cyclic: j["kind"] = "cyclic"; break;
    case IsotropyKind::continuous: j["kind"] = "continuous"; break;
    }
    j["order"] = iso.order;
    if (iso.center) j["center"] = complex_to_json(*iso.center);
    if (iso.generator) j["generator"] = affine_to_json(*iso.generator);
    return j;
}

inline json family_to_json(const FamilyReport& f) {
    json j;
    j["all_trivial"] = f.all_trivial;
    j["moduli_dimension"] = f.moduli_dimension;
    j["admissible_orders"] = f.admissible_orders;
    if (f.unbounded)
        j["common_divisors"] = "unbounded";
    else
        j["common_divisors"] = f.common_divisors;
    return j;
}

inline json signature_to_json(Signature s) { return {{"s", s.s}, {"r", s.r}, {"d", s.d}}; }

struct Context {
    Tolerances tol = Tolerances::from_env();

    FieldDocument load(const std::string& path) const {
        return parse_field_document(read_json_file(path), tol);
    }

    Tolerances for_doc(const FieldDocument& doc) const {
        Tolerances t = tol;
        if (doc.tolerance && !std::getenv("ESSFIELD_TOL")) t.symmetry = *doc.tolerance;
        return t;
    }
};

// Exit codes: 0 success, 1 domain error, 2 usage error.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Affine symmetries of complex polynomial-exponential vector fields", "essfield"};
    app.require_subcommand(1);
    Context ctx;

    std::string field_a, field_b, spec_path, path_json, output_path, gauge_name, format_name = "svg";
    bool metric = false, simple = false, projective = false;
    double refinement = 0.1;
    PortraitConfig pcfg;
    std::vector<double> center{0.0, 0.0};
    std::vector<int> grid{pcfg.nx, pcfg.ny}, size{pcfg.width, pcfg.height};
    double half_width = 2.0;

    auto* analyze = app.add_subcommand("analyze", "isotropy group and family report");
    analyze->add_option("field", field_a, "field document (- for stdin)")->required();

    auto* normalize = app.add_subcommand("normalize", "canonical form");
    normalize->add_option("field", field_a, "field document")->required();
    normalize->add_option("--gauge", gauge_name, "exp, zero or pole")->check(CLI::IsMember({"exp", "zero", "pole"}));
    normalize->add_flag("--metric", metric, "rotate lambda onto the positive reals");

    auto* equivalent = app.add_subcommand("equivalent", "decide affine equivalence");
    equivalent->add_option("a", field_a, "first field")->required();
    equivalent->add_option("b", field_b, "second field")->required();
    equivalent->add_flag("--metric", metric, "equivalence up to a rotation of lambda");

    auto* realize = app.add_subcommand("realize", "build a field from a symmetry spec");
    realize->add_option("spec", spec_path, "symmetry spec document")->required();
    realize->add_flag("--simple", simple, "simple zeros and poles only");

    auto* quotient = app.add_subcommand("quotient", "quotient field under the detected rotation");
    quotient->add_option("field", field_a, "field document")->required();
    int quotient_order = 0;
    quotient->add_option("--order", quotient_order, "quotient by Z_k, a subgroup of the isotropy group")
        ->check(CLI::PositiveNumber);

    auto* res = app.add_subcommand("residues", "residues of the 1-form at the zeros of Q");
    res->add_option("field", field_a, "field document")->required();

    auto* psi = app.add_subcommand("psi", "distinguished parameter along a path");
    psi->add_option("field", field_a, "field document")->required();
    psi->add_option("--path", path_json, "vertices as JSON, e.g. [[2,0],[3,0]]")->required();
    psi->add_option("--refinement", refinement, "max piece length")->check(CLI::PositiveNumber);

    auto* length = app.add_subcommand("length", "flat length of a path");
    length->add_option("field", field_a, "field document")->required();
    length->add_option("--path", path_json, "vertices as JSON")->required();
    length->add_option("--refinement", refinement, "max piece length")->check(CLI::PositiveNumber);

    auto* portrait = app.add_subcommand("portrait", "phase portrait of Re X");
    portrait->add_option("field", field_a, "field document")->required();
    portrait->add_option("-o,--output", output_path, "output file")->required();
    portrait->add_option("--format", format_name, "svg or png")->check(CLI::IsMember({"svg", "png"}));
    portrait->add_flag("--projective", projective, "chart at infinity");
    portrait->add_option("--center", center, "window center RE IM")->expected(2);
    portrait->add_option("--half-width", half_width, "window half-width")->check(CLI::PositiveNumber);
    portrait->add_option("--grid", grid, "seed grid NX NY")->expected(2);
    portrait->add_option("--max-length", pcfg.max_arclength, "max arclength per direction")->check(CLI::PositiveNumber);
    portrait->add_option("--step-tol", pcfg.step_tolerance, "local step tolerance")->check(CLI::PositiveNumber);
    portrait->add_option("--stop-radius", pcfg.stop_radius_singular, "guard radius at zeros and poles")
        ->check(CLI::PositiveNumber);
    portrait->add_option("--size", size, "image size W H")->expected(2);
    portrait->add_option("--max-steps", pcfg.max_steps, "step budget per direction")->check(CLI::PositiveNumber);
    portrait->add_option("--seed", pcfg.seed, "jitter seed");
    portrait->add_option("--jitter", pcfg.jitter, "jitter fraction of a cell");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, eo;
        int code = app.exit(e, o, eo);
        out << o.str();
        err << eo.str();
        return code == 0 ? 0 : 2;
    }

    try {
        json rep;
        if (*analyze) {
            auto doc = ctx.load(field_a);
            auto t = ctx.for_doc(doc);
            const auto& x = doc.field;
            auto sig = x.signature();
            Divisor dv = divisor_of(x, t);
            rep["signature"] = signature_to_json(sig);
            rep["divisor"] = {{"zeros", roots_to_json(dv.zeros)},
                              {"poles", roots_to_json(dv.poles)},
                              {"exp_roots", roots_to_json(dv.exp_roots)}};
            rep["isotropy"] = isotropy_to_json(isotropy_group(x, t));
            rep["family"] = family_to_json(family_report(sig.s, sig.r, sig.d));
        } else if (*normalize) {
            auto doc = ctx.load(field_a);
            auto t = ctx.for_doc(doc);
            auto sig = doc.field.signature();
            GaugeKind kind = available_gauges(sig).front();
            if (gauge_name == "exp") kind = GaugeKind::exp_centered;
            if (gauge_name == "zero") kind = GaugeKind::zero_centered;
            if (gauge_name == "pole") kind = GaugeKind::pole_centered;
            if (metric) {
                auto mf = canonical_metric_form(doc.field, kind, t);
                rep["field"] = emit_field(mf.field);
                rep["gauge"] = affine_to_json(mf.gauge);
                rep["gauge_kind"] = to_string(mf.kind);
                rep["theta"] = mf.theta;
            } else {
                auto cf = canonical_form(doc.field, kind, t);
                rep["field"] = emit_field(cf.field);
                rep["gauge"] = affine_to_json(cf.gauge);
                rep["gauge_kind"] = to_string(cf.kind);
            }
        } else if (*equivalent) {
            auto a = ctx.load(field_a), b = ctx.load(field_b);
            auto t = ctx.for_doc(a);
            auto eq = are_equivalent(a.field, b.field, metric ? EquivalenceMode::metric : EquivalenceMode::analytic, t);
            rep["equivalent"] = eq.has_value();
            if (eq) {
                rep["map"] = affine_to_json(eq->map);
                if (metric) rep["theta"] = eq->theta;
            } else {
                rep["result"] = "inequivalent";
            }
        } else if (*realize) {
            json j = read_json_file(spec_path);
            auto sp = parse_spec(j);
            bool simple_doc = j.contains("simple") && j["simple"].is_boolean() && j["simple"].get<bool>();
            auto x = (simple || simple_doc) ? realize_simple(sp, ctx.tol) : realize_symmetric(sp, ctx.tol);
            rep = emit_field(x);
        } else if (*quotient) {
            auto doc = ctx.load(field_a);
            auto t = ctx.for_doc(doc);
            auto q = quotient_order > 0 ? quotient_field(doc.field, quotient_order, t) : quotient_field(doc.field, t);
            rep["field"] = emit_field(q.field);
            rep["k"] = q.k;
            rep["center"] = complex_to_json(q.center);
            rep["signature"] = signature_to_json(q.field.signature());
        } else if (*res) {
            auto doc = ctx.load(field_a);
            auto t = ctx.for_doc(doc);
            json list = json::array();
            for (const auto& r : residues(doc.field, t))
                list.push_back({{"location", complex_to_json(r.location)},
                                {"residue", complex_to_json(r.residue)},
                                {"order", r.order}});
            rep["residues"] = list;
            rep["single_valued"] = is_single_valued(doc.field, t);
        } else if (*psi || *length) {
            auto doc = ctx.load(field_a);
            auto t = ctx.for_doc(doc);
            json pj;
            try {
                pj = json::parse(path_json);
            } catch (const json::parse_error& e) {
                throw Error(ErrorCode::parse, std::string("--path: ") + e.what());
            }
            PathSpec path = parse_path(pj);
            path.refinement = refinement;
            if (*psi)
                rep["value"] = complex_to_json(distinguished_parameter(doc.field, path, t));
            else
                rep["length"] = flat_length(doc.field, path, t);
        } else if (*portrait) {
            auto doc = ctx.load(field_a);
            auto t = ctx.for_doc(doc);
            if (projective)
                pcfg.chart = ProjectiveWindow{half_width};
            else
                pcfg.chart = AffineWindow{{center[0], center[1]}, half_width};
            pcfg.nx = grid[0];
            pcfg.ny = grid[1];
            pcfg.width = size[0];
            pcfg.height = size[1];
            pcfg.output = format_name == "png" ? ImageFormat::png : ImageFormat::svg;
            auto img = render(doc.field, pcfg, t);
            write_image(img, output_path);
            rep["output"] = output_path;
            rep["format"] = format_name;
            rep["bytes"] = img.bytes.size();
        }
        out << rep.dump(2) << "\n";
        return 0;
    } catch (const Error& e) {
        err << json{{"error", to_string(e.code())}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
}

} // namespace essfield::cli
