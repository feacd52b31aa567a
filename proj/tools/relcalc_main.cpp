// relcalc: exact calculus for closed piecewise-linear relations on the line.
//
// Subcommands operate on relation / function / set files (JSON with exact
// "p/q" rationals) and write exact outputs; see README.md for the formats.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relcalc/dynamics.hpp"
#include "relcalc/examples.hpp"
#include "relcalc/grid.hpp"
#include "relcalc/io.hpp"
#include "relcalc/suitable.hpp"
#include "relcalc/svg.hpp"

using namespace relcalc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssertFailed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitRefusal = 3;

int exit_code_for(Err code) {
    switch (code) {
        case Err::NotSuitable:
        case Err::NonUniqueMinimal:
        case Err::NotIsomorphism:
        case Err::NotFullDomain:
            return kExitRefusal;
        default:
            return kExitInputError;
    }
}

Rel load_rel(const std::string& path) { return rel_from_json(read_json_file(path)); }
Fun load_fun(const std::string& path) { return fun_from_json(read_json_file(path)); }
FSet load_fset(const std::string& path) { return fset_from_json(read_json_file(path)); }

Rat parse_rat_arg(const std::string& s) {
    try {
        return rat_parse(s);
    } catch (const std::invalid_argument& e) {
        throw Error(Err::Parse, e.what());
    }
}

/// Writes the relation and optionally compares it against an expected file.
/// Returns the process exit code.
int emit_rel(const Rel& r, const std::string& out_path, const std::string& assert_path) {
    if (!out_path.empty()) write_text_file(out_path, rel_to_json(r).dump(2) + "\n");
    else if (assert_path.empty()) std::cout << rel_to_json(r).dump(2) << "\n";
    if (!assert_path.empty()) {
        Rel expected = load_rel(assert_path);
        if (!equals(r, expected)) {
            std::cerr << "assert-equals failed\n";
            return kExitAssertFailed;
        }
    }
    return kExitOk;
}

int emit_flag(bool value, bool asserted) {
    std::cout << (value ? "true" : "false") << "\n";
    return asserted && !value ? kExitAssertFailed : kExitOk;
}

std::vector<Rat> parse_rat_list(const std::string& csv) {
    std::vector<Rat> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        std::size_t comma = csv.find(',', pos);
        if (comma == std::string::npos) comma = csv.size();
        std::string tok = csv.substr(pos, comma - pos);
        if (!tok.empty()) out.push_back(parse_rat_arg(tok));
        pos = comma + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact closed-relation calculus on piecewise-linear data"};
    app.require_subcommand(1);

    std::string in1, in2, via, out, assert_path, set_path, points_csv;
    std::string x_str = "0", eps_str = "0";
    long n = 1, from = 0, to = 0;
    int k = 4;
    bool suitable_flag = false, backward = false, do_assert = false;
    bool list_only = false;
    std::string pbm_path, bits_path, svg_path, run_name;

    auto* c_compose = app.add_subcommand("compose", "composition g o f of two relations");
    c_compose->add_option("g", in1)->required();
    c_compose->add_option("f", in2)->required();
    c_compose->add_option("-o,--out", out);
    c_compose->add_option("--assert-equals", assert_path);

    auto* c_scompose = app.add_subcommand("suitable-compose", "suitable composition g . f");
    c_scompose->add_option("g", in1)->required();
    c_scompose->add_option("f", in2)->required();
    c_scompose->add_option("-o,--out", out);
    c_scompose->add_option("--assert-equals", assert_path);

    auto* c_inverse = app.add_subcommand("inverse", "inverse relation");
    c_inverse->add_option("f", in1)->required();
    c_inverse->add_option("-o,--out", out);
    c_inverse->add_option("--assert-equals", assert_path);

    auto* c_iterate = app.add_subcommand("iterate", "n-th iterate (signed); --suitable trims");
    c_iterate->add_option("f", in1)->required();
    c_iterate->add_option("-n", n)->required();
    c_iterate->add_flag("--suitable", suitable_flag);
    c_iterate->add_option("-o,--out", out);
    c_iterate->add_option("--assert-equals", assert_path);

    auto* c_check = app.add_subcommand("check", "suitability report");
    c_check->add_option("f", in1)->required();
    c_check->add_option("-o,--out", out);

    auto* c_minimal = app.add_subcommand("minimal", "unique minimal subrelation");
    c_minimal->add_option("f", in1)->required();
    c_minimal->add_option("-o,--out", out);
    c_minimal->add_option("--assert-equals", assert_path);

    auto* c_oneset = app.add_subcommand("one-set", "singleton-fiber locus");
    c_oneset->add_option("f", in1)->required();
    c_oneset->add_option("-o,--out", out);

    auto* c_image = app.add_subcommand("image", "image F(A) of a set");
    c_image->add_option("f", in1)->required();
    c_image->add_option("--set", set_path)->required();
    c_image->add_option("-o,--out", out);

    auto* c_preimage = app.add_subcommand("preimage", "preimage F^{-1}(B)");
    c_preimage->add_option("f", in1)->required();
    c_preimage->add_option("--set", set_path)->required();
    c_preimage->add_option("-o,--out", out);

    auto* c_costar = app.add_subcommand("costar", "co-preimage F*(B)");
    c_costar->add_option("f", in1)->required();
    c_costar->add_option("--set", set_path)->required();
    c_costar->add_option("-o,--out", out);

    auto* c_orbit = app.add_subcommand("orbit", "orbit prefix of the carried map");
    c_orbit->add_option("f", in1)->required();
    c_orbit->add_option("-x", x_str)->required();
    c_orbit->add_option("-n", n)->required();
    c_orbit->add_flag("--backward", backward);
    c_orbit->add_option("-o,--out", out);

    auto* c_path = app.add_subcommand("path-check", "sample-path prefix membership");
    c_path->add_option("f", in1)->required();
    c_path->add_option("-p,--points", points_csv)->required();
    c_path->add_flag("--assert", do_assert);

    auto* c_table = app.add_subcommand("pair-table", "iterates vs suitable iterates");
    c_table->add_option("f", in1)->required();
    c_table->add_option("--from", from)->required();
    c_table->add_option("--to", to)->required();
    c_table->add_option("-o,--out", out)->required();

    auto* c_maps = app.add_subcommand("maps", "does h map G to F");
    c_maps->add_option("g", in1)->required();
    c_maps->add_option("f", in2)->required();
    c_maps->add_option("--via", via)->required();
    c_maps->add_flag("--assert", do_assert);

    auto* c_commute = app.add_subcommand("commute", "commuting square h.G = F.h");
    c_commute->add_option("g", in1)->required();
    c_commute->add_option("f", in2)->required();
    c_commute->add_option("--via", via)->required();
    c_commute->add_flag("--assert", do_assert);

    auto* c_selection = app.add_subcommand("selection", "selection and quasi-continuity check");
    c_selection->add_option("g", in1)->required();
    c_selection->add_option("f", in2)->required();
    c_selection->add_flag("--assert", do_assert);

    auto* c_raster = app.add_subcommand("rasterize", "outer box cover at resolution 2^-k");
    c_raster->add_option("f", in1)->required();
    c_raster->add_option("-k", k)->required();
    c_raster->add_option("--pbm", pbm_path);
    c_raster->add_option("--bits", bits_path);

    auto* c_render = app.add_subcommand("render", "SVG render of the relation");
    c_render->add_option("f", in1)->required();
    c_render->add_option("--svg", svg_path)->required();

    auto* c_modulus = app.add_subcommand("modulus", "verified continuity modulus delta");
    c_modulus->add_option("f", in1)->required();
    c_modulus->add_option("--set", set_path)->required();
    c_modulus->add_option("--eps", eps_str)->required();

    auto* c_examples = app.add_subcommand("examples", "embedded worked examples");
    c_examples->add_flag("--list", list_only);
    c_examples->add_option("--run", run_name);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*c_compose) return emit_rel(compose(load_rel(in1), load_rel(in2)), out, assert_path);
        if (*c_scompose)
            return emit_rel(suitable_compose(load_rel(in1), load_rel(in2)), out, assert_path);
        if (*c_inverse) return emit_rel(inverse(load_rel(in1)), out, assert_path);
        if (*c_iterate) {
            Rel f = load_rel(in1);
            Rel r = suitable_flag ? suitable_iterate(f, n) : iterate(f, n);
            return emit_rel(r, out, assert_path);
        }
        if (*c_check) {
            json j = report_to_json(suitability_report(load_rel(in1)));
            if (out.empty()) std::cout << j.dump(2) << "\n";
            else write_text_file(out, j.dump(2) + "\n");
            return kExitOk;
        }
        if (*c_minimal) {
            auto um = unique_minimal(load_rel(in1));
            if (std::holds_alternative<MinimalError>(um)) {
                const MinimalError& e = std::get<MinimalError>(um);
                Err code = e.kind == MinimalError::Kind::NotFullDomain ? Err::NotFullDomain
                                                                       : Err::NonUniqueMinimal;
                std::cerr << "error[" << err_name(code)
                          << "]: witness " << fset_to_json(e.witness).dump() << "\n";
                return kExitRefusal;
            }
            return emit_rel(std::get<Rel>(um), out, assert_path);
        }
        if (*c_oneset || *c_image || *c_preimage || *c_costar) {
            Rel f = load_rel(in1);
            FSet r = *c_oneset     ? one_set(f)
                     : *c_image    ? image(f, load_fset(set_path))
                     : *c_preimage ? preimage(f, load_fset(set_path))
                                   : costar(f, load_fset(set_path));
            json j = fset_to_json(r);
            if (out.empty()) std::cout << j.dump(2) << "\n";
            else write_text_file(out, j.dump(2) + "\n");
            return kExitOk;
        }
        if (*c_orbit) {
            OrbitResult o = orbit(load_rel(in1), parse_rat_arg(x_str), n, backward);
            json j = orbit_to_json(o);
            if (out.empty()) std::cout << j.dump(2) << "\n";
            else write_text_file(out, j.dump(2) + "\n");
            return kExitOk;
        }
        if (*c_path)
            return emit_flag(path_check(load_rel(in1), parse_rat_list(points_csv)), do_assert);
        if (*c_table) {
            auto rows = pair_table(load_rel(in1), from, to);
            std::string csv = "n,iterate,suitable,gap_cells\n";
            for (const PairRow& row : rows) {
                std::string base = out + "_n" + std::to_string(row.n);
                write_text_file(base + "_iter.json", rel_to_json(row.iterate).dump(2) + "\n");
                write_text_file(base + "_suit.json", rel_to_json(row.suitable).dump(2) + "\n");
                csv += std::to_string(row.n) + "," + base + "_iter.json," + base + "_suit.json," +
                       std::to_string(row.gap.size()) + "\n";
            }
            write_text_file(out + ".csv", csv);
            return kExitOk;
        }
        if (*c_maps)
            return emit_flag(maps_relation(load_fun(via), load_rel(in1), load_rel(in2)), do_assert);
        if (*c_commute)
            return emit_flag(commuting_check(load_fun(via), load_rel(in1), load_rel(in2)),
                             do_assert);
        if (*c_selection) {
            auto [is_sel, quasi] = selection_check(load_fun(in1), load_rel(in2));
            std::cout << "{\"is_selection\": " << (is_sel ? "true" : "false")
                      << ", \"quasi_continuous\": " << (quasi ? "true" : "false") << "}\n";
            return do_assert && !(is_sel && quasi) ? kExitAssertFailed : kExitOk;
        }
        if (*c_raster) {
            Grid g = rasterize(load_rel(in1), k);
            if (!pbm_path.empty()) write_text_file(pbm_path, grid_to_pbm(g));
            if (!bits_path.empty()) write_text_file(bits_path, grid_to_bits(g));
            if (pbm_path.empty() && bits_path.empty()) std::cout << grid_to_pbm(g);
            return kExitOk;
        }
        if (*c_render) {
            write_text_file(svg_path, render_svg(load_rel(in1)));
            return kExitOk;
        }
        if (*c_modulus) {
            Rat d = modulus(load_rel(in1), load_fset(set_path), parse_rat_arg(eps_str));
            std::cout << rat_str(d) << "\n";
            return kExitOk;
        }
        if (*c_examples) {
            auto results = examples::run_builtin_examples();
            if (list_only) {
                for (const auto& r : results) std::cout << r.name << "\n";
                return kExitOk;
            }
            if (!run_name.empty()) {
                bool found = false;
                for (const auto& r : results) found = found || r.name == run_name;
                if (!found) {
                    std::cerr << "error[Parse]: unknown example " << run_name << "\n";
                    return kExitInputError;
                }
            }
            bool all = true;
            for (const auto& r : results) {
                if (!run_name.empty() && r.name != run_name) continue;
                std::cout << (r.pass ? "pass " : "FAIL ") << r.name << " (" << r.detail << ")\n";
                all = all && r.pass;
            }
            return all ? kExitOk : kExitAssertFailed;
        }
    } catch (const Error& e) {
        std::cerr << "error[" << err_name(e.code()) << "]: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error[Internal]: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
