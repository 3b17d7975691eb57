#pragma once

// Command-line front end. Interface units are um, um^2, nH, V and kHz;
// everything is converted to SI before it reaches the library.
//
// Exit codes: 0 success, 1 validation or usage error, 2 internal error.

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mvi/mvi.hpp"

namespace mvi::cli {

/// "1nH", "2.5 uH", "1e-9H", "3pH"; a bare number is taken as nH.
inline double parse_inductance(const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw UsageError("cannot parse inductance '" + text + "'");
    std::string unit(end);
    unit.erase(0, unit.find_first_not_of(' '));
    double scale = units::nH;
    if (unit.empty() || unit == "nH") scale = units::nH;
    else if (unit == "H") scale = 1.0;
    else if (unit == "mH") scale = 1e-3;
    else if (unit == "uH" || unit == "µH" || unit == "μH") scale = 1e-6;
    else if (unit == "pH") scale = 1e-12;
    else throw UsageError("unknown inductance unit '" + unit + "' in '" + text + "'");
    const double h = v * scale;
    if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("unit-l", "must be positive");
    return h;
}

inline Plane parse_plane(const std::string& s) {
    if (s == "in" || s == "in-plane") return Plane::in_plane;
    if (s == "out" || s == "out-of-plane") return Plane::out_of_plane;
    throw UsageError("unknown plane '" + s + "' (in or out)");
}

inline Side parse_side(const std::string& s) {
    if (s == "left") return Side::left;
    if (s == "right") return Side::right;
    throw UsageError("unknown side '" + s + "' (left or right)");
}

inline BeamDimension parse_dimension(const std::string& s) {
    if (s == "length") return BeamDimension::length;
    if (s == "width") return BeamDimension::width_inplane;
    if (s == "thickness") return BeamDimension::thickness_outofplane;
    throw UsageError("unknown dimension '" + s + "' (length, width or thickness)");
}

inline std::vector<double> linspace(double from, double to, unsigned points) {
    if (points < 1) throw UsageError("need at least one point");
    std::vector<double> v;
    for (unsigned i = 0; i < points; ++i)
        v.push_back(points == 1 ? from : from + (to - from) * i / (points - 1));
    return v;
}

struct BeamFlags {
    std::optional<double> length_um, width_um, thickness_um, gap_um, area_um2, area_right_um2, e_gpa, density;
};

inline Row beam_row(const CantileverBeam& b) {
    Row r;
    r.add("length_um", units::to_um(b.length))
        .add("width_um", units::to_um(b.width_inplane))
        .add("thickness_um", units::to_um(b.thickness_outofplane))
        .add("gap_um", units::to_um(b.gap))
        .add("electrode_area_um2", units::to_um2(b.electrode_overlap_area))
        .add("youngs_modulus_gpa", b.youngs_modulus / units::GPa)
        .add("density", b.density);
    return r;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Digitally switched MEMS micro-coil inductor toolkit"};
    app.name("mvi");
    app.require_subcommand(1, 1);

    std::string format_token = "csv";
    std::string out_path;
    std::string config_path;
    app.add_option("--format", format_token, "Output format: csv or json")->capture_default_str();
    app.add_option("--out", out_path, "Write results to this file instead of standard output");
    app.add_option("--config", config_path, "JSON configuration file (materials, beam, sweep)");

    // coil
    auto* coil = app.add_subcommand("coil", "Solenoid inductance L = mu0 mu_r N^2 A / l");
    coil->fallthrough();
    unsigned turns = 0;
    double area_um2 = 0, length_um = 0;
    std::optional<double> mu_r, wire_area_um2, perimeter_um, freq_khz;
    std::string material, conductor = "Cu";
    coil->add_option("--turns", turns, "Number of turns N")->required();
    coil->add_option("--area-um2", area_um2, "Winding cross-section A [um^2]")->required();
    coil->add_option("--length-um", length_um, "Coil length l [um]")->required();
    auto* mu_opt = coil->add_option("--mu-r", mu_r, "Relative permeability of the core");
    coil->add_option("--material", material, "Core material from the catalog")->excludes(mu_opt);
    coil->add_option("--wire-area-um2", wire_area_um2, "Conductor cross-section [um^2] (for resistance)");
    coil->add_option("--perimeter-um", perimeter_um, "Core perimeter [um] (for resistance)");
    coil->add_option("--conductor", conductor, "Winding metal from the catalog")->capture_default_str();
    coil->add_option("--freq-khz", freq_khz, "Frequency for the quality factor [kHz]");

    // steps
    auto* steps = app.add_subcommand("steps", "Enumerate every reachable inductance step for n coils");
    steps->fallthrough();
    unsigned n_coils = 5;
    std::string unit_l = "1nH";
    steps->add_option("--n", n_coils, "Number of coils")->capture_default_str();
    steps->add_option("--unit-l", unit_l, "Single-coil inductance, e.g. 1nH, 2.5pH (bare number: nH)")
        ->capture_default_str();

    // switch
    auto* sw = app.add_subcommand("switch", "Evaluate a switch word");
    sw->fallthrough();
    sw->footer("Switch word: one character per coil, coil 1 first.\n"
               "  S  series select   (parallel switch open, series switch up)\n"
               "  P  parallel select (parallel switch closed, series switch down)\n"
               "  O  coil disconnected\n"
               "Reachable words are S...S P...P O...O; a lone P counts as a series coil.");
    std::string word;
    sw->add_option("--word", word, "Switch word, e.g. SSPPO")->required();
    sw->add_option("--unit-l", unit_l, "Single-coil inductance (bare number: nH)")->capture_default_str();

    // beam
    auto* beam = app.add_subcommand("beam", "Cantilever switch analysis");
    beam->fallthrough();
    BeamFlags bf;
    beam->add_option("--length-um", bf.length_um, "Beam length [um]");
    beam->add_option("--width-um", bf.width_um, "In-plane width [um]");
    beam->add_option("--thickness-um", bf.thickness_um, "Out-of-plane thickness [um]");
    beam->add_option("--gap-um", bf.gap_um, "Electrode gap [um]");
    beam->add_option("--electrode-area-um2", bf.area_um2, "Electrode overlap area [um^2]");
    beam->add_option("--electrode-area-right-um2", bf.area_right_um2, "Right electrode area if different [um^2]");
    beam->add_option("--youngs-modulus-gpa", bf.e_gpa, "Young's modulus [GPa]");
    beam->add_option("--density", bf.density, "Density [kg/m^3]");
    std::string analysis = "summary";
    beam->add_option("--analysis", analysis, "summary | modes | deflect | response | calibrate | symmetry")
        ->capture_default_str();
    unsigned orders = 3;
    beam->add_option("--orders", orders, "Mode orders per plane (modes)")->capture_default_str();
    std::vector<double> voltages;
    beam->add_option("--voltage", voltages, "Actuation voltage(s) [V] (deflect, symmetry)");
    std::optional<double> v_from, v_to;
    unsigned v_points = 15;
    beam->add_option("--v-from", v_from, "Voltage ramp start [V] (deflect)");
    beam->add_option("--v-to", v_to, "Voltage ramp end [V] (deflect)");
    beam->add_option("--v-points", v_points, "Voltage ramp points (deflect)")->capture_default_str();
    std::string side = "left";
    beam->add_option("--side", side, "Actuating electrode: left or right")->capture_default_str();
    double bias = 0.0, q_mech = 10.0, f_from = 1.0, f_to = 100.0;
    unsigned f_points = 200;
    beam->add_option("--bias", bias, "DC bias [V] (response)")->capture_default_str();
    beam->add_option("--q", q_mech, "Mechanical quality factor (response)")->capture_default_str();
    beam->add_option("--f-from-khz", f_from, "Response sweep start [kHz]")->capture_default_str();
    beam->add_option("--f-to-khz", f_to, "Response sweep end [kHz]")->capture_default_str();
    beam->add_option("--f-points", f_points, "Response sweep points")->capture_default_str();
    double target_khz = 0.0;
    std::string plane = "in", unknown = "length";
    beam->add_option("--target-khz", target_khz, "Target fundamental [kHz] (calibrate)");
    beam->add_option("--plane", plane, "in or out (calibrate)")->capture_default_str();
    beam->add_option("--unknown", unknown, "length, width or thickness (calibrate)")->capture_default_str();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Run the sweep described in --config");
    sweep->fallthrough();

    // verify
    auto* verify = app.add_subcommand("verify", "Check the published tables against the models");
    verify->fallthrough();
    std::string data_dir = default_data_dir().string();
    std::string report_path;
    verify->add_option("--data-dir", data_dir, "Directory with the table CSV files")->capture_default_str();
    verify->add_option("--report", report_path, "Write the full comparison report (.json or .csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        const Format format = parse_format(format_token);
        std::optional<Config> cfg;
        if (!config_path.empty()) cfg = load_config(config_path);

        auto write = [&](const std::vector<Row>& rows) {
            if (out_path.empty()) emit(rows, format, out);
            else emit(rows, format, out_path);
        };

        if (*coil) {
            const MaterialCatalog catalog = cfg ? cfg->catalog() : MaterialCatalog{};
            CoreMaterial core{"custom", mu_r.value_or(1.0), std::nullopt};
            if (!material.empty()) core = catalog.lookup(material);
            CoilGeometry g;
            g.turns = turns;
            g.winding_area = units::from_um2(area_um2);
            g.length = units::from_um(length_um);
            g.wire_area = units::from_um2(wire_area_um2.value_or(0.0));
            const double l = solenoid_inductance(g, core);
            Row r;
            r.add("turns", turns).add("area_um2", area_um2).add("length_um", length_um)
                .add("material", core.name).add("mu_r", core.mu_r).add("inductance_nH", units::to_nH(l));
            if (perimeter_um || wire_area_um2) {
                if (!perimeter_um || !wire_area_um2)
                    throw UsageError("resistance needs both --perimeter-um and --wire-area-um2");
                const double res = wire_resistance(g, units::from_um(*perimeter_um), catalog.lookup(conductor));
                r.add("resistance_ohm", res);
                if (freq_khz) r.add("quality_factor", quality_factor(l, res, *freq_khz * units::kHz));
            } else if (freq_khz) {
                throw UsageError("--freq-khz needs --perimeter-um and --wire-area-um2");
            }
            write({r});
        } else if (*steps) {
            const double unit = parse_inductance(unit_l);
            const auto table = enumerate_steps(n_coils, unit);
            std::vector<Row> rows;
            for (std::size_t i = 0; i < table.steps.size(); ++i) {
                const auto& s = table.steps[i];
                Row r;
                r.add("step", static_cast<double>(i + 1))
                    .add("series", s.config.series_count)
                    .add("parallel", s.config.parallel_count)
                    .add("word", synthesize_word(s.config).str())
                    .add("factor", s.factor)
                    .add("inductance_nH", units::to_nH(s.inductance));
                rows.push_back(std::move(r));
            }
            write(rows);
        } else if (*sw) {
            const double unit = parse_inductance(unit_l);
            const auto parsed = parse_switch_word(word);
            const double closed = total_inductance(parsed.config, unit);
            const double solved = effective_inductance(build_network(parsed.config, unit));
            std::string notes;
            for (const auto& n : parsed.notes) {
                err << "note: " << n << '\n';
                notes += (notes.empty() ? "" : "; ") + n;
            }
            Row r;
            r.add("word", word)
                .add("coils", parsed.config.coil_count)
                .add("series", parsed.config.series_count)
                .add("parallel", parsed.config.parallel_count)
                .add("factor", closed / unit)
                .add("inductance_nH", units::to_nH(closed))
                .add("solver_inductance_nH", units::to_nH(solved))
                .add("note", notes);
            write({r});
        } else if (*beam) {
            CantileverBeam b;
            if (cfg && cfg->beam) b = *cfg->beam;
            if (bf.length_um) b.length = units::from_um(*bf.length_um);
            if (bf.width_um) b.width_inplane = units::from_um(*bf.width_um);
            if (bf.thickness_um) b.thickness_outofplane = units::from_um(*bf.thickness_um);
            if (bf.gap_um) b.gap = units::from_um(*bf.gap_um);
            if (bf.area_um2) b.electrode_overlap_area = units::from_um2(*bf.area_um2);
            if (bf.area_right_um2) b.electrode_overlap_area_right = units::from_um2(*bf.area_right_um2);
            if (bf.e_gpa) b.youngs_modulus = *bf.e_gpa * units::GPa;
            if (bf.density) b.density = *bf.density;

            std::vector<Row> rows;
            if (analysis == "calibrate") {
                // the unknown dimension may be left unset
                const auto dim = parse_dimension(unknown);
                CantileverBeam probe = b;
                if (dim == BeamDimension::length && !(probe.length > 0)) probe.length = 1.0;
                if (dim == BeamDimension::width_inplane && !(probe.width_inplane > 0)) probe.width_inplane = 1.0;
                if (dim == BeamDimension::thickness_outofplane && !(probe.thickness_outofplane > 0))
                    probe.thickness_outofplane = 1.0;
                const auto cal = calibrate_from_fundamental(target_khz * units::kHz, parse_plane(plane), probe, dim);
                Row r = beam_row(cal);
                r.add("f1_inplane_kHz", units::to_kHz(modal_frequency(cal, Plane::in_plane, 1)))
                    .add("f1_outofplane_kHz", units::to_kHz(modal_frequency(cal, Plane::out_of_plane, 1)));
                rows.push_back(std::move(r));
                write(rows);
                return 0;
            }
            validate(b);
            if (analysis == "summary") {
                Row r = beam_row(b);
                r.add("stiffness_inplane_N_per_m", bending_stiffness(b, Plane::in_plane))
                    .add("stiffness_outofplane_N_per_m", bending_stiffness(b, Plane::out_of_plane))
                    .add("f1_inplane_kHz", units::to_kHz(modal_frequency(b, Plane::in_plane, 1)))
                    .add("f1_outofplane_kHz", units::to_kHz(modal_frequency(b, Plane::out_of_plane, 1)))
                    .add("pull_in_voltage_V", pull_in_voltage(b, Side::left));
                if (b.electrode_overlap_area_right)
                    r.add("pull_in_voltage_right_V", pull_in_voltage(b, Side::right));
                rows.push_back(std::move(r));
            } else if (analysis == "modes") {
                for (const auto& m : modal_frequencies(b, orders)) {
                    Row r;
                    r.add("plane", std::string(to_string(m.plane)))
                        .add("order", m.order)
                        .add("frequency_kHz", units::to_kHz(m.frequency));
                    rows.push_back(std::move(r));
                }
            } else if (analysis == "deflect") {
                std::vector<double> vs = voltages;
                if (v_from || v_to) {
                    if (!v_from || !v_to) throw UsageError("--v-from and --v-to go together");
                    auto ramp = linspace(*v_from, *v_to, v_points);
                    vs.insert(vs.end(), ramp.begin(), ramp.end());
                }
                if (vs.empty()) throw UsageError("deflect needs --voltage or --v-from/--v-to");
                const Side s = parse_side(side);
                for (double v : vs) {
                    const auto d = static_deflection(b, v, s);
                    Row r;
                    r.add("voltage_V", v)
                        .add("side", std::string(to_string(s)))
                        .add("tip_displacement_um", units::to_um(d.tip_displacement))
                        .add("stable", d.stable ? "true" : "false");
                    rows.push_back(std::move(r));
                }
            } else if (analysis == "response") {
                const auto fr = frequency_response(b, bias, linspace(f_from * units::kHz, f_to * units::kHz, f_points),
                                                   q_mech, parse_side(side));
                for (const auto& p : fr.points) {
                    Row r;
                    r.add("frequency_kHz", units::to_kHz(p.frequency))
                        .add("amplitude_um_per_V", units::to_um(p.amplitude))
                        .add("bias_V", fr.bias)
                        .add("resonance_kHz", units::to_kHz(fr.resonance));
                    rows.push_back(std::move(r));
                }
            } else if (analysis == "symmetry") {
                if (voltages.empty()) throw UsageError("symmetry needs --voltage");
                for (double v : voltages) {
                    Row r;
                    r.add("voltage_V", v).add("symmetric", actuation_symmetry_check(b, v) ? "true" : "false");
                    rows.push_back(std::move(r));
                }
            } else {
                throw UsageError("unknown analysis '" + analysis + "'");
            }
            write(rows);
        } else if (*sweep) {
            if (!cfg || !cfg->sweep) throw UsageError("sweep needs --config with a \"sweep\" section");
            write(run_sweep(*cfg->sweep));
        } else if (*verify) {
            const auto data = load_reference_data(data_dir);
            const std::vector<ComparisonReport> reports{reproduce_step_table(5, 1.0, data.steps),
                                                        reproduce_coil_table(data.coils),
                                                        check_energy_consistency(data.energy)};
            bool ok = true;
            std::vector<Row> all;
            for (const auto& rep : reports) {
                out << rep.title << ": " << rep.rows.size() << " rows, " << rep.count(Verdict::match) << " match, "
                    << rep.count(Verdict::mismatch) << " mismatch, " << rep.count(Verdict::flagged_discrepancy)
                    << " flagged\n";
                for (const auto& r : rep.rows) {
                    if (r.verdict == Verdict::flagged_discrepancy)
                        out << "  flagged: " << r.description << " -> " << format_number(r.computed) << " vs printed "
                            << r.reference_text << " (" << r.note << ")\n";
                    if (r.verdict == Verdict::mismatch)
                        err << "mismatch [" << rep.title << "] " << r.description << ": computed "
                            << format_number(r.computed) << ", printed " << r.reference_text
                            << (r.note.empty() ? "" : " (" + r.note + ")") << '\n';
                }
                ok = ok && rep.passed();
                auto rows = to_rows(rep);
                all.insert(all.end(), rows.begin(), rows.end());
            }
            if (!report_path.empty()) {
                const bool csv = std::filesystem::path(report_path).extension() == ".csv";
                emit(all, csv ? Format::csv : Format::json, report_path);
            }
            out << (ok ? "verify: all tables consistent\n" : "verify: MISMATCH\n");
            return ok ? 0 : 1;
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace mvi::cli
