#pragma once

// Grid sweeps over coil, beam and step-table parameters. Parameters use the
// interface units (um, um^2, nH, GPa, V); rows are produced in lexicographic
// grid order with the first grid parameter varying slowest.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "mvi/cantilever.hpp"
#include "mvi/coil.hpp"
#include "mvi/errors.hpp"
#include "mvi/switch_network.hpp"
#include "mvi/table_io.hpp"
#include "mvi/units.hpp"

namespace mvi {

enum class SweepSubject { coil, beam, steps };

inline SweepSubject parse_subject(std::string_view s) {
    if (s == "coil") return SweepSubject::coil;
    if (s == "beam") return SweepSubject::beam;
    if (s == "steps") return SweepSubject::steps;
    throw ValidationError("subject", "unknown sweep subject '" + std::string(s) + "' (coil, beam or steps)");
}

inline const char* to_string(SweepSubject s) {
    switch (s) {
    case SweepSubject::coil: return "coil";
    case SweepSubject::beam: return "beam";
    case SweepSubject::steps: return "steps";
    }
    return "?";
}

struct SweepSpec {
    SweepSubject subject = SweepSubject::steps;
    std::vector<std::pair<std::string, std::vector<double>>> grid;
    std::vector<std::pair<std::string, double>> fixed;
    std::size_t max_points = 1'000'000;
    unsigned threads = 1;
};

/// Parameter names per subject; `required` must appear in grid or fixed.
struct SubjectParameters {
    std::vector<std::string> required;
    std::map<std::string, double> defaults;
};

inline SubjectParameters subject_parameters(SweepSubject s) {
    switch (s) {
    case SweepSubject::coil:
        return {{"turns", "area_um2", "length_um"},
                {{"mu_r", 1.0}, {"wire_area_um2", 0.0}, {"perimeter_um", 0.0},
                 {"resistivity", 1.68e-8}, {"freq_khz", 0.0}}};
    case SweepSubject::beam:
        return {{"length_um", "width_um", "thickness_um", "gap_um", "electrode_area_um2",
                 "youngs_modulus_gpa", "density"},
                {{"voltage", 0.0}}};
    case SweepSubject::steps:
        return {{"n"}, {{"unit_l_nh", 1.0}}};
    }
    return {};
}

inline std::size_t grid_size(const SweepSpec& spec) {
    std::size_t total = 1;
    for (const auto& [name, values] : spec.grid) {
        if (values.empty()) return 0;
        if (total > spec.max_points / values.size() + 1) return spec.max_points + 1;
        total *= values.size();
    }
    return total;
}

inline void validate(const SweepSpec& spec) {
    if (spec.grid.empty()) throw ValidationError("grid", "sweep grid is empty");
    const auto params = subject_parameters(spec.subject);
    std::set<std::string> seen;
    auto check_name = [&](const std::string& name) {
        const bool known = std::find(params.required.begin(), params.required.end(), name) != params.required.end() ||
                           params.defaults.count(name) != 0;
        if (!known)
            throw ValidationError(name, std::string("not a parameter of subject '") + to_string(spec.subject) + "'");
        if (!seen.insert(name).second) throw ValidationError(name, "parameter given more than once");
    };
    for (const auto& [name, values] : spec.grid) {
        check_name(name);
        if (values.empty()) throw ValidationError(name, "grid axis has no values");
    }
    for (const auto& [name, value] : spec.fixed) check_name(name);
    for (const auto& r : params.required)
        if (!seen.count(r)) throw ValidationError(r, "required parameter missing");
    if (grid_size(spec) > spec.max_points)
        throw ValidationError("grid", "more than " + std::to_string(spec.max_points) + " points");
}

namespace detail {

struct ParamLookup {
    const std::map<std::string, double>& values;
    double operator()(const std::string& name) const { return values.at(name); }
};

inline unsigned as_count(const std::string& name, double v) {
    if (!(v >= 0.0) || v != std::floor(v) || v > 4e9) throw ValidationError(name, "must be a non-negative integer");
    return static_cast<unsigned>(v);
}

inline void evaluate_coil(const ParamLookup& p, Row& row) {
    CoilGeometry g;
    g.turns = as_count("turns", p("turns"));
    g.winding_area = units::from_um2(p("area_um2"));
    g.length = units::from_um(p("length_um"));
    g.wire_area = units::from_um2(p("wire_area_um2"));
    const CoreMaterial core{"sweep", p("mu_r"), std::nullopt};
    const double l = solenoid_inductance(g, core);
    row.add("inductance_nH", units::to_nH(l));
    if (p("perimeter_um") > 0.0) {
        const double r = wire_resistance(g, units::from_um(p("perimeter_um")), {"conductor", 1.0, p("resistivity")});
        row.add("resistance_ohm", r);
        if (p("freq_khz") > 0.0) row.add("quality_factor", quality_factor(l, r, p("freq_khz") * units::kHz));
    }
}

inline void evaluate_beam(const ParamLookup& p, Row& row) {
    CantileverBeam b;
    b.length = units::from_um(p("length_um"));
    b.width_inplane = units::from_um(p("width_um"));
    b.thickness_outofplane = units::from_um(p("thickness_um"));
    b.gap = units::from_um(p("gap_um"));
    b.electrode_overlap_area = units::from_um2(p("electrode_area_um2"));
    b.youngs_modulus = p("youngs_modulus_gpa") * units::GPa;
    b.density = p("density");
    const auto d = static_deflection(b, p("voltage"), Side::left);
    row.add("tip_displacement_um", units::to_um(d.tip_displacement));
    row.add("stable", d.stable ? 1.0 : 0.0);
    row.add("pull_in_voltage_V", pull_in_voltage(b));
    row.add("f1_inplane_kHz", units::to_kHz(modal_frequency(b, Plane::in_plane, 1)));
}

inline void evaluate_steps(const ParamLookup& p, Row& row) {
    const unsigned n = as_count("n", p("n"));
    const double unit = units::from_nH(p("unit_l_nh"));
    const auto table = enumerate_steps(n, unit);
    row.add("step_count", static_cast<double>(step_count(n)));
    row.add("enumerated", static_cast<double>(table.steps.size()));
    row.add("min_inductance_nH", units::to_nH(table.steps.front().inductance));
    row.add("max_inductance_nH", units::to_nH(table.steps.back().inductance));
}

} // namespace detail

/// One row per grid point. A point that fails to evaluate keeps its inputs
/// and carries the message in an "error" column.
inline std::vector<Row> run_sweep(const SweepSpec& spec) {
    validate(spec);
    const std::size_t total = grid_size(spec);
    const auto params = subject_parameters(spec.subject);

    auto point = [&](std::size_t flat) {
        std::vector<std::size_t> idx(spec.grid.size());
        for (std::size_t a = spec.grid.size(); a-- > 0;) {
            const auto len = spec.grid[a].second.size();
            idx[a] = flat % len;
            flat /= len;
        }
        std::map<std::string, double> values = params.defaults;
        Row row;
        for (std::size_t a = 0; a < spec.grid.size(); ++a) {
            const double v = spec.grid[a].second[idx[a]];
            values[spec.grid[a].first] = v;
            row.add(spec.grid[a].first, v);
        }
        for (const auto& [name, v] : spec.fixed) {
            values[name] = v;
            row.add(name, v);
        }
        const detail::ParamLookup lookup{values};
        try {
            switch (spec.subject) {
            case SweepSubject::coil: detail::evaluate_coil(lookup, row); break;
            case SweepSubject::beam: detail::evaluate_beam(lookup, row); break;
            case SweepSubject::steps: detail::evaluate_steps(lookup, row); break;
            }
        } catch (const Error& e) {
            row.add("error", std::string(e.what()));
        }
        return row;
    };

    std::vector<Row> rows(total);
    const unsigned workers = std::max(1u, std::min<unsigned>(spec.threads, static_cast<unsigned>(total)));
    if (workers == 1) {
        for (std::size_t i = 0; i < total; ++i) rows[i] = point(i);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < total; i += workers) rows[i] = point(i);
            });
        for (auto& t : pool) t.join();
    }
    return rows;
}

} // namespace mvi
