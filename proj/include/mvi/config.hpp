#pragma once

// JSON configuration file: material overrides, a beam description and a
// sweep specification, each optional.
//
//   {
//     "materials": [ {"name": "Fe", "mu_r": 5000, "resistivity": 9.71e-8} ],
//     "beam": { "length_um": 200, "width_um": 2, "thickness_um": 5,
//               "gap_um": 2, "electrode_area_um2": 1000,
//               "youngs_modulus_gpa": 169, "density": 2330 },
//     "sweep": { "subject": "beam",
//                "grid": { "voltage": {"start": 1, "stop": 15, "count": 15} },
//                "fixed": { "length_um": 200 } }
//   }
//
// Optional beam key: electrode_area_right_um2. Optional sweep keys:
// max_points, threads. Grid axes are either a list of numbers or a
// {start, stop, count} linear range. Unknown keys are rejected.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvi/cantilever.hpp"
#include "mvi/coil.hpp"
#include "mvi/errors.hpp"
#include "mvi/sweep.hpp"
#include "mvi/units.hpp"

namespace mvi {

struct Config {
    std::vector<CoreMaterial> materials;
    std::optional<CantileverBeam> beam;
    std::optional<SweepSpec> sweep;

    MaterialCatalog catalog() const {
        MaterialCatalog c;
        for (const auto& m : materials) c.add(m);
        return c;
    }
};

namespace detail {

using ojson = nlohmann::ordered_json;

inline void only_keys(const ojson& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ValidationError(where, "expected an object");
    for (const auto& [k, v] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) throw ValidationError(where + "." + k, "unknown key");
    }
}

inline double number_at(const ojson& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) throw ValidationError(where + "." + key, "missing");
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ValidationError(where + "." + key, "expected a number");
    return v.get<double>();
}

inline std::vector<double> axis_values(const ojson& v, const std::string& where) {
    std::vector<double> out;
    if (v.is_array()) {
        for (const auto& x : v) {
            if (!x.is_number()) throw ValidationError(where, "grid values must be numbers");
            out.push_back(x.get<double>());
        }
    } else if (v.is_object()) {
        only_keys(v, where, {"start", "stop", "count"});
        const double start = number_at(v, where, "start");
        const double stop = number_at(v, where, "stop");
        const double count = number_at(v, where, "count");
        if (!(count >= 1) || count != std::floor(count)) throw ValidationError(where + ".count", "must be a positive integer");
        const auto n = static_cast<std::size_t>(count);
        for (std::size_t i = 0; i < n; ++i)
            out.push_back(n == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(n - 1));
    } else {
        throw ValidationError(where, "expected a list or a {start, stop, count} range");
    }
    return out;
}

inline CantileverBeam beam_from_json(const ojson& b) {
    only_keys(b, "beam", {"length_um", "width_um", "thickness_um", "gap_um", "electrode_area_um2",
                          "electrode_area_right_um2", "youngs_modulus_gpa", "density"});
    CantileverBeam beam;
    beam.length = units::from_um(number_at(b, "beam", "length_um"));
    beam.width_inplane = units::from_um(number_at(b, "beam", "width_um"));
    beam.thickness_outofplane = units::from_um(number_at(b, "beam", "thickness_um"));
    beam.gap = units::from_um(number_at(b, "beam", "gap_um"));
    beam.electrode_overlap_area = units::from_um2(number_at(b, "beam", "electrode_area_um2"));
    if (b.contains("electrode_area_right_um2"))
        beam.electrode_overlap_area_right = units::from_um2(number_at(b, "beam", "electrode_area_right_um2"));
    beam.youngs_modulus = number_at(b, "beam", "youngs_modulus_gpa") * units::GPa;
    beam.density = number_at(b, "beam", "density");
    validate(beam);
    return beam;
}

} // namespace detail

inline Config parse_config(const std::string& text) {
    using detail::ojson;
    ojson doc;
    try {
        doc = ojson::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("config", e.what());
    }
    detail::only_keys(doc, "config", {"materials", "beam", "sweep"});
    Config cfg;

    if (doc.contains("materials")) {
        const auto& mats = doc.at("materials");
        if (!mats.is_array()) throw ValidationError("materials", "expected a list");
        for (const auto& m : mats) {
            detail::only_keys(m, "materials[]", {"name", "mu_r", "resistivity"});
            if (!m.contains("name") || !m.at("name").is_string())
                throw ValidationError("materials[].name", "expected a string");
            CoreMaterial mat{m.at("name").get<std::string>(), detail::number_at(m, "materials[]", "mu_r"),
                             std::nullopt};
            if (m.contains("resistivity")) mat.resistivity = detail::number_at(m, "materials[]", "resistivity");
            validate(mat);
            cfg.materials.push_back(std::move(mat));
        }
    }

    if (doc.contains("beam")) cfg.beam = detail::beam_from_json(doc.at("beam"));

    if (doc.contains("sweep")) {
        const auto& s = doc.at("sweep");
        detail::only_keys(s, "sweep", {"subject", "grid", "fixed", "max_points", "threads"});
        SweepSpec spec;
        if (!s.contains("subject") || !s.at("subject").is_string())
            throw ValidationError("sweep.subject", "expected a string");
        spec.subject = parse_subject(s.at("subject").get<std::string>());
        if (!s.contains("grid") || !s.at("grid").is_object()) throw ValidationError("sweep.grid", "expected an object");
        for (const auto& [name, axis] : s.at("grid").items())
            spec.grid.emplace_back(name, detail::axis_values(axis, "sweep.grid." + name));
        if (s.contains("fixed")) {
            if (!s.at("fixed").is_object()) throw ValidationError("sweep.fixed", "expected an object");
            for (const auto& [name, v] : s.at("fixed").items()) {
                if (!v.is_number()) throw ValidationError("sweep.fixed." + name, "expected a number");
                spec.fixed.emplace_back(name, v.get<double>());
            }
        }
        if (s.contains("max_points")) {
            const double mp = detail::number_at(s, "sweep", "max_points");
            if (!(mp >= 1)) throw ValidationError("sweep.max_points", "must be positive");
            spec.max_points = static_cast<std::size_t>(mp);
        }
        if (s.contains("threads")) {
            const double t = detail::number_at(s, "sweep", "threads");
            if (!(t >= 1) || t > 256) throw ValidationError("sweep.threads", "must be between 1 and 256");
            spec.threads = static_cast<unsigned>(t);
        }
        validate(spec);
        cfg.sweep = std::move(spec);
    }
    return cfg;
}

inline Config load_config(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot read config file '" + path.string() + "'");
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

} // namespace mvi
