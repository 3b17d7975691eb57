#pragma once

// Closed-form coil physics: solenoid inductance, energy/inductance relation,
// winding resistance, quality factor and a small material catalog.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mvi/errors.hpp"
#include "mvi/units.hpp"

namespace mvi {

struct CoreMaterial {
    std::string name;
    double mu_r = 1.0;
    /// Ohm*m. Only winding metals carry a value.
    std::optional<double> resistivity;
};

/// N, A and l of the solenoid formula plus conductor cross-section.
struct CoilGeometry {
    unsigned turns = 0;
    double winding_area = 0.0; // m^2
    double length = 0.0;       // m
    double wire_area = 0.0;    // m^2
    double core_thickness = 0.0; // m, report metadata only
};

/// Checks the fields the inductance formula uses.
inline void validate_winding(const CoilGeometry& g) {
    if (!(g.length > 0.0) || !std::isfinite(g.length))
        throw ValidationError("length", "must be positive");
    if (!(g.winding_area > 0.0) || !std::isfinite(g.winding_area))
        throw ValidationError("winding_area", "must be positive");
}

inline void validate(const CoilGeometry& g) {
    validate_winding(g);
    if (!(g.wire_area > 0.0) || !std::isfinite(g.wire_area))
        throw ValidationError("wire_area", "must be positive");
    if (!(g.core_thickness >= 0.0))
        throw ValidationError("core_thickness", "must be non-negative");
}

inline void validate(const CoreMaterial& m) {
    if (!(m.mu_r > 0.0) || !std::isfinite(m.mu_r))
        throw ValidationError("mu_r", "relative permeability must be positive");
    if (m.resistivity && !(*m.resistivity > 0.0))
        throw ValidationError("resistivity", "must be positive");
}

/// L = mu0 * mu_r * N^2 * A / l  [H]
inline double solenoid_inductance(const CoilGeometry& geom, const CoreMaterial& mat) {
    validate_winding(geom);
    validate(mat);
    const double n = static_cast<double>(geom.turns);
    return constants::mu_0 * mat.mu_r * n * n * geom.winding_area / geom.length;
}

/// L = 2 W / I^2
inline double inductance_from_energy(double energy, double current) {
    if (current == 0.0) throw DomainError("inductance_from_energy: current must be non-zero");
    if (!(energy >= 0.0)) throw ValidationError("energy", "must be non-negative");
    return 2.0 * energy / (current * current);
}

/// W = L I^2 / 2
inline double magnetic_energy(double inductance, double current) {
    if (!(inductance >= 0.0)) throw ValidationError("inductance", "must be non-negative");
    return 0.5 * inductance * current * current;
}

/// Winding modelled as N loops around the core perimeter; no skin effect.
inline double wire_resistance(const CoilGeometry& geom, double core_perimeter,
                              const CoreMaterial& conductor) {
    if (!(core_perimeter > 0.0)) throw ValidationError("core_perimeter", "must be positive");
    if (!(geom.wire_area > 0.0)) throw ValidationError("wire_area", "must be positive");
    if (!conductor.resistivity)
        throw ValidationError("resistivity", "material '" + conductor.name + "' is not a conductor");
    validate(conductor);
    const double winding_length = static_cast<double>(geom.turns) * core_perimeter;
    return *conductor.resistivity * winding_length / geom.wire_area;
}

/// Q = 2 pi f L / R
inline double quality_factor(double inductance, double resistance, double frequency) {
    if (!(resistance > 0.0)) throw ValidationError("resistance", "must be positive");
    if (!(frequency > 0.0)) throw ValidationError("frequency", "must be positive");
    return 2.0 * std::numbers::pi * frequency * inductance / resistance;
}

/// Named materials, looked up case-insensitively. The magnetic mu_r values
/// are handbook defaults and may be overridden by the user.
class MaterialCatalog {
public:
    MaterialCatalog() {
        add({"air", 1.0, std::nullopt});
        add({"Fe", 4000.0, 9.71e-8});
        add({"Ni", 600.0, 6.99e-8});
        add({"NdFeB", 1.05, 1.4e-6});
        add({"Cu", 0.999994, 1.68e-8});
        add({"mu30", 30.0, std::nullopt});
        add({"mu40", 40.0, std::nullopt});
        add({"mu50", 50.0, std::nullopt});
    }

    /// Inserts or replaces an entry.
    void add(CoreMaterial m) {
        validate(m);
        if (m.name.empty()) throw ValidationError("name", "material name is empty");
        entries_[fold(m.name)] = std::move(m);
    }

    const CoreMaterial& lookup(std::string_view name) const {
        auto it = entries_.find(fold(name));
        if (it == entries_.end()) {
            std::string avail;
            for (const auto& n : names()) {
                if (!avail.empty()) avail += ", ";
                avail += n;
            }
            throw NotFoundError("unknown material '" + std::string(name) + "' (available: " + avail + ")");
        }
        return it->second;
    }

    bool contains(std::string_view name) const { return entries_.count(fold(name)) != 0; }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        out.reserve(entries_.size());
        for (const auto& [key, m] : entries_) out.push_back(m.name);
        return out;
    }

private:
    static std::string fold(std::string_view s) {
        std::string out(s);
        std::transform(out.begin(), out.end(), out.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        return out;
    }

    std::map<std::string, CoreMaterial> entries_;
};

/// Lookup in the built-in catalog.
inline CoreMaterial lookup_material(std::string_view name) {
    static const MaterialCatalog builtin;
    return builtin.lookup(name);
}

} // namespace mvi
