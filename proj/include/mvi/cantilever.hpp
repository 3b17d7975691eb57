#pragma once

// Electromechanics of the single-ended cantilever switch.
//
// Modal frequencies come from clamped-free Euler-Bernoulli theory. The
// electrostatic model lumps the beam into a tip spring k = 3EI/L^3 facing a
// parallel-plate electrode; that model pulls in at exactly one third of the
// gap.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "mvi/errors.hpp"
#include "mvi/units.hpp"

namespace mvi {

enum class Plane { in_plane, out_of_plane };
enum class Side { left, right };

inline const char* to_string(Plane p) { return p == Plane::in_plane ? "in-plane" : "out-of-plane"; }
inline const char* to_string(Side s) { return s == Side::left ? "left" : "right"; }

struct CantileverBeam {
    double length = 0.0;               // m
    double width_inplane = 0.0;        // m, bending dimension for in-plane motion
    double thickness_outofplane = 0.0; // m
    double youngs_modulus = 0.0;       // Pa
    double density = 0.0;              // kg/m^3
    double gap = 0.0;                  // m
    double electrode_overlap_area = 0.0; // m^2, left electrode (and right unless overridden)
    /// Right-electrode area when the two electrodes differ.
    std::optional<double> electrode_overlap_area_right;

    double electrode_area(Side side) const {
        if (side == Side::right && electrode_overlap_area_right) return *electrode_overlap_area_right;
        return electrode_overlap_area;
    }
};

inline void validate(const CantileverBeam& b) {
    auto positive = [](double v, const char* field) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(field, "must be positive");
    };
    positive(b.length, "length");
    positive(b.width_inplane, "width_inplane");
    positive(b.thickness_outofplane, "thickness_outofplane");
    positive(b.youngs_modulus, "youngs_modulus");
    positive(b.density, "density");
    positive(b.gap, "gap");
    positive(b.electrode_overlap_area, "electrode_overlap_area");
    if (b.electrode_overlap_area_right) positive(*b.electrode_overlap_area_right, "electrode_overlap_area_right");
    if (!(b.gap < b.width_inplane * 1e3))
        throw ValidationError("gap", "implausibly large compared with the beam width (unit mistake?)");
}

namespace detail {

/// k-th root (k >= 1) of 1 + cos(x) cosh(x) = 0, one per interval
/// [(k-1) pi, k pi]. Written as cos(x) + 1/cosh(x) to stay finite.
inline double clamped_free_root(unsigned k) {
    auto f = [](double x) { return std::cos(x) + 1.0 / std::cosh(x); };
    double lo = (k - 1) * std::numbers::pi;
    double hi = k * std::numbers::pi;
    if (k == 1) lo = 1.0;
    double flo = f(lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) { lo = mid; flo = fm; }
        else hi = mid;
        if (hi - lo <= 4e-16 * hi) break;
    }
    return 0.5 * (lo + hi);
}

inline double second_moment(const CantileverBeam& b, Plane plane) {
    const double w = b.width_inplane, t = b.thickness_outofplane;
    return plane == Plane::in_plane ? t * w * w * w / 12.0 : w * t * t * t / 12.0;
}

} // namespace detail

/// Clamped-free eigenvalue lambda_order (order >= 1): 1.87510407, 4.69409113, ...
inline double clamped_free_eigenvalue(unsigned order) {
    if (order < 1) throw ValidationError("order", "mode order starts at 1");
    static const std::array<double, 6> table = [] {
        std::array<double, 6> t{};
        for (unsigned i = 0; i < t.size(); ++i) t[i] = detail::clamped_free_root(i + 1);
        return t;
    }();
    return order <= table.size() ? table[order - 1] : detail::clamped_free_root(order);
}

/// Tip stiffness 3 E I / L^3 for bending in `plane` [N/m].
inline double bending_stiffness(const CantileverBeam& beam, Plane plane) {
    validate(beam);
    const double l = beam.length;
    return 3.0 * beam.youngs_modulus * detail::second_moment(beam, plane) / (l * l * l);
}

/// Lumped mass that reproduces the first modal frequency with the tip
/// stiffness: m = 3 rho A L / lambda_1^4 (about 0.2427 of the beam mass).
inline double effective_modal_mass(const CantileverBeam& beam) {
    validate(beam);
    const double lam = clamped_free_eigenvalue(1);
    const double coeff = 3.0 / (lam * lam * lam * lam);
    return coeff * beam.density * beam.length * beam.width_inplane * beam.thickness_outofplane;
}

struct Mode {
    double frequency = 0.0; // Hz
    Plane plane = Plane::in_plane;
    unsigned order = 1;
};

/// f = lambda^2 / (2 pi) * sqrt(E I / (rho A L^4))
inline double modal_frequency(const CantileverBeam& beam, Plane plane, unsigned order) {
    validate(beam);
    const double lam = clamped_free_eigenvalue(order);
    const double area = beam.width_inplane * beam.thickness_outofplane;
    const double l2 = beam.length * beam.length;
    return lam * lam / (2.0 * std::numbers::pi) *
           std::sqrt(beam.youngs_modulus * detail::second_moment(beam, plane) /
                     (beam.density * area * l2 * l2));
}

/// First `max_order` modes of both bending planes, ascending by frequency.
inline std::vector<Mode> modal_frequencies(const CantileverBeam& beam, unsigned max_order) {
    if (max_order < 1) throw ValidationError("max_order", "must be at least 1");
    validate(beam);
    std::vector<Mode> modes;
    modes.reserve(2 * max_order);
    for (unsigned i = 1; i <= max_order; ++i) {
        modes.push_back({modal_frequency(beam, Plane::in_plane, i), Plane::in_plane, i});
        modes.push_back({modal_frequency(beam, Plane::out_of_plane, i), Plane::out_of_plane, i});
    }
    std::stable_sort(modes.begin(), modes.end(),
                     [](const Mode& a, const Mode& b) { return a.frequency < b.frequency; });
    return modes;
}

enum class BeamDimension { length, width_inplane, thickness_outofplane };

inline const char* to_string(BeamDimension d) {
    switch (d) {
    case BeamDimension::length: return "length";
    case BeamDimension::width_inplane: return "width_inplane";
    case BeamDimension::thickness_outofplane: return "thickness_outofplane";
    }
    return "?";
}

/// Solves the fundamental-mode formula of `plane` for the `unknown`
/// dimension so that the first mode lands on `f1`. The value stored in
/// `partial` for the unknown dimension is ignored.
///
/// In a given plane the fundamental is proportional to (bending dimension)
/// / L^2 and independent of the other cross-section dimension, so every
/// solvable case has a closed form.
inline CantileverBeam calibrate_from_fundamental(double f1, Plane plane, CantileverBeam partial,
                                                 BeamDimension unknown) {
    if (!(f1 > 0.0) || !std::isfinite(f1)) throw CalibrationError("target frequency must be positive");
    const BeamDimension bending =
        plane == Plane::in_plane ? BeamDimension::width_inplane : BeamDimension::thickness_outofplane;
    if (unknown != bending && unknown != BeamDimension::length)
        throw CalibrationError(std::string("the ") + to_string(plane) +
                               " fundamental does not depend on " + to_string(unknown));

    const double lam = clamped_free_eigenvalue(1);
    const double wave = std::sqrt(partial.youngs_modulus / (12.0 * partial.density));
    if (!std::isfinite(wave) || !(wave > 0.0))
        throw CalibrationError("youngs_modulus and density must be positive");
    // f1 = c * h / L^2 with h the bending dimension
    const double c = lam * lam / (2.0 * std::numbers::pi) * wave;

    CantileverBeam out = partial;
    if (unknown == BeamDimension::length) {
        const double h = plane == Plane::in_plane ? partial.width_inplane : partial.thickness_outofplane;
        if (!(h > 0.0)) throw CalibrationError("bending dimension must be positive");
        out.length = std::sqrt(c * h / f1);
    } else {
        if (!(partial.length > 0.0)) throw CalibrationError("length must be positive");
        const double h = f1 * partial.length * partial.length / c;
        if (plane == Plane::in_plane) out.width_inplane = h;
        else out.thickness_outofplane = h;
    }
    try {
        validate(out);
    } catch (const ValidationError& e) {
        throw CalibrationError(std::string("calibrated beam is invalid: ") + e.what());
    }
    return out;
}

/// V_PI = sqrt(8 k g^3 / (27 eps0 A_e))
inline double pull_in_voltage(const CantileverBeam& beam, Side side = Side::left) {
    const double k = bending_stiffness(beam, Plane::in_plane);
    const double g = beam.gap;
    return std::sqrt(8.0 * k * g * g * g / (27.0 * constants::epsilon_0 * beam.electrode_area(side)));
}

struct DeflectionResult {
    double voltage = 0.0;
    double tip_displacement = 0.0; // m, negative toward the left electrode
    bool stable = true;
};

/// Static tip equilibrium k x = eps0 A V^2 / (2 (g - x)^2), stable branch.
/// At or above pull-in the beam snaps to the electrode: the result carries
/// stable = false and the onset displacement g/3.
inline DeflectionResult static_deflection(const CantileverBeam& beam, double voltage, Side side) {
    if (!(voltage >= 0.0) || !std::isfinite(voltage))
        throw ValidationError("voltage", "must be non-negative");
    const double k = bending_stiffness(beam, Plane::in_plane);
    const double g = beam.gap;
    const double sign = side == Side::left ? -1.0 : 1.0;
    DeflectionResult r{voltage, 0.0, true};
    if (voltage >= pull_in_voltage(beam, side)) {
        r.stable = false;
        r.tip_displacement = sign * g / 3.0;
        return r;
    }
    if (voltage == 0.0) return r;

    // In u = x/g: k g^3 u (1-u)^2 - eps0 A V^2 / 2, increasing on [0, 1/3].
    const double load = 0.5 * constants::epsilon_0 * beam.electrode_area(side) * voltage * voltage;
    const double kg3 = k * g * g * g;
    auto residual = [&](double u) { return kg3 * u * (1.0 - u) * (1.0 - u) - load; };
    double lo = 0.0, hi = 1.0 / 3.0;
    for (int it = 0; it < 64; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (residual(mid) < 0.0) lo = mid;
        else hi = mid;
    }
    r.tip_displacement = sign * g * 0.5 * (lo + hi);
    return r;
}

/// True iff left and right actuation at `voltage` give mirrored tips.
inline bool actuation_symmetry_check(const CantileverBeam& beam, double voltage) {
    const auto l = static_deflection(beam, voltage, Side::left);
    const auto r = static_deflection(beam, voltage, Side::right);
    if (l.stable != r.stable) return false;
    const double scale = std::max(std::abs(l.tip_displacement), std::abs(r.tip_displacement));
    if (scale == 0.0) return true;
    return std::abs(l.tip_displacement + r.tip_displacement) <= 1e-12 * scale;
}

/// Small-signal stiffness about the bias point (electrostatic softening).
inline double biased_stiffness(const CantileverBeam& beam, double bias, Side side = Side::left) {
    const auto eq = static_deflection(beam, bias, side);
    if (!eq.stable) throw BiasUnstableError("bias is at or above the pull-in voltage");
    const double k = bending_stiffness(beam, Plane::in_plane);
    const double d = beam.gap - std::abs(eq.tip_displacement);
    return k - constants::epsilon_0 * beam.electrode_area(side) * bias * bias / (d * d * d);
}

/// In-plane resonance of the biased lumped oscillator.
inline double biased_resonance(const CantileverBeam& beam, double bias, Side side = Side::left) {
    const double keff = biased_stiffness(beam, bias, side);
    if (!(keff > 0.0)) throw BiasUnstableError("non-positive effective stiffness");
    return std::sqrt(keff / effective_modal_mass(beam)) / (2.0 * std::numbers::pi);
}

struct ResponsePoint {
    double frequency = 0.0; // Hz
    double amplitude = 0.0; // m per small-signal volt
};

struct FrequencyResponse {
    double bias = 0.0;
    double resonance = 0.0; // Hz
    double q_mech = 0.0;
    std::vector<ResponsePoint> points;
};

/// Tip amplitude per volt of small-signal drive superimposed on `bias`,
/// from the damped single-degree-of-freedom model linearized at the bias
/// point. At zero bias the linear force gain vanishes, so every amplitude is
/// zero while the resonance is still reported.
inline FrequencyResponse frequency_response(const CantileverBeam& beam, double bias,
                                            const std::vector<double>& frequencies, double q_mech,
                                            Side side = Side::left) {
    if (!(q_mech > 0.0)) throw ValidationError("q_mech", "must be positive");
    if (!(bias >= 0.0)) throw ValidationError("bias", "must be non-negative");
    const auto eq = static_deflection(beam, bias, side);
    if (!eq.stable) throw BiasUnstableError("bias is at or above the pull-in voltage");

    FrequencyResponse out;
    out.bias = bias;
    out.q_mech = q_mech;
    const double keff = biased_stiffness(beam, bias, side);
    if (!(keff > 0.0)) throw BiasUnstableError("non-positive effective stiffness");
    out.resonance = std::sqrt(keff / effective_modal_mass(beam)) / (2.0 * std::numbers::pi);

    const double d = beam.gap - std::abs(eq.tip_displacement);
    const double force_per_volt = constants::epsilon_0 * beam.electrode_area(side) * bias / (d * d);
    const double static_gain = force_per_volt / keff;
    out.points.reserve(frequencies.size());
    for (double f : frequencies) {
        if (!(f > 0.0)) throw ValidationError("frequencies", "must be positive");
        const double r = f / out.resonance;
        const double a = 1.0 - r * r;
        const double b = r / q_mech;
        out.points.push_back({f, static_gain / std::sqrt(a * a + b * b)});
    }
    return out;
}

} // namespace mvi
