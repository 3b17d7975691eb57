#pragma once

#include <numbers>

// Everything inside the library is strict SI. The helpers below are the only
// place the micro-scale interface units (um, um^2, nH, kHz, GPa) appear.

namespace mvi {

namespace constants {
/// Vacuum permeability [H/m].
inline constexpr double mu_0 = 4.0 * std::numbers::pi * 1e-7;
/// Vacuum permittivity [F/m].
inline constexpr double epsilon_0 = 8.8541878128e-12;
} // namespace constants

namespace units {
inline constexpr double um = 1e-6;
inline constexpr double um2 = 1e-12;
inline constexpr double nH = 1e-9;
inline constexpr double nJ = 1e-9;
inline constexpr double kHz = 1e3;
inline constexpr double GPa = 1e9;

constexpr double from_um(double v) { return v * um; }
constexpr double from_um2(double v) { return v * um2; }
constexpr double from_nH(double v) { return v * nH; }
constexpr double to_um(double meters) { return meters / um; }
constexpr double to_um2(double m2) { return m2 / um2; }
constexpr double to_nH(double henry) { return henry / nH; }
constexpr double to_kHz(double hz) { return hz / kHz; }
} // namespace units

} // namespace mvi
