// Physical constants (SI) shared across modules.

#pragma once

namespace catlift::constants {

inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double gravitation = 6.67430e-11;    // m^3 kg^-1 s^-2
inline constexpr double boltzmann = 1.380649e-23;     // J/K
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg

// Mean molecular mass of air, used as the default gas particle mass.
inline constexpr double m_air_default = 28.9647 * atomic_mass_unit;

inline constexpr double pi = 3.14159265358979323846;

}  // namespace catlift::constants
