#pragma once

#include <cmath>
#include <numbers>

#include "optogup/errors.hpp"

namespace optogup {

// SI units throughout.
struct PhysicalConstants {
    double hbar;  // J s
    double h;     // J s
    double k_B;   // J/K
    double c;     // m/s
    double m_p;   // kg, Planck mass
};

// CODATA 2018. hbar is h/(2 pi) rounded to double so that h = 2 pi hbar holds
// to machine precision.
inline constexpr PhysicalConstants codata2018{
    1.0545718176461565e-34,
    6.62607015e-34,
    1.380649e-23,
    299792458.0,
    2.176434e-8,
};

inline void validate(const PhysicalConstants& k)
{
    if (!(k.hbar > 0 && k.h > 0 && k.k_B > 0 && k.c > 0 && k.m_p > 0))
        throw DomainError("physical constants must be strictly positive");
    const double two_pi_hbar = 2.0 * std::numbers::pi * k.hbar;
    if (std::abs(two_pi_hbar - k.h) > 1e-12 * k.h)
        throw DomainError("physical constants: h != 2 pi hbar");
}

} // namespace optogup
