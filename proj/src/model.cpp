#include "rabi2/model.hpp"

#include <stdexcept>

namespace rabi2 {

Parity sector_parity(Sector s)
{
    return (s == Sector::Plus || s == Sector::Minus) ? Parity::Even : Parity::Odd;
}

const char* sector_name(Sector s)
{
    switch (s) {
        case Sector::Plus: return "plus";
        case Sector::Minus: return "minus";
        case Sector::PlusI: return "plus_i";
        case Sector::MinusI: return "minus_i";
    }
    throw std::logic_error("sector_name: bad sector");
}

Sector parse_sector(const std::string& name)
{
    for (Sector s : all_sectors())
        if (name == sector_name(s))
            return s;
    // short aliases used on the command line
    if (name == "+") return Sector::Plus;
    if (name == "-") return Sector::Minus;
    if (name == "i" || name == "+i") return Sector::PlusI;
    if (name == "-i") return Sector::MinusI;
    throw std::invalid_argument("unknown sector '" + name +
                                "' (expected plus, minus, plus_i or minus_i)");
}

SectorSeeds sector_seeds(Sector s)
{
    switch (s) {
        case Sector::Plus: return {1, 1, 0};
        case Sector::Minus: return {1, -1, 0};
        case Sector::PlusI: return {1, 1, 1};
        case Sector::MinusI: return {1, -1, 1};
    }
    throw std::logic_error("sector_seeds: bad sector");
}

ModelParams::ModelParams(real omega0_, real omega_, real g_)
    : omega0(std::move(omega0_)), omega(std::move(omega_)), g(std::move(g_))
{
    if (!(omega > 0))
        throw std::domain_error("ModelParams: omega must be positive (got " +
                                format_real(omega, 6) + ")");
    if (!(4 * abs(g) < omega))
        throw std::domain_error("ModelParams: normalizability bound 4|g| < omega violated "
                                "(4|g| = " + format_real(4 * abs(g), 6) +
                                ", omega = " + format_real(omega, 6) + ")");
}

DerivedParams derive(const ModelParams& params)
{
    DerivedParams d;
    if (params.g == 0) {
        d.kappa = 0;
        d.omega_big = 1;
        return d;
    }
    const real root = sqrt(params.omega * params.omega - 16 * params.g * params.g);
    // Minus branch: finite g -> 0 limit (kappa -> g/omega).
    d.kappa = (params.omega - root) / (8 * params.g);
    d.omega_big = root / params.omega;
    return d;
}

}  // namespace rabi2
