#pragma once

// Hamiltonian parameters, symmetry sectors, and derived quantities.
//
// The two-photon Rabi Hamiltonian
//     H = (omega0/2) sigma_z + omega b^dag b + g (sigma^+ + sigma^-)[(b^dag)^2 + b^2]
// has a discrete spectrum only for 4|g| < omega (normalizability bound);
// parameter construction enforces that.  In Bargmann space the Hilbert space
// splits into four sectors labeled c in {+1, -1, +i, -i}, combining parity
// with the z -> iz swap symmetry; each sector fixes the seed values of the
// series recurrence.
//
// All types are immutable after construction and safe to share across
// threads; all operations are pure.

#include "rabi2/numeric.hpp"

#include <array>
#include <string>

namespace rabi2 {

enum class Sector { Plus, Minus, PlusI, MinusI };
enum class Parity { Even, Odd };

constexpr std::array<Sector, 4> all_sectors()
{
    return {Sector::Plus, Sector::Minus, Sector::PlusI, Sector::MinusI};
}

Parity sector_parity(Sector s);

// Stable lowercase names used in CSV/JSON output and CLI flags.
const char* sector_name(Sector s);
Sector parse_sector(const std::string& name);  // throws std::invalid_argument

// Seed values of the series recurrence for one sector:
// q_seed = Q at the start index, k_seed = K at the start index,
// start_index = 0 for even sectors, 1 for odd.
struct SectorSeeds {
    int q_seed;
    int k_seed;
    int start_index;
};

SectorSeeds sector_seeds(Sector s);

// The Hamiltonian triple.  Construction validates omega > 0 and
// 4|g| < omega and throws std::domain_error otherwise.
struct ModelParams {
    real omega0;
    real omega;
    real g;

    ModelParams(real omega0_, real omega_, real g_);
};

// kappa: squeezing parameter of the Gaussian prefactor e^{-kappa z^2};
// omega_big: dimensionless level-spacing scale sqrt(1 - 16 g^2 / omega^2),
// in (0, 1]; omega_big -> 0 marks spectral collapse.
struct DerivedParams {
    real kappa;
    real omega_big;
};

// kappa uses the branch (omega - sqrt(omega^2 - 16 g^2)) / (8 g), the one
// with a finite g -> 0 limit (kappa -> g/omega); g = 0 yields exactly 0.
// kappa is odd in g, omega_big even.
DerivedParams derive(const ModelParams& params);

}  // namespace rabi2
