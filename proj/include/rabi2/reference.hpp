#pragma once

// Independent ground truth: truncated Fock-basis diagonalization of the
// Hamiltonian, closed-form limit spectra (g = 0 and omega0 = 0), the exact
// isolated level-crossing points, and the small-g ground-state expansion.
//
// The diagonalization oracle deliberately runs in plain double precision
// with a dense symmetric eigensolver — a numeric stack disjoint from the
// series machinery it validates — and knows nothing about sectors.

#include "rabi2/model.hpp"
#include "rabi2/numeric.hpp"

#include <map>
#include <vector>

namespace rabi2 {

struct OracleSpectrum {
    int n_max = 0;                       // boson cutoff
    std::vector<double> eigenvalues;     // sorted ascending, 2*(n_max+1) of them
    double cutoff_error_estimate = 0.0;  // max low-lying shift vs the n_max/2 run
};

// Builds the real symmetric matrix in the product basis
// {spin down, spin up} x {|n>, n <= n_max}: diagonal -+omega0/2 + omega n;
// off-diagonal 2g sqrt((n+1)(n+2)) between (s, n) and (flip s, n+2) — the
// spin ladder convention here carries no 1/2, so sigma^+ + sigma^- couples
// with matrix element 2.  g = 0 is allowed.  The cutoff error estimate
// covers the lowest `low_count` eigenvalues.
OracleSpectrum oracle_diagonalize(const ModelParams& params, int n_max, int low_count = 10);

// g = 0 ladders per sector (requires params.g == 0):
//   Minus:  -omega0/2, +omega0/2 + 2w, -omega0/2 + 4w, ...
//   Plus:   +omega0/2, -omega0/2 + 2w, +omega0/2 + 4w, ...
//   MinusI: -omega0/2 + w, +omega0/2 + 3w, ...
//   PlusI:  +omega0/2 + w, -omega0/2 + 3w, ...
std::map<Sector, std::vector<real>> reference_g0(const ModelParams& params, int count);

// omega0 = 0 exact spectrum: E_n = -omega/2 + (n + 1/2) omega_big * omega,
// n = 0..count-1, each listed twice (every level is doubly degenerate).
// Requires params.omega0 == 0.
std::vector<real> reference_omega0_zero(const ModelParams& params, int count);

// Isolated exactly-solvable point where levels from two sectors cross.
struct JuddianPoint {
    int N = 0;
    real omega_big;   // admissible root of the degree-N constraint
    real g;           // (omega/4) sqrt(1 - omega_big^2)
    real energy;      // -omega/2 + (N + 1/2) omega_big * omega
};

// Closed-form constraint solutions for N in {2, 3, 4}, with
// r = omega0^2/(4 omega^2):
//   N=2: 2 - 6 W + r = 0          (W = omega_big^2)
//   N=3: 6 - 10 W + r = 0
//   N=4: 8(3 - 30 W + 35 W^2) + 2(7 - 17 W) r + r^2 = 0  (quadratic in W)
// Only W in (0,1) is admissible; the N=4 quadratic is solved in closed form
// with a discriminant guard at 1e-30.  Result sorted by g ascending; empty
// when no admissible root exists.
std::vector<JuddianPoint> juddian_points(const real& omega0, const real& omega, int N);

// Small-g expansion of the global ground state:
// E_0(g) = -omega0/2 - 8 g^2/(2 omega + omega0) + O(g^4).
// Returns (constant, quadratic coefficient); params.g is ignored.
std::pair<real, real> smallg_ground_state(const ModelParams& params);

}  // namespace rabi2
