#pragma once

// Assembly and evaluation of the four real sector G-functions.
//
// With phi_1(z) = e^{-kappa z^2} sum Q_n z^n evaluated on the real axis and
// phi_2 taken at iz, the i-powers reduce to real signs thanks to parity:
//
//   even sectors:  phi_2(iz) = e^{+kappa z^2} sum_{n even} K_n (-1)^{n/2} z^n
//     G_plus  = phi_2(iz) - phi_1(z)
//     G_minus = phi_2(iz) + phi_1(z)
//   odd sectors:   i*phi_2(iz) = e^{+kappa z^2} sum_{n odd} K_n (-1)^{(n+1)/2} z^n
//     G_i       = i*phi_2(iz) + phi_1(z)
//     G_minus_i = i*phi_2(iz) - phi_1(z)
//
// All four are manifestly real; no complex arithmetic exists anywhere in the
// evaluation path.  Roots in E, which are independent of the chosen z > 0,
// constitute the sector spectra.
//
// The reported value is G divided by the sum of the absolute magnitudes of
// all assembled terms (a strictly positive scale).  That keeps signs, roots
// and brackets untouched while making residuals comparable across z and
// giving the adaptive stopping rule a scale-free footing; without it the raw
// magnitude at z = 1000 (~e^{kappa z^2}) would drown every residual
// comparison.

#include "rabi2/config.hpp"
#include "rabi2/errors.hpp"
#include "rabi2/model.hpp"
#include "rabi2/series.hpp"

#include <utility>
#include <vector>

namespace rabi2 {

struct GEvaluation {
    Sector sector;
    real energy;
    real z;
    int order = 0;        // truncation order actually used
    real value;           // scale-normalized G; sign structure is exact
    bool converged = false;  // order-stability achieved (see eval docs)
};

// Fixed-order evaluation.  `converged` reports an order-halving check:
// the value recomputed from the first half of the coefficient array agrees
// to tol_series relative.  Throws GEvalError on non-finite intermediates,
// std::invalid_argument for z <= 0 or order < 4.
GEvaluation eval_G(const ModelParams& params, const DerivedParams& derived, Sector sector,
                   const real& energy, const real& z, int order,
                   double tol_series = 1e-20);

// Adaptive-order evaluation: climbs the order ladder L, L+delta_l, ... on a
// single coefficient array computed at l_max, stopping as soon as the value
// stabilizes to tol_series (converged = true, order = stopping order) or
// l_max is reached (converged = false).  Stability means
// |v_L - v_{L-delta_l}| <= tol_series * max(|v_L|, 1); the normalized value
// makes the absolute branch meaningful at roots.
GEvaluation eval_G_adaptive(const ModelParams& params, const DerivedParams& derived,
                            Sector sector, const real& energy, const real& z,
                            const RunConfig& config);

// Unnormalized Bargmann eigenfunction samples on a real grid:
//   psi_1 = (phi_1 + phi_2)/2,  psi_2 = (phi_1 - phi_2)/2,
// with phi_j(z) = e^{-kappa z^2} sum C_n z^n (C = Q for phi_1, K for phi_2)
// both taken at the real argument.  `energy` should be a root for the
// samples to be meaningful (not enforced).  Rejects g = 0.
std::pair<std::vector<real>, std::vector<real>>
reconstruct_psi(const ModelParams& params, const DerivedParams& derived, Sector sector,
                const real& energy, const std::vector<real>& z_grid, int order = 200);

}  // namespace rabi2
