#pragma once

// Series coefficients Q_n(E), K_n(E) of the transformed sector functions.
//
// With phi = e^{-kappa z^2} psi-bar, the coupled sector ODEs turn into a
// single iteration over the Taylor coefficients of psi-bar_1 (the Q_n) and
// psi-bar_2 (the K_n):
//
//   Q_{n+2} = -[((w - 8 g k) n - 4 g k - E) Q_n + (w0/2) K_n] / (2 g (n+2)(n+1))
//   K_{n+2} = +[((w + 8 g k) n + 4 g k - E) K_n - 4 w k K_{n-2} + (w0/2) Q_n]
//             / (2 g (n+2)(n+1))
//
// (w = omega, w0 = omega0, k = kappa; K_{-2} = K_{-1} = 0.)  Each sector
// populates only one parity; off-parity entries are exact zeros.  Arrays
// store all indices 0..L including those zeros so the index arithmetic
// mirrors the recurrence literally.
//
// The same core runs in arbitrary-precision floating point (production) and
// in exact rational arithmetic (self-check oracles, termination tests).

#include "rabi2/model.hpp"
#include "rabi2/numeric.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace rabi2 {

template <class T>
struct BasicSeriesCoeffs {
    Sector sector;
    T energy;
    int order = 0;            // highest retained power of z
    std::vector<T> q;         // Q_0 .. Q_order
    std::vector<T> k;         // K_0 .. K_order
};

using SeriesCoeffs = BasicSeriesCoeffs<real>;
using RationalSeriesCoeffs = BasicSeriesCoeffs<rational>;

// Core iteration with explicit seeds; T is `real` or `rational`.
// Requires g != 0 (the iteration divides by 2g) and order >= start + 2.
template <class T>
BasicSeriesCoeffs<T> compute_coefficients_seeded(const T& omega0, const T& omega,
                                                 const T& g, const T& kappa,
                                                 Sector sector, const T& q_seed,
                                                 const T& k_seed, int start,
                                                 const T& energy, int order)
{
    if (g == 0)
        throw std::domain_error("series: recurrence is singular at g = 0; "
                                "use the closed-form reference spectra instead");
    if (start != 0 && start != 1)
        throw std::invalid_argument("series: start index must be 0 or 1");
    if (order < start + 2)
        throw std::invalid_argument("series: order must be at least start_index + 2");

    BasicSeriesCoeffs<T> out;
    out.sector = sector;
    out.energy = energy;
    out.order = order;
    out.q.assign(static_cast<size_t>(order) + 1, T(0));
    out.k.assign(static_cast<size_t>(order) + 1, T(0));
    out.q[static_cast<size_t>(start)] = q_seed;
    out.k[static_cast<size_t>(start)] = k_seed;

    const T cm = omega - 8 * g * kappa;   // multiplies n in the Q line
    const T cp = omega + 8 * g * kappa;   // multiplies n in the K line
    const T c0 = 4 * g * kappa;
    const T cb = 4 * omega * kappa;       // back-term weight on K_{n-2}
    const T half_w0 = omega0 / 2;

    for (int n = start; n + 2 <= order; n += 2) {
        const size_t un = static_cast<size_t>(n);
        const T denom = 2 * g * (n + 2) * (n + 1);
        const T qn = out.q[un];
        const T kn = out.k[un];
        const T kback = (n >= 2) ? out.k[un - 2] : T(0);
        out.q[un + 2] = -((cm * n - c0 - energy) * qn + half_w0 * kn) / denom;
        out.k[un + 2] = ((cp * n + c0 - energy) * kn - cb * kback + half_w0 * qn) / denom;
    }
    return out;
}

// Production entry point: sector seeds, arbitrary-precision floats.
SeriesCoeffs compute_coefficients(const ModelParams& params, const DerivedParams& derived,
                                  Sector sector, const real& energy, int order);

// Exact-rational parametrization.  kappa is taken as an exact rational and
// g = omega*kappa/(4 kappa^2 + 1), omega_big = (1 - 4 kappa^2)/(4 kappa^2 + 1)
// follow exactly (they satisfy 8 g kappa^2 - 2 omega kappa + 2 g = 0 and
// omega_big = 1 - 8 g kappa / omega by construction).  from_params() accepts
// a rational g directly when omega^2 - 16 g^2 is a rational perfect square.
struct RationalModel {
    rational omega0;
    rational omega;
    rational g;
    rational kappa;
    rational omega_big;

    RationalModel(const rational& omega0_, const rational& omega_, const rational& kappa_);
    static RationalModel from_params(const rational& omega0_, const rational& omega_,
                                     const rational& g_);
    // Ladder energy E_n = -omega/2 + (n + 1/2) omega_big * omega, exact.
    rational epsilon(int n) const;
};

RationalSeriesCoeffs compute_coefficients_rational(const RationalModel& model, Sector sector,
                                                   const rational& energy, int order);

// Consecutive same-parity ratios c_{n+2}/c_n for the Q and K arrays.
// Entries whose denominator is an exact zero or lies below the underflow
// floor 10^(-precision_bits/4) are omitted, with the index recorded.
struct RatioDiagnostic {
    struct Entry {
        int n;       // ratio = coeff[n+2] / coeff[n]
        real ratio;
    };
    std::vector<Entry> q_ratios;
    std::vector<Entry> k_ratios;
    std::vector<int> q_skipped;
    std::vector<int> k_skipped;
};

RatioDiagnostic coefficient_ratio_diagnostic(const SeriesCoeffs& coeffs);

// Least-squares fit of |ratio(n)| ~ n^(-p) over n in [n_min, n_max];
// returns the fitted exponent p (first for Q, second for K).  A healthy
// series has p near 1 (the 1/n decay required for an entire function).
std::pair<real, real> ratio_decay_exponent(const RatioDiagnostic& diag, int n_min, int n_max);

// omega0 = 0 self-check: the recurrence decouples and
// Q_{2k} = prod_{j<k}(E - eps_{2j}) / ((2g)^k (2k)!) with
// eps_n = -omega/2 + (n + 1/2) omega_big * omega.  Compares recurrence
// output against that product for k <= k_max and returns the largest
// relative error (termination rows compare against an absolute floor so
// exact zeros do not divide by zero).
real q_closed_form_check(const ModelParams& params, const DerivedParams& derived,
                         const real& energy, int k_max);

}  // namespace rabi2
