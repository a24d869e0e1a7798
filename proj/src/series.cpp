#include "rabi2/series.hpp"

#include <algorithm>
#include <cmath>

namespace rabi2 {

SeriesCoeffs compute_coefficients(const ModelParams& params, const DerivedParams& derived,
                                  Sector sector, const real& energy, int order)
{
    const SectorSeeds seeds = sector_seeds(sector);
    return compute_coefficients_seeded<real>(params.omega0, params.omega, params.g,
                                             derived.kappa, sector, real(seeds.q_seed),
                                             real(seeds.k_seed), seeds.start_index, energy,
                                             order);
}

// ---------------------------------------------------------------- rational

RationalModel::RationalModel(const rational& omega0_, const rational& omega_,
                             const rational& kappa_)
    : omega0(omega0_), omega(omega_), kappa(kappa_)
{
    if (!(omega > 0))
        throw std::domain_error("RationalModel: omega must be positive");
    const rational denom = 4 * kappa * kappa + 1;
    g = omega * kappa / denom;
    omega_big = (1 - 4 * kappa * kappa) / denom;
    if (!(omega_big > 0))
        throw std::domain_error("RationalModel: |kappa| must be below 1/2 "
                                "(4|g| < omega fails otherwise)");
}

RationalModel RationalModel::from_params(const rational& omega0_, const rational& omega_,
                                         const rational& g_)
{
    if (g_ == 0)
        throw std::domain_error("RationalModel: g must be nonzero");
    // kappa = (omega - sqrt(omega^2 - 16 g^2)) / (8 g) is rational iff the
    // radicand p/q has p*q a perfect square.
    const rational rad = omega_ * omega_ - 16 * g_ * g_;
    if (!(rad > 0))
        throw std::domain_error("RationalModel: 4|g| < omega violated");
    const bigint num = numerator(rad), den = denominator(rad);
    const bigint prod = num * den;
    const bigint root = sqrt(prod);
    if (root * root != prod)
        throw std::domain_error("RationalModel: omega^2 - 16 g^2 is not a rational square; "
                                "construct from a rational kappa instead");
    const rational sq(root, den);  // sqrt(rad) = sqrt(num*den)/den
    RationalModel m(omega0_, omega_, (omega_ - sq) / (8 * g_));
    return m;
}

rational RationalModel::epsilon(int n) const
{
    return -omega / 2 + rational(2 * n + 1, 2) * omega_big * omega;
}

RationalSeriesCoeffs compute_coefficients_rational(const RationalModel& model, Sector sector,
                                                   const rational& energy, int order)
{
    const SectorSeeds seeds = sector_seeds(sector);
    return compute_coefficients_seeded<rational>(model.omega0, model.omega, model.g,
                                                 model.kappa, sector, rational(seeds.q_seed),
                                                 rational(seeds.k_seed), seeds.start_index,
                                                 energy, order);
}

// -------------------------------------------------------------- diagnostics

RatioDiagnostic coefficient_ratio_diagnostic(const SeriesCoeffs& coeffs)
{
    const SectorSeeds seeds = sector_seeds(coeffs.sector);
    if (coeffs.order < seeds.start_index + 8)
        throw std::invalid_argument("coefficient_ratio_diagnostic: order too small");

    const real floor = pow(real(10), -static_cast<int>(get_precision_bits() / 4));

    RatioDiagnostic diag;
    auto scan = [&](const std::vector<real>& c, std::vector<RatioDiagnostic::Entry>& out,
                    std::vector<int>& skipped) {
        for (int n = seeds.start_index; n + 2 <= coeffs.order; n += 2) {
            const real& lo = c[static_cast<size_t>(n)];
            if (lo == 0 || abs(lo) < floor) {
                skipped.push_back(n);
                continue;
            }
            out.push_back({n, c[static_cast<size_t>(n) + 2] / lo});
        }
    };
    scan(coeffs.q, diag.q_ratios, diag.q_skipped);
    scan(coeffs.k, diag.k_ratios, diag.k_skipped);
    return diag;
}

std::pair<real, real> ratio_decay_exponent(const RatioDiagnostic& diag, int n_min, int n_max)
{
    auto fit = [&](const std::vector<RatioDiagnostic::Entry>& entries) -> real {
        // least squares on log|ratio| = c - p log n
        real sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (const auto& e : entries) {
            if (e.n < n_min || e.n > n_max || e.ratio == 0)
                continue;
            const real x = log(real(e.n));
            const real y = log(abs(e.ratio));
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++m;
        }
        if (m < 3)
            throw std::invalid_argument("ratio_decay_exponent: fewer than 3 usable ratios");
        const real slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        return -slope;
    };
    return {fit(diag.q_ratios), fit(diag.k_ratios)};
}

real q_closed_form_check(const ModelParams& params, const DerivedParams& derived,
                         const real& energy, int k_max)
{
    if (params.omega0 != 0)
        throw std::domain_error("q_closed_form_check: requires omega0 = 0");
    if (k_max < 1)
        throw std::invalid_argument("q_closed_form_check: k_max must be >= 1");

    const int order = 2 * k_max;
    const SeriesCoeffs coeffs =
        compute_coefficients(params, derived, Sector::Plus, energy, std::max(order, 4));

    // closed[k] = prod_{j<k}(E - eps_{2j}) / ((2g)^k (2k)!)
    std::vector<real> closed(static_cast<size_t>(k_max) + 1);
    closed[0] = 1;
    real prod = 1, fact = 1, gpow = 1;
    real scale = 1;  // max |closed_k|, for the absolute floor
    for (int k = 1; k <= k_max; ++k) {
        const int n = 2 * (k - 1);
        const real eps = -params.omega / 2 +
                         (real(2 * n + 1) / 2) * derived.omega_big * params.omega;
        prod *= energy - eps;
        fact *= real(2 * k) * real(2 * k - 1);
        gpow *= 2 * params.g;
        closed[static_cast<size_t>(k)] = prod / (gpow * fact);
        scale = std::max<real>(scale, abs(closed[static_cast<size_t>(k)]));
    }

    const real floor = scale * pow(real(10), -50);
    real max_rel = 0;
    for (int k = 0; k <= k_max; ++k) {
        const real& c = closed[static_cast<size_t>(k)];
        const real& r = coeffs.q[static_cast<size_t>(2 * k)];
        const real err = abs(r - c) / std::max<real>(abs(c), floor);
        max_rel = std::max<real>(max_rel, err);
    }
    return max_rel;
}

}  // namespace rabi2
