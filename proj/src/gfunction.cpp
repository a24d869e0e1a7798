#include "rabi2/gfunction.hpp"

#include <algorithm>

namespace rabi2 {

namespace {

// Sign in front of the phi_1 half: G = [K-part] + phi1_sign * [Q-part].
int phi1_sign(Sector s)
{
    switch (s) {
        case Sector::Plus: return -1;    // G_+  = phi_2(iz) - phi_1
        case Sector::Minus: return 1;    // G_-  = phi_2(iz) + phi_1
        case Sector::PlusI: return 1;    // G_i  = i phi_2(iz) + phi_1
        case Sector::MinusI: return -1;  // G_-i = i phi_2(iz) - phi_1
    }
    throw std::logic_error("phi1_sign: bad sector");
}

// i-power reduction sign on the K term of order n (parity-pure):
// even n: (-1)^{n/2}; odd n: (-1)^{(n+1)/2}.
int k_term_sign(int n)
{
    const int h = (n % 2 == 0) ? n / 2 : (n + 1) / 2;
    return (h % 2 == 0) ? 1 : -1;
}

struct Accumulated {
    real signed_sum;  // pref_K * S_K + s * pref_Q * S_Q
    real abs_sum;     // pref_K * A_K + pref_Q * A_Q  (strictly positive)
};

// Walks the coefficient arrays once, recording running sums at each ladder
// checkpoint (orders listed ascending in `checkpoints`).
std::vector<Accumulated> accumulate_ladder(const SeriesCoeffs& coeffs, const real& z,
                                           const real& kappa, int sign_q,
                                           const std::vector<int>& checkpoints)
{
    const real z2 = z * z;
    const real pref_k = exp(kappa * z2);
    const real pref_q = 1 / pref_k;
    if (!is_finite(pref_k) || pref_k == 0)
        throw GEvalError(-1, "eval_G: Gaussian prefactor overflowed at kappa*z^2 = " +
                                 format_real(kappa * z2, 6));

    real s_q = 0, s_k = 0, a_q = 0, a_k = 0;
    real zpow = 1;
    std::vector<Accumulated> out;
    out.reserve(checkpoints.size());
    size_t next = 0;
    const int start = sector_seeds(coeffs.sector).start_index;
    if (start == 1)
        zpow = z;

    for (int n = start; n <= coeffs.order; n += 2) {
        const size_t un = static_cast<size_t>(n);
        const real tq = coeffs.q[un] * zpow;
        const real tk = coeffs.k[un] * zpow;
        s_q += tq;
        a_q += abs(tq);
        if (k_term_sign(n) > 0)
            s_k += tk;
        else
            s_k -= tk;
        a_k += abs(tk);
        if (!is_finite(s_q) || !is_finite(s_k))
            throw GEvalError(n, "eval_G: non-finite partial sum at term " + std::to_string(n));
        while (next < checkpoints.size() && n + 2 > checkpoints[next]) {
            out.push_back({pref_k * s_k + sign_q * pref_q * s_q,
                           pref_k * a_k + pref_q * a_q});
            ++next;
        }
        zpow *= z2;
    }
    while (next < checkpoints.size()) {
        out.push_back({pref_k * s_k + sign_q * pref_q * s_q,
                       pref_k * a_k + pref_q * a_q});
        ++next;
    }
    return out;
}

real normalized(const Accumulated& acc)
{
    // abs_sum >= |seed term| * pref > 0 always
    return acc.signed_sum / acc.abs_sum;
}

void check_inputs(const real& z, int order)
{
    if (!(z > 0))
        throw std::invalid_argument("eval_G: z must be positive");
    if (order < 4)
        throw std::invalid_argument("eval_G: order must be at least 4");
}

}  // namespace

GEvaluation eval_G(const ModelParams& params, const DerivedParams& derived, Sector sector,
                   const real& energy, const real& z, int order, double tol_series)
{
    check_inputs(z, order);
    const SeriesCoeffs coeffs = compute_coefficients(params, derived, sector, energy, order);
    const std::vector<int> checkpoints{order / 2, order};
    const auto acc = accumulate_ladder(coeffs, z, derived.kappa, phi1_sign(sector), checkpoints);

    GEvaluation ev;
    ev.sector = sector;
    ev.energy = energy;
    ev.z = z;
    ev.order = order;
    ev.value = normalized(acc.back());
    const real v_half = normalized(acc.front());
    ev.converged = abs(ev.value - v_half) <= tol_series * std::max<real>(abs(ev.value), 1);
    return ev;
}

GEvaluation eval_G_adaptive(const ModelParams& params, const DerivedParams& derived,
                            Sector sector, const real& energy, const real& z,
                            const RunConfig& config)
{
    check_inputs(z, config.l_max);
    const int start = sector_seeds(sector).start_index;
    const SeriesCoeffs coeffs =
        compute_coefficients(params, derived, sector, energy, config.l_max);

    std::vector<int> checkpoints;
    for (int L = start + config.delta_l; L < config.l_max; L += config.delta_l)
        checkpoints.push_back(L);
    checkpoints.push_back(config.l_max);

    const auto acc = accumulate_ladder(coeffs, z, derived.kappa, phi1_sign(sector), checkpoints);

    GEvaluation ev;
    ev.sector = sector;
    ev.energy = energy;
    ev.z = z;
    for (size_t i = 1; i < acc.size(); ++i) {
        const real v_prev = normalized(acc[i - 1]);
        const real v = normalized(acc[i]);
        if (abs(v - v_prev) <= config.tol_series * std::max<real>(abs(v), 1)) {
            ev.order = checkpoints[i];
            ev.value = v;
            ev.converged = true;
            return ev;
        }
    }
    ev.order = config.l_max;
    ev.value = normalized(acc.back());
    ev.converged = false;
    return ev;
}

std::pair<std::vector<real>, std::vector<real>>
reconstruct_psi(const ModelParams& params, const DerivedParams& derived, Sector sector,
                const real& energy, const std::vector<real>& z_grid, int order)
{
    if (params.g == 0)
        throw std::domain_error("reconstruct_psi: g = 0 is served by the closed-form "
                                "reference spectra, not the series");
    const SeriesCoeffs coeffs = compute_coefficients(params, derived, sector, energy, order);
    const int start = sector_seeds(sector).start_index;

    std::vector<real> psi1, psi2;
    psi1.reserve(z_grid.size());
    psi2.reserve(z_grid.size());
    for (const real& z : z_grid) {
        real s_q = 0, s_k = 0;
        real zpow = (start == 1) ? z : real(1);
        const real z2 = z * z;
        for (int n = start; n <= order; n += 2) {
            const size_t un = static_cast<size_t>(n);
            s_q += coeffs.q[un] * zpow;
            s_k += coeffs.k[un] * zpow;
            zpow *= z2;
        }
        const real pref = exp(-derived.kappa * z2);
        const real phi1 = pref * s_q;
        const real phi2 = pref * s_k;
        if (!is_finite(phi1) || !is_finite(phi2))
            throw GEvalError(order, "reconstruct_psi: non-finite value at z = " +
                                        format_real(z, 6));
        psi1.push_back((phi1 + phi2) / 2);
        psi2.push_back((phi1 - phi2) / 2);
    }
    return {std::move(psi1), std::move(psi2)};
}

}  // namespace rabi2
