#include "rabi2/reference.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rabi2 {

// --------------------------------------------------------------- oracle
//
// Truncated Fock-basis diagonalization, double precision throughout and
// independent of the series machinery.  Basis |n> x |s>, s in {down, up},
// row index 2n + s.  The spin ladder convention here carries no 1/2, so the
// photon-pair coupling enters as 2g*sqrt((n+1)(n+2)).

OracleSpectrum oracle_diagonalize(const ModelParams& params, int n_max, int low_count)
{
    if (n_max < 8)
        throw std::invalid_argument("oracle_diagonalize: n_max must be at least 8");
    if (low_count < 1)
        throw std::invalid_argument("oracle_diagonalize: low_count must be positive");

    const double w0 = params.omega0.convert_to<double>();
    const double w = params.omega.convert_to<double>();
    const double g = params.g.convert_to<double>();

    auto build = [&](int cut) {
        const int dim = 2 * (cut + 1);
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
        for (int n = 0; n <= cut; ++n) {
            h(2 * n, 2 * n) = w * n - w0 / 2;
            h(2 * n + 1, 2 * n + 1) = w * n + w0 / 2;
        }
        for (int n = 0; n + 2 <= cut; ++n) {
            const double c = 2.0 * g * std::sqrt(double(n + 1) * double(n + 2));
            // (b^dag)^2 + b^2 flips the spin in this ladder convention
            h(2 * n + 1, 2 * (n + 2)) = c;
            h(2 * (n + 2), 2 * n + 1) = c;
            h(2 * n, 2 * (n + 2) + 1) = c;
            h(2 * (n + 2) + 1, 2 * n) = c;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("oracle_diagonalize: eigensolver failed");
        return solver.eigenvalues();
    };

    const auto full = build(n_max);
    const auto half = build(n_max / 2);

    OracleSpectrum out;
    out.n_max = n_max;
    out.eigenvalues.assign(full.data(), full.data() + full.size());

    const int probe = std::min<int>(low_count, static_cast<int>(half.size()));
    double worst = 0;
    for (int i = 0; i < probe; ++i)
        worst = std::max(worst, std::abs(full(i) - half(i)));
    out.cutoff_error_estimate = worst;
    return out;
}

// ------------------------------------------------------- closed-form limits

std::map<Sector, std::vector<real>> reference_g0(const ModelParams& params, int count)
{
    if (count < 1)
        throw std::invalid_argument("reference_g0: count must be positive");
    if (params.g != 0)
        throw std::domain_error("reference_g0: coupling must vanish");
    const real w0 = params.omega0, w = params.omega;
    std::map<Sector, std::vector<real>> out;
    // At g = 0 the sector ladders interleave +/- omega0/2 on even (Plus,
    // Minus) and odd (PlusI, MinusI) photon rungs.
    for (int k = 0; k < count; ++k) {
        const int sign = (k % 2 == 0) ? -1 : 1;  // Minus ladder alternates -,+,-,...
        out[Sector::Minus].push_back(sign * w0 / 2 + 2 * k * w);
        out[Sector::Plus].push_back(-sign * w0 / 2 + 2 * k * w);
        out[Sector::MinusI].push_back(sign * w0 / 2 + (2 * k + 1) * w);
        out[Sector::PlusI].push_back(-sign * w0 / 2 + (2 * k + 1) * w);
    }
    // ladder order is not energy order once omega0 > 2*omega
    for (auto& [s, v] : out)
        std::sort(v.begin(), v.end());
    return out;
}

std::vector<real> reference_omega0_zero(const ModelParams& params, int count)
{
    if (count < 1)
        throw std::invalid_argument("reference_omega0_zero: count must be positive");
    if (params.omega0 != 0)
        throw std::domain_error("reference_omega0_zero: omega0 must vanish");
    const DerivedParams d = derive(params);
    std::vector<real> out;
    out.reserve(2 * static_cast<size_t>(count));
    // E_n = -omega/2 + (n + 1/2) * omega_big * omega, each doubly degenerate,
    // so every level appears twice.
    for (int n = 0; n < count; ++n) {
        const real e =
            -params.omega / 2 + (real(2 * n + 1) / 2) * d.omega_big * params.omega;
        out.push_back(e);
        out.push_back(e);
    }
    return out;
}

std::vector<JuddianPoint> juddian_points(const real& omega0, const real& omega, int n)
{
    if (omega0 < 0 || omega <= 0)
        throw std::invalid_argument(
            "juddian_points: omega0 must be nonnegative and omega positive");
    const real r = (omega0 * omega0) / (4 * omega * omega);

    // Candidate squared omega_big values where the level pair (n-2, n)
    // becomes exactly degenerate; closed forms per ladder order.
    std::vector<real> ob2;
    if (n == 2) {
        ob2.push_back((2 + r) / 6);
    } else if (n == 3) {
        ob2.push_back((6 + r) / 10);
    } else if (n == 4) {
        // 280 x^2 - (240 + 34 r) x + (24 + 14 r + r^2) = 0 in x = omega_big^2
        const real a = 280, b = -(240 + 34 * r), c = 24 + 14 * r + r * r;
        const real disc = b * b - 4 * a * c;
        if (disc > 1e-30) {
            const real sq = sqrt(disc);
            ob2.push_back((-b + sq) / (2 * a));
            ob2.push_back((-b - sq) / (2 * a));
        } else if (disc > -1e-30) {
            ob2.push_back(-b / (2 * a));
        }
    } else {
        throw std::invalid_argument("juddian_points: closed forms cover orders 2..4");
    }

    std::vector<JuddianPoint> pts;
    for (const real& x : ob2) {
        if (!(x > 0) || !(x < 1))
            continue;  // outside the physical coupling range
        JuddianPoint p;
        p.N = n;
        p.omega_big = sqrt(x);
        p.g = (omega / 4) * sqrt(1 - x);
        p.energy = -omega / 2 + (real(2 * n + 1) / 2) * p.omega_big * omega;
        pts.push_back(std::move(p));
    }
    std::sort(pts.begin(), pts.end(),
              [](const JuddianPoint& a, const JuddianPoint& b) { return a.g < b.g; });
    return pts;
}

std::pair<real, real> smallg_ground_state(const ModelParams& params)
{
    return {-params.omega0 / 2, real(-8) / (2 * params.omega + params.omega0)};
}

}  // namespace rabi2
