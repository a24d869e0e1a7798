// End-to-end acceptance suite: eight numbered criteria, each printing one
// PASS/FAIL line with a measured figure of merit.  Run without arguments to
// execute all eight, or pass a single number to run one.  Exit status is 0
// iff every selected criterion passed.
//
// Criterion 8 documents a known failure: the raw odd-chain coefficients
// K_n do not decay with the dressed-frame constant (omega*omega_big)/(2g)
// that governs Q_n — their true constant is omega/(2g).  The suite measures
// both halves against the dressed-frame constant and reports the K half red.

#include "rabi2/config.hpp"
#include "rabi2/model.hpp"
#include "rabi2/numeric.hpp"
#include "rabi2/reference.hpp"
#include "rabi2/series.hpp"
#include "rabi2/spectrum.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace rabi2;

namespace {

double dbl(const real& x) { return static_cast<double>(x); }

std::string sci(double x)
{
    std::ostringstream s;
    s << std::scientific << std::setprecision(2) << x;
    return s.str();
}

void report(int n, bool ok, const std::string& detail)
{
    std::cout << "criterion " << n << ": " << (ok ? "PASS" : "FAIL") << " - " << detail
              << std::endl;
}

// Fixed-seed uniform draw built from the top 53 bits of a mt19937_64 word;
// bit-identical on every platform, unlike uniform_real_distribution.
double u01(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

// ---------------------------------------------------------------- 1
// omega0 = 0: the lowest six roots (three doubly degenerate levels) must
// reproduce -1/2 + (n + 1/2) * omega_big to 1e-8 at four couplings, each
// point solved in under 30 seconds.
bool criterion1()
{
    RunConfig cfg;
    double worst = 0, slowest = 0;
    std::string failure;
    for (double gv : {0.05, 0.10, 0.15, 0.20}) {
        const auto t0 = std::chrono::steady_clock::now();
        const ModelParams p(0, 1, gv);
        const DerivedParams d = derive(p);
        const SpectrumResult s =
            spectrum(p, {real(-0.6), real(-0.5) + 3 * d.omega_big}, cfg);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        slowest = std::max(slowest, secs);
        if (secs >= 30.0)
            failure = "g=" + std::to_string(gv) + " took " + sci(secs) + " s";
        if (s.merged.size() != 6) {
            failure = "g=" + std::to_string(gv) + " found " +
                      std::to_string(s.merged.size()) + " roots, expected 6";
            continue;
        }
        for (int i = 0; i < 6; ++i) {
            const real target = real(-0.5) + (real(i / 2) + real(0.5)) * d.omega_big;
            worst = std::max(worst, dbl(abs(s.merged[static_cast<size_t>(i)].energy -
                                            target)));
        }
    }
    const bool ok = failure.empty() && worst <= 1e-8;
    report(1, ok,
           failure.empty() ? "max |E - closed form| = " + sci(worst) +
                                 " (tol 1e-08), slowest point " + sci(slowest) + " s"
                           : failure);
    return ok;
}

// ---------------------------------------------------------------- 2
// Near-decoupled coupling: each sector's two lowest roots sit on that
// sector's g = 0 ladder to 1e-4, with the assignment itself exact.
bool criterion2()
{
    RunConfig cfg;
    const ModelParams p(1, 2, 1e-3);
    const SpectrumResult s = spectrum(p, {real(-1), real(7)}, cfg);
    const std::map<Sector, std::array<double, 2>> ladder = {
        {Sector::Minus, {-0.5, 4.5}},
        {Sector::Plus, {0.5, 3.5}},
        {Sector::MinusI, {1.5, 6.5}},
        {Sector::PlusI, {2.5, 5.5}},
    };
    double worst = 0;
    std::string failure;
    for (const auto& [sector, expect] : ladder) {
        const auto& roots = s.per_sector.at(sector);
        if (roots.size() != 2) {
            failure = std::string(sector_name(sector)) + " sector has " +
                      std::to_string(roots.size()) + " roots, expected 2";
            break;
        }
        for (int i = 0; i < 2; ++i)
            worst = std::max(worst, dbl(abs(roots[static_cast<size_t>(i)].energy -
                                            real(expect[static_cast<size_t>(i)]))));
    }
    const bool ok = failure.empty() && worst <= 1e-4;
    report(2, ok,
           failure.empty()
               ? "max |E - ladder| = " + sci(worst) + " (tol 1e-04), assignment exact"
               : failure);
    return ok;
}

// ---------------------------------------------------------------- 3
// Sweep crossings against the closed-form degeneracy points: for two
// parameter sets, the N = 2 and N = 3 crossings must land within 1e-4 in
// both g and E, carried by the correct parity pair of sectors.
bool criterion3()
{
    RunConfig cfg;
    cfg.jobs = 2;
    double worst_g = 0, worst_e = 0;
    std::string failure;

    struct Case {
        double omega0, omega, g_lo, g_hi;
        int steps;
        double e_lo, e_hi;
    };
    const std::vector<Case> cases = {
        {1, 2, 0.29, 0.43, 8, 1.2, 5.2},
        {2, 1, 0.12, 0.20, 5, 0.9, 2.9},
    };

    for (const Case& c : cases) {
        std::vector<real> gs;
        for (int i = 0; i < c.steps; ++i)
            gs.push_back(real(c.g_lo) +
                         real(c.g_hi - c.g_lo) * i / std::max(1, c.steps - 1));
        const SweepResult sw = sweep(ModelParams(c.omega0, c.omega, gs.front()), gs,
                                     {real(c.e_lo), real(c.e_hi)}, cfg);
        for (int N : {2, 3}) {
            const auto targets = juddian_points(real(c.omega0), real(c.omega), N);
            for (const JuddianPoint& jp : targets) {
                if (dbl(jp.g) < c.g_lo || dbl(jp.g) > c.g_hi)
                    continue;  // outside the swept range
                const CrossingEvent* best = nullptr;
                double best_dg = 1e30;
                for (const CrossingEvent& ev : sw.crossings) {
                    const double dg = dbl(abs(ev.g - jp.g));
                    if (dg < best_dg) {
                        best_dg = dg;
                        best = &ev;
                    }
                }
                std::ostringstream tag;
                tag << "omega0=" << c.omega0 << " omega=" << c.omega << " N=" << N;
                if (!best) {
                    failure = tag.str() + ": no crossing detected";
                    continue;
                }
                const bool even_pair =
                    (best->sector_a == Sector::Plus && best->sector_b == Sector::Minus) ||
                    (best->sector_a == Sector::Minus && best->sector_b == Sector::Plus);
                const bool odd_pair =
                    (best->sector_a == Sector::PlusI && best->sector_b == Sector::MinusI) ||
                    (best->sector_a == Sector::MinusI && best->sector_b == Sector::PlusI);
                if ((N % 2 == 0 && !even_pair) || (N % 2 == 1 && !odd_pair))
                    failure = tag.str() + ": crossing carried by the wrong sector pair";
                worst_g = std::max(worst_g, best_dg);
                worst_e = std::max(worst_e, dbl(abs(best->energy - jp.energy)));
            }
        }
    }
    const bool ok = failure.empty() && worst_g <= 1e-4 && worst_e <= 1e-4;
    report(3, ok,
           failure.empty() ? "max |dg| = " + sci(worst_g) + ", max |dE| = " + sci(worst_e) +
                                 " (tol 1e-04 each), parity pairs correct"
                           : failure);
    return ok;
}

// ---------------------------------------------------------------- 4
// Weak-coupling ground state: a least-squares quadratic in u = g^2 over
// g/omega in {0.01 .. 0.04} must reproduce intercept -omega0/2 to 1e-6 and
// slope -8/(2*omega + omega0) to 1%.
bool criterion4()
{
    RunConfig cfg;
    double worst_a = 0, worst_b = 0;
    for (const auto& [w0v, wv] : std::vector<std::pair<double, double>>{
             {1, 2}, {2, 1}, {1, 1}}) {
        std::vector<real> us, es;
        for (double frac : {0.01, 0.02, 0.03, 0.04}) {
            const real g = real(frac) * real(wv);
            const RootRecord r = ground_state(ModelParams(w0v, wv, g), cfg);
            us.push_back(g * g);
            es.push_back(r.energy);
        }
        // normal equations for E ~ a + b u + c u^2, solved by Cramer's rule
        std::array<real, 5> S{};
        std::array<real, 3> T{};
        for (size_t i = 0; i < us.size(); ++i) {
            real up = 1;
            for (int k = 0; k < 5; ++k) {
                S[static_cast<size_t>(k)] += up;
                if (k < 3)
                    T[static_cast<size_t>(k)] += up * es[i];
                up *= us[i];
            }
        }
        using Mat = std::array<std::array<real, 3>, 3>;
        const Mat M = {{{S[0], S[1], S[2]}, {S[1], S[2], S[3]}, {S[2], S[3], S[4]}}};
        const auto det3 = [](const Mat& m) -> real {
            return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                   m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                   m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        };
        const real D = det3(M);
        Mat Ma = M, Mb = M;
        for (int r = 0; r < 3; ++r) {
            Ma[static_cast<size_t>(r)][0] = T[static_cast<size_t>(r)];
            Mb[static_cast<size_t>(r)][1] = T[static_cast<size_t>(r)];
        }
        const real a = det3(Ma) / D;
        const real b = det3(Mb) / D;
        const auto [a_ref, b_ref] = smallg_ground_state(ModelParams(w0v, wv, 0));
        worst_a = std::max(worst_a, dbl(abs(a - a_ref)));
        worst_b = std::max(worst_b, dbl(abs(b - b_ref) / abs(b_ref)));
    }
    const bool ok = worst_a <= 1e-6 && worst_b <= 0.01;
    report(4, ok,
           "max intercept dev = " + sci(worst_a) + " (tol 1e-06), max slope rel dev = " +
               sci(worst_b) + " (tol 1e-02)");
    return ok;
}

// ---------------------------------------------------------------- 5
// Randomized cross-validation: 20 fixed-seed parameter triples; the eight
// lowest roots must match a 400-quantum truncated diagonalization to 1e-6
// entrywise, and every root in the window must match some oracle level.
bool criterion5()
{
    RunConfig cfg;
    std::mt19937_64 rng(20260819ull);
    double worst = 0;
    int unmatched = 0;
    std::string failure;
    for (int t = 0; t < 20 && failure.empty(); ++t) {
        const double w = 0.5 + 2.5 * u01(rng);
        const double w0 = 3.0 * u01(rng);
        const double g = (0.1 + 0.7 * u01(rng)) * w / 4;
        const ModelParams p(w0, w, g);
        const OracleSpectrum o = oracle_diagonalize(p, 400, 12);
        const auto& ev = o.eigenvalues;

        size_t cut = 0;
        for (size_t j = 8; j < ev.size(); ++j)
            if (ev[j] - ev[j - 1] > 1e-3) {
                cut = j;
                break;
            }
        if (cut == 0) {
            failure = "no spectral gap above the eighth level";
            break;
        }
        const real bottom = real(ev[0]) - real(0.3) * real(w);
        const real top = real((ev[cut] + ev[cut - 1]) / 2);

        const SpectrumResult s = spectrum(p, {bottom, top}, cfg);
        if (s.merged.size() < 8) {
            std::ostringstream os;
            os << "triple " << t << " (omega0=" << w0 << ", omega=" << w << ", g=" << g
               << ") yielded only " << s.merged.size() << " roots";
            failure = os.str();
            break;
        }
        for (size_t i = 0; i < 8; ++i)
            worst = std::max(worst, dbl(abs(s.merged[i].energy - real(ev[i]))));
        for (const MergedEntry& m : s.merged) {
            double best = 1e30;
            for (double e : ev)
                best = std::min(best, dbl(abs(m.energy - real(e))));
            if (best > 1e-6)
                ++unmatched;
        }
    }
    const bool ok = failure.empty() && worst <= 1e-6 && unmatched == 0;
    report(5, ok,
           failure.empty() ? "20 triples: max |E - oracle| = " + sci(worst) +
                                 " (tol 1e-06), unmatched roots: " +
                                 std::to_string(unmatched)
                           : failure);
    return ok;
}

// ---------------------------------------------------------------- 6
// Robustness of every accepted root: moving the evaluation point from
// z = 100 to z = 1000 shifts no root by more than 1e-10, and halving the
// truncation order from 200 to 100 shifts none by more than 1e-8.
bool criterion6()
{
    struct Case {
        double omega0, omega, g, e_lo, e_hi;
    };
    const std::vector<Case> cases = {
        {1, 2, 1e-3, -1.0, 7.0},
        {0, 1, 0.2, -0.45, 2.0},
        {1, 2, 0.3, -1.2, 6.0},
    };
    double worst_z = 0, worst_l = 0;
    std::string failure;

    const auto compare = [&failure](const SpectrumResult& a, const SpectrumResult& b,
                                    double& worst) {
        for (const auto& [sector, ra] : a.per_sector) {
            const auto& rb = b.per_sector.at(sector);
            if (ra.size() != rb.size()) {
                failure = std::string(sector_name(sector)) + ": root count changed (" +
                          std::to_string(ra.size()) + " vs " + std::to_string(rb.size()) +
                          ")";
                return;
            }
            for (size_t i = 0; i < ra.size(); ++i)
                worst = std::max(worst, dbl(abs(ra[i].energy - rb[i].energy)));
        }
    };

    for (const Case& c : cases) {
        const ModelParams p(c.omega0, c.omega, c.g);
        const std::pair<real, real> window(real(c.e_lo), real(c.e_hi));

        RunConfig near_cfg, far_cfg;
        near_cfg.z_points = {100.0};
        far_cfg.z_points = {1000.0};
        compare(spectrum(p, window, near_cfg), spectrum(p, window, far_cfg), worst_z);
        if (!failure.empty())
            break;

        RunConfig full_cfg, half_cfg;
        half_cfg.l_max = 100;
        compare(spectrum(p, window, full_cfg), spectrum(p, window, half_cfg), worst_l);
        if (!failure.empty())
            break;
    }
    const bool ok = failure.empty() && worst_z <= 1e-10 && worst_l <= 1e-8;
    report(6, ok,
           failure.empty() ? "max z-shift = " + sci(worst_z) +
                                 " (tol 1e-10), max order-halving shift = " + sci(worst_l) +
                                 " (tol 1e-08)"
                           : failure);
    return ok;
}

// ---------------------------------------------------------------- 7
// Structural exactness: across 1000 fixed-seed draws the off-parity
// coefficients are exactly zero and the seeds exact; and at omega0 = 0 with
// E on the closed-form ladder, the even chain terminates identically in
// rational arithmetic.
bool criterion7()
{
    std::mt19937_64 rng(7ull);
    long checked = 0;
    std::string failure;
    for (int t = 0; t < 1000 && failure.empty(); ++t) {
        const double w = 0.5 + 2.5 * u01(rng);
        const double w0 = 3.0 * u01(rng);
        const double g = (0.1 + 0.7 * u01(rng)) * w / 4;
        const real E = real(-2) + real(10) * real(u01(rng));
        const Sector sector = all_sectors()[static_cast<size_t>(rng() % 4)];
        const ModelParams p(w0, w, g);
        const SeriesCoeffs c = compute_coefficients(p, derive(p), sector, E, 24);
        const SectorSeeds seeds = sector_seeds(sector);
        if (c.q[static_cast<size_t>(seeds.start_index)] != real(seeds.q_seed) ||
            c.k[static_cast<size_t>(seeds.start_index)] != real(seeds.k_seed)) {
            failure = "seed not exact at draw " + std::to_string(t);
            break;
        }
        for (int n = 0; n <= c.order; ++n) {
            const bool on_chain =
                n >= seeds.start_index && (n - seeds.start_index) % 2 == 0;
            if (!on_chain) {
                if (c.q[static_cast<size_t>(n)] != 0 || c.k[static_cast<size_t>(n)] != 0) {
                    failure = "off-parity coefficient nonzero at draw " + std::to_string(t);
                    break;
                }
                ++checked;
            }
        }
    }

    long terminated = 0;
    if (failure.empty()) {
        const std::vector<rational> kappas = {rational(1, 4), rational(1, 6),
                                              rational(1, 10), rational(3, 14),
                                              rational(2, 9)};
        const std::vector<rational> omegas = {rational(1), rational(2), rational(3, 2)};
        for (const rational& kp : kappas)
            for (const rational& wv : omegas)
                for (int n : {0, 2, 4, 6, 8})
                    for (Sector sector : {Sector::Plus, Sector::Minus}) {
                        const RationalModel m(rational(0), wv, kp);
                        const rational E = m.epsilon(n);
                        const auto c =
                            compute_coefficients_rational(m, sector, E, n + 32);
                        if (c.q[static_cast<size_t>(n)] == 0)
                            failure = "chain vanished before the ladder index";
                        for (int j = n + 2; j <= c.order; j += 2)
                            if (c.q[static_cast<size_t>(j)] != 0)
                                failure = "chain failed to terminate past the ladder index";
                        ++terminated;
                    }
    }
    const bool ok = failure.empty();
    report(7, ok,
           ok ? std::to_string(checked) + " off-parity zeros exact over 1000 draws; " +
                    std::to_string(terminated) + " rational ladder terminations exact"
              : failure);
    return ok;
}

// ---------------------------------------------------------------- 8
// Coefficient decay constants at omega0 = 0, omega = 1, g = 0.2, E = -2:
// both |Q_{2k+2}/Q_{2k}| and |K_{2k+2}/K_{2k}| are required to track
// 1.5/(2k) within 5% for k in [15, 40].  The Q half passes.  The K half
// fails by design: the raw K chain decays with constant omega/(2g) = 2.5,
// not (omega*omega_big)/(2g) = 1.5 — only the Gaussian-dressed combinations
// sum_j (-2*kappa)^j/j! * K_{n-2j} decay with 1.5.  The measured deviation
// (~67%) is reported rather than hidden.
bool criterion8()
{
    const ModelParams p(0, 1, 0.2);
    const SeriesCoeffs c = compute_coefficients(p, derive(p), Sector::Plus, real(-2), 120);
    double qdev = 0, kdev = 0;
    for (int k = 15; k <= 40; ++k) {
        const real target = real(1.5) / (2 * k);
        const real qr = abs(c.q[static_cast<size_t>(2 * k + 2)] /
                            c.q[static_cast<size_t>(2 * k)]);
        const real kr = abs(c.k[static_cast<size_t>(2 * k + 2)] /
                            c.k[static_cast<size_t>(2 * k)]);
        qdev = std::max(qdev, dbl(abs(qr - target) / target));
        kdev = std::max(kdev, dbl(abs(kr - target) / target));
    }
    const bool ok = qdev <= 0.05 && kdev <= 0.05;
    report(8, ok,
           "Q ratios vs 1.5/(2k): max rel dev " + sci(qdev) + " (" +
               (qdev <= 0.05 ? "pass" : "fail") + "); K ratios vs 1.5/(2k): max rel dev " +
               sci(kdev) + " (" + (kdev <= 0.05 ? "pass" : "fail") +
               ", raw K decays with constant 2.5, not 1.5)");
    return ok;
}

}  // namespace

int main(int argc, char** argv)
{
    set_precision_bits(256);
    bool (*const table[8])() = {criterion1, criterion2, criterion3, criterion4,
                                criterion5, criterion6, criterion7, criterion8};
    std::vector<int> selected;
    if (argc > 1) {
        const int k = std::atoi(argv[1]);
        if (k < 1 || k > 8) {
            std::cerr << "usage: acceptance [1-8]\n";
            return 2;
        }
        selected.push_back(k);
    } else {
        for (int k = 1; k <= 8; ++k)
            selected.push_back(k);
    }
    bool all_ok = true;
    for (int k : selected) {
        try {
            all_ok = table[static_cast<size_t>(k - 1)]() && all_ok;
        } catch (const std::exception& e) {
            report(k, false, std::string("exception: ") + e.what());
            all_ok = false;
        }
    }
    return all_ok ? 0 : 1;
}
