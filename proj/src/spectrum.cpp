#include "rabi2/spectrum.hpp"

#include "rabi2/reference.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace rabi2 {

namespace {

int sgn(const real& v)
{
    if (v > 0) return 1;
    if (v < 0) return -1;
    return 0;
}

// Normalized G value at fixed order; evaluation failures carry the energy.
real g_value(const ModelParams& params, const DerivedParams& derived, Sector sector,
             const real& energy, const real& z, int order, const RunConfig& config)
{
    try {
        return eval_G(params, derived, sector, energy, z, order, config.tol_series).value;
    } catch (const GEvalError& e) {
        throw RootScanError(energy, std::string("G evaluation failed: ") + e.what());
    }
}

struct ScanContext {
    const ModelParams& params;
    const DerivedParams& derived;
    Sector sector;
    const RunConfig& config;
    real z_scan;
    real z_max;
    int order;

    real eval(const real& energy, const real& z) const
    {
        return g_value(params, derived, sector, energy, z, order, config);
    }
};

// Bisection to bracket width tol_root; endpoints keep opposite signs.
void bisect(const ScanContext& ctx, real& a, real& b, real& va, real& vb, const real& tol)
{
    while (b - a > tol) {
        const real m = (a + b) / 2;
        const real vm = ctx.eval(m, ctx.z_scan);
        if (vm == 0) {
            // dead-center hit: shrink symmetrically and re-anchor the signs
            a = m - tol / 4;
            b = m + tol / 4;
            va = ctx.eval(a, ctx.z_scan);
            vb = ctx.eval(b, ctx.z_scan);
            break;
        }
        if (sgn(vm) == sgn(va)) {
            a = m;
            va = vm;
        } else {
            b = m;
            vb = vm;
        }
    }
}

RootRecord make_record(const ScanContext& ctx, const real& a, const real& b, bool tangential)
{
    RootRecord r;
    r.sector = ctx.sector;
    r.energy = (a + b) / 2;
    r.bracket = {a, b};
    r.order_used = ctx.order;
    r.z_checked = ctx.config.z_points;
    r.residual = abs(ctx.eval(r.energy, ctx.z_max));
    r.tangential = tangential;
    return r;
}

// Best-effort Richardson step: re-locate the root at half order and combine
// assuming E(L) ~ E_inf + c/L.  Non-certified; the caller flags the record.
void extrapolate_record(const ScanContext& ctx, RootRecord& r, const real& tol)
{
    ScanContext half = ctx;
    half.order = std::max(8, ctx.order / 2);
    real a = r.bracket.first - 2 * tol, b = r.bracket.second + 2 * tol;
    real va = half.eval(a, half.z_scan), vb = half.eval(b, half.z_scan);
    if (sgn(va) == 0 || sgn(va) == sgn(vb))
        return;  // half-order bracket lost; keep the certified value
    bisect(half, a, b, va, vb, tol);
    r.energy = 2 * r.energy - (a + b) / 2;
    r.extrapolated = true;
}

// Ternary search for a local minimum of |G| (tangential-root candidates).
RootRecord refine_minimum(const ScanContext& ctx, real lo, real hi, const real& tol)
{
    while (hi - lo > tol) {
        const real m1 = lo + (hi - lo) / 3;
        const real m2 = hi - (hi - lo) / 3;
        if (abs(ctx.eval(m1, ctx.z_scan)) <= abs(ctx.eval(m2, ctx.z_scan)))
            hi = m2;
        else
            lo = m1;
    }
    return make_record(ctx, lo, hi, true);
}

real scan_step(const ModelParams& params, const DerivedParams& derived,
               const RunConfig& config)
{
    return std::min<real>(params.omega, params.omega * derived.omega_big) /
           config.scan_density;
}

}  // namespace

std::vector<RootRecord> find_roots(const ModelParams& params, Sector sector,
                                   const std::pair<real, real>& window,
                                   const RunConfig& config)
{
    config.validate();
    if (params.g == 0)
        throw std::domain_error("find_roots: g = 0 is served by the closed-form "
                                "reference spectra");
    if (!(window.first < window.second))
        throw std::invalid_argument("find_roots: window must satisfy E_min < E_max");

    const DerivedParams derived = derive(params);
    if (derived.omega_big < config.collapse_guard)
        throw CollapseGuardError(derived.omega_big, config.collapse_guard,
                                 "find_roots: omega_big = " + format_real(derived.omega_big, 6) +
                                     " is below the collapse guard " +
                                     std::to_string(config.collapse_guard) +
                                     "; refusing to scan this close to 4|g| = omega");

    ScanContext ctx{params, derived, sector, config, real(config.z_points.front()),
                    real(*std::max_element(config.z_points.begin(), config.z_points.end())),
                    config.l_max};

    // Uniform grid, step min(omega, omega*omega_big)/scan_density.
    const real de = scan_step(params, derived, config);
    const real width = window.second - window.first;
    const long n = std::max(4L, static_cast<long>(std::ceil((width / de).convert_to<double>())));
    std::vector<real> grid(static_cast<size_t>(n) + 1);
    std::vector<real> val(grid.size());
    for (long i = 0; i <= n; ++i) {
        grid[static_cast<size_t>(i)] = window.first + (width * i) / n;
        val[static_cast<size_t>(i)] = ctx.eval(grid[static_cast<size_t>(i)], ctx.z_scan);
    }

    const real tol(config.tol_root);
    std::vector<RootRecord> roots;

    for (long i = 0; i < n; ++i) {
        const size_t ui = static_cast<size_t>(i);
        real a = grid[ui], b = grid[ui + 1];
        real va = val[ui], vb = val[ui + 1];
        const int sa = sgn(va), sb = sgn(vb);

        if (sa == 0) {
            // exact grid hit: synthesize a minimal bracket around it
            if (i > 0)
                continue;  // handled as the right endpoint of the previous cell
            real lo = a - tol, hi = a + tol;
            real vlo = ctx.eval(lo, ctx.z_scan), vhi = ctx.eval(hi, ctx.z_scan);
            if (sgn(vlo) != 0 && sgn(vlo) == -sgn(vhi))
                roots.push_back(make_record(ctx, lo, hi, false));
            else
                roots.push_back(refine_minimum(ctx, lo, hi, tol));
            continue;
        }
        if (sb == 0) {
            // root sits on grid[i+1]: bracket it within this cell plus a nudge
            real lo = b - tol, hi = b + tol;
            real vlo = ctx.eval(lo, ctx.z_scan), vhi = ctx.eval(hi, ctx.z_scan);
            if (sgn(vlo) != 0 && sgn(vlo) == -sgn(vhi))
                roots.push_back(make_record(ctx, lo, hi, false));
            else
                roots.push_back(refine_minimum(ctx, lo, hi, tol));
            continue;
        }
        if (sa != sb) {
            bisect(ctx, a, b, va, vb, tol);
            // two-z consistency: the final bracket must show the same sign
            // change at every other configured z, pinning the alternate-z
            // root inside the same tol_root-wide bracket.
            bool consistent = true;
            for (size_t zi = 1; zi < config.z_points.size(); ++zi) {
                const real z(config.z_points[zi]);
                const real wa = ctx.eval(a, z), wb = ctx.eval(b, z);
                if (sgn(wa) == 0 || sgn(wa) != -sgn(wb)) {
                    consistent = false;
                    break;
                }
            }
            if (!consistent)
                throw RootScanError((a + b) / 2,
                                    "find_roots: two-z consistency failed for the root near E = " +
                                        format_real((a + b) / 2, 12) +
                                        " (sector " + sector_name(sector) + ")");
            RootRecord rec = make_record(ctx, a, b, false);
            if (config.extrapolate)
                extrapolate_record(ctx, rec, tol);
            roots.push_back(std::move(rec));
        }
    }

    // Tangential candidates: interior local minima of |G| below the residual
    // floor without an adjacent sign change.
    const real floor(config.residual_floor);
    for (long i = 1; i < n; ++i) {
        const size_t ui = static_cast<size_t>(i);
        if (sgn(val[ui]) == 0)
            continue;  // exact zeros handled above
        if (sgn(val[ui - 1]) != sgn(val[ui]) || sgn(val[ui]) != sgn(val[ui + 1]))
            continue;  // sign change already captured
        if (abs(val[ui]) < floor && abs(val[ui]) < abs(val[ui - 1]) &&
            abs(val[ui]) < abs(val[ui + 1])) {
            RootRecord r = refine_minimum(ctx, grid[ui - 1], grid[ui + 1], tol);
            if (r.residual < floor)
                roots.push_back(std::move(r));
        }
    }

    std::sort(roots.begin(), roots.end(),
              [](const RootRecord& x, const RootRecord& y) { return x.energy < y.energy; });

    // Deduplicate per sector (coincident refinements of the same root).
    std::vector<RootRecord> unique;
    for (auto& r : roots) {
        if (!unique.empty() && abs(r.energy - unique.back().energy) <= 2 * tol) {
            if (r.residual < unique.back().residual)
                unique.back() = std::move(r);
            continue;
        }
        unique.push_back(std::move(r));
    }
    for (size_t i = 0; i < unique.size(); ++i)
        unique[i].index = static_cast<int>(i) + 1;
    return unique;
}

SpectrumResult spectrum(const ModelParams& params, const std::pair<real, real>& window,
                        const RunConfig& config)
{
    SpectrumResult res;
    res.window = window;
    for (Sector s : all_sectors())
        res.per_sector[s] = find_roots(params, s, window, config);

    for (Sector s : all_sectors())
        for (const RootRecord& r : res.per_sector.at(s))
            res.merged.push_back({r.energy, s, r.index});
    std::stable_sort(res.merged.begin(), res.merged.end(),
                     [](const MergedEntry& x, const MergedEntry& y) {
                         if (x.energy != y.energy)
                             return x.energy < y.energy;
                         return static_cast<int>(x.sector) < static_cast<int>(y.sector);
                     });

    // The global ground state always belongs to the Minus sector.  Check it
    // whenever the window provably straddles the ground state (which lies
    // strictly below -omega0/2 for any g != 0).
    const real split = -params.omega0 / 2;
    if (!res.merged.empty() && window.first < split && window.second > split &&
        res.merged.front().energy < split) {
        // degenerate partners (exact at omega0 = 0) count as Minus
        bool minus_at_bottom = false;
        for (const auto& m : res.merged) {
            if (abs(m.energy - res.merged.front().energy) > 4 * real(config.tol_root))
                break;
            if (m.sector == Sector::Minus)
                minus_at_bottom = true;
        }
        if (!minus_at_bottom)
            res.warnings.push_back(
                "lowest root in a ground-state-straddling window belongs to sector " +
                std::string(sector_name(res.merged.front().sector)) + ", expected minus");
    }
    if (config.extrapolate) {
        bool any = false;
        for (const auto& [s, v] : res.per_sector)
            for (const auto& r : v)
                any = any || r.extrapolated;
        if (any)
            res.warnings.push_back(
                "energies carry a Richardson 1/L extrapolation step and are "
                "not certified by the bracketing checks");
    }
    return res;
}

// ------------------------------------------------------------------ sweeps

namespace {

// Monotone minimal-cost alignment of two sorted energy lists (within-sector
// level curves never cross, so matching preserves order).  Pairs farther
// apart than `threshold` stay unmatched.
std::vector<std::pair<int, int>> align_levels(const std::vector<real>& prev,
                                              const std::vector<real>& next,
                                              const real& threshold)
{
    const size_t n = prev.size(), m = next.size();
    const real inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<real>> cost(n + 1, std::vector<real>(m + 1, real(0)));
    for (size_t i = 0; i <= n; ++i)
        for (size_t j = 0; j <= m; ++j) {
            if (i == 0 && j == 0)
                continue;
            real best = inf;
            if (i > 0)
                best = std::min<real>(best, cost[i - 1][j] + threshold);
            if (j > 0)
                best = std::min<real>(best, cost[i][j - 1] + threshold);
            if (i > 0 && j > 0) {
                const real d = abs(prev[i - 1] - next[j - 1]);
                if (d <= threshold)
                    best = std::min<real>(best, cost[i - 1][j - 1] + d);
            }
            cost[i][j] = best;
        }
    std::vector<std::pair<int, int>> matches;
    size_t i = n, j = m;
    while (i > 0 || j > 0) {
        if (i > 0 && j > 0) {
            const real d = abs(prev[i - 1] - next[j - 1]);
            if (d <= threshold && cost[i][j] == cost[i - 1][j - 1] + d) {
                matches.emplace_back(static_cast<int>(i) - 1, static_cast<int>(j) - 1);
                --i;
                --j;
                continue;
            }
        }
        if (i > 0 && cost[i][j] == cost[i - 1][j] + threshold) {
            --i;
            continue;
        }
        --j;
    }
    std::reverse(matches.begin(), matches.end());
    return matches;
}

struct LocatedRoot {
    real energy;
    int index = 0;
};

// Root of `sector` nearest to `predicted`, searched in a window that widens
// on demand.
LocatedRoot locate_root(const ModelParams& params, Sector sector, const real& predicted,
                        real half_width, const RunConfig& config)
{
    for (int attempt = 0; attempt < 3; ++attempt) {
        const auto roots =
            find_roots(params, sector, {predicted - half_width, predicted + half_width}, config);
        if (!roots.empty()) {
            const RootRecord* best = &roots.front();
            for (const auto& r : roots)
                if (abs(r.energy - predicted) < abs(best->energy - predicted))
                    best = &r;
            return {best->energy, best->index};
        }
        half_width *= 2;
    }
    throw RootScanError(predicted, "sweep: lost track of a level near E = " +
                                       format_real(predicted, 12) + " (sector " +
                                       sector_name(sector) + ")");
}

struct CurveEndpoints {
    real g_lo, g_hi;
    real ea_lo, ea_hi;  // sector A energies at the endpoints
    real eb_lo, eb_hi;  // sector B energies
};

CrossingEvent refine_crossing(const ModelParams& base, Sector a, Sector b, CurveEndpoints e,
                              int index_a, int index_b, const RunConfig& config)
{
    const real gtol(config.crossing_g_tol);
    real d_lo = e.ea_lo - e.eb_lo;
    real ea_m = e.ea_hi, eb_m = e.eb_hi;
    while (e.g_hi - e.g_lo > gtol) {
        const real gm = (e.g_lo + e.g_hi) / 2;
        const real t = (gm - e.g_lo) / (e.g_hi - e.g_lo);
        const ModelParams pm(base.omega0, base.omega, gm);
        const DerivedParams dm = derive(pm);
        const real w = 10 * scan_step(pm, dm, config);
        const LocatedRoot ra =
            locate_root(pm, a, e.ea_lo + t * (e.ea_hi - e.ea_lo), w, config);
        const LocatedRoot rb =
            locate_root(pm, b, e.eb_lo + t * (e.eb_hi - e.eb_lo), w, config);
        ea_m = ra.energy;
        eb_m = rb.energy;
        const real dm_val = ea_m - eb_m;
        if (sgn(dm_val) == 0 || sgn(dm_val) != sgn(d_lo)) {
            e.g_hi = gm;
            e.ea_hi = ea_m;
            e.eb_hi = eb_m;
        } else {
            e.g_lo = gm;
            e.ea_lo = ea_m;
            e.eb_lo = eb_m;
            d_lo = dm_val;
        }
    }
    CrossingEvent ev;
    ev.g = (e.g_lo + e.g_hi) / 2;
    ev.energy = (ea_m + eb_m) / 2;
    ev.sector_a = a;
    ev.index_a = index_a;
    ev.sector_b = b;
    ev.index_b = index_b;
    return ev;
}

}  // namespace

SweepResult sweep(const ModelParams& params_base, const std::vector<real>& g_values,
                  const std::pair<real, real>& window, const RunConfig& config)
{
    config.validate();
    for (const real& g : g_values)
        if (!(4 * abs(g) < params_base.omega * (1 - config.collapse_guard)))
            throw CollapseGuardError(
                derive(ModelParams(params_base.omega0, params_base.omega, 0)).omega_big,
                config.collapse_guard,
                "sweep: g = " + format_real(g, 6) + " violates 4|g| < omega*(1 - guard)");

    SweepResult res;
    res.points.resize(g_values.size());

    // g = 0 points are served by the exact decoupled ladder so sweeps may
    // start at zero coupling.
    auto zero_point = [&]() {
        SpectrumResult sr;
        sr.window = window;
        const ModelParams p0(params_base.omega0, params_base.omega, 0);
        const double span =
            ((window.second + p0.omega0 / 2) / (2 * p0.omega)).convert_to<double>();
        const int count = std::max(2, static_cast<int>(std::ceil(span)) + 2);
        for (auto& [s, ladder] : reference_g0(p0, count)) {
            auto& out = sr.per_sector[s];
            for (const real& e : ladder) {
                if (e < window.first || e > window.second)
                    continue;
                RootRecord r;
                r.sector = s;
                r.index = static_cast<int>(out.size()) + 1;
                r.energy = e;
                r.residual = 0;
                r.order_used = 0;
                r.bracket = {e, e};
                out.push_back(std::move(r));
            }
            for (const RootRecord& r : out)
                sr.merged.push_back({r.energy, s, r.index});
        }
        std::stable_sort(sr.merged.begin(), sr.merged.end(),
                         [](const MergedEntry& x, const MergedEntry& y) {
                             if (x.energy != y.energy)
                                 return x.energy < y.energy;
                             return static_cast<int>(x.sector) < static_cast<int>(y.sector);
                         });
        return sr;
    };

    auto run_point = [&](size_t i) {
        SweepPoint pt;
        pt.g = g_values[i];
        try {
            if (g_values[i] == 0) {
                pt.result = zero_point();
            } else {
                const ModelParams p(params_base.omega0, params_base.omega, g_values[i]);
                pt.result = spectrum(p, window, config);
            }
        } catch (const std::exception& ex) {
            pt.error = ex.what();
        }
        return pt;
    };

    const size_t njobs = std::min<size_t>(std::max(config.jobs, 1), g_values.size());
    if (njobs <= 1) {
        for (size_t i = 0; i < g_values.size(); ++i)
            res.points[i] = run_point(i);
    } else {
        std::atomic<size_t> cursor{0};
        std::vector<std::thread> pool;
        pool.reserve(njobs);
        for (size_t t = 0; t < njobs; ++t)
            pool.emplace_back([&] {
                set_precision_bits(config.precision_bits);
                for (;;) {
                    const size_t i = cursor.fetch_add(1);
                    if (i >= g_values.size())
                        return;
                    res.points[i] = run_point(i);
                }
            });
        for (auto& th : pool)
            th.join();
    }

    // Curve tracking: per sector, align consecutive points' sorted roots.
    // Threshold: generous enough to follow level motion between sweep steps,
    // capped below half the local same-sector gap so levels cannot swap
    // (within a sector they never cross).
    int curve_id = 0;
    for (Sector s : all_sectors()) {
        std::vector<int> open;  // curve index in res.curves per root of prev point
        int prev_pt = -1;
        for (size_t i = 0; i < res.points.size(); ++i) {
            if (!res.points[i].result) {
                open.clear();
                prev_pt = -1;
                continue;
            }
            const auto& roots = res.points[i].result->per_sector.at(s);
            std::vector<real> energies;
            energies.reserve(roots.size());
            for (const auto& r : roots)
                energies.push_back(r.energy);

            std::vector<int> now(roots.size(), -1);
            if (prev_pt >= 0 && !open.empty() && !energies.empty()) {
                const auto& prev_roots = res.points[static_cast<size_t>(prev_pt)]
                                             .result->per_sector.at(s);
                std::vector<real> prev_e;
                prev_e.reserve(prev_roots.size());
                for (const auto& r : prev_roots)
                    prev_e.push_back(r.energy);

                const ModelParams pi(params_base.omega0, params_base.omega, g_values[i]);
                real threshold = 3 * scan_step(pi, derive(pi), config);
                real min_gap = -1;
                for (size_t k = 1; k < prev_e.size(); ++k) {
                    const real gap = prev_e[k] - prev_e[k - 1];
                    if (min_gap < 0 || gap < min_gap)
                        min_gap = gap;
                }
                if (min_gap > 0)
                    threshold = std::max<real>(threshold, real(0.4) * min_gap);
                else
                    threshold = std::max<real>(
                        threshold, real(0.5) * pi.omega * derive(pi).omega_big);

                for (const auto& [pi_idx, ni_idx] : align_levels(prev_e, energies, threshold))
                    now[static_cast<size_t>(ni_idx)] = open[static_cast<size_t>(pi_idx)];
            }
            for (size_t r = 0; r < roots.size(); ++r) {
                if (now[r] < 0) {
                    Curve c;
                    c.sector = s;
                    c.id = curve_id++;
                    now[r] = static_cast<int>(res.curves.size());
                    res.curves.push_back(std::move(c));
                }
                res.curves[static_cast<size_t>(now[r])].samples.push_back(
                    {static_cast<int>(i), static_cast<int>(r), roots[r].energy});
            }
            open = std::move(now);
            prev_pt = static_cast<int>(i);
        }
    }

    // Crossing events: sign change of E_a - E_b between adjacent sweep points
    // for curves from different sectors, refined by bisection in g.
    const real dead_band = 10 * real(config.tol_root);
    for (size_t ca = 0; ca < res.curves.size(); ++ca) {
        for (size_t cb = ca + 1; cb < res.curves.size(); ++cb) {
            const Curve& A = res.curves[ca];
            const Curve& B = res.curves[cb];
            if (A.sector == B.sector)
                continue;
            // index curve samples by sweep point
            size_t ia = 0, ib = 0;
            while (ia + 1 < A.samples.size() + 1 && ia < A.samples.size() && ib < B.samples.size()) {
                if (A.samples[ia].point < B.samples[ib].point) {
                    ++ia;
                    continue;
                }
                if (B.samples[ib].point < A.samples[ia].point) {
                    ++ib;
                    continue;
                }
                // aligned at the same sweep point; need the next point too
                if (ia + 1 < A.samples.size() && ib + 1 < B.samples.size() &&
                    A.samples[ia + 1].point == A.samples[ia].point + 1 &&
                    B.samples[ib + 1].point == B.samples[ib].point + 1 &&
                    A.samples[ia + 1].point == B.samples[ib + 1].point) {
                    const real d0 = A.samples[ia].energy - B.samples[ib].energy;
                    const real d1 = A.samples[ia + 1].energy - B.samples[ib + 1].energy;
                    if (abs(d0) > dead_band && abs(d1) > dead_band && sgn(d0) != sgn(d1)) {
                        CurveEndpoints e{g_values[static_cast<size_t>(A.samples[ia].point)],
                                         g_values[static_cast<size_t>(A.samples[ia + 1].point)],
                                         A.samples[ia].energy, A.samples[ia + 1].energy,
                                         B.samples[ib].energy, B.samples[ib + 1].energy};
                        const auto& roots_a = res.points[static_cast<size_t>(A.samples[ia].point)]
                                                  .result->per_sector.at(A.sector);
                        const auto& roots_b = res.points[static_cast<size_t>(B.samples[ib].point)]
                                                  .result->per_sector.at(B.sector);
                        res.crossings.push_back(refine_crossing(
                            params_base, A.sector, B.sector, e,
                            roots_a[static_cast<size_t>(A.samples[ia].root)].index,
                            roots_b[static_cast<size_t>(B.samples[ib].root)].index, config));
                    }
                }
                ++ia;
                ++ib;
            }
        }
    }
    std::sort(res.crossings.begin(), res.crossings.end(),
              [](const CrossingEvent& x, const CrossingEvent& y) {
                  if (x.g != y.g)
                      return x.g < y.g;
                  return x.energy < y.energy;
              });
    return res;
}

RootRecord ground_state(const ModelParams& params, const RunConfig& config)
{
    const DerivedParams derived = derive(params);
    const real top = -params.omega0 / 2 +
                     real(0.45) * std::min<real>(params.omega,
                                                 params.omega * derived.omega_big);
    real bottom = -params.omega0 / 2 - real(0.75) * params.omega;
    for (int attempt = 0; attempt < 8; ++attempt) {
        const auto roots = find_roots(params, Sector::Minus, {bottom, top}, config);
        if (!roots.empty()) {
            const RootRecord& lowest = roots.front();
            // suspiciously close to the bottom edge: widen and rescan to be
            // sure nothing sits below
            if (lowest.energy - bottom > real(0.1) * params.omega)
                return lowest;
        }
        bottom -= real(0.75) * params.omega;
    }
    throw RootScanError(bottom, "ground_state: no root found above E = " +
                                    format_real(bottom, 12));
}

}  // namespace rabi2
