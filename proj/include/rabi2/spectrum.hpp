#pragma once

// Root finding over energy windows, spectrum assembly, coupling sweeps with
// crossing detection, and the global ground state.
//
// Roots are located by scanning G(E) on a uniform grid (step
// min(omega, omega*omega_big)/scan_density — the level spacing shrinks like
// omega_big near collapse), bisecting every sign change to tol_root, and
// demanding that the final bracket shows the same sign change at every other
// configured z point (two-z consistency: the alternate-z root then lies
// inside the same bracket, bounding the z-shift by tol_root).  Bisection is
// used instead of secant/Brent for guaranteed bracket maintenance.

#include "rabi2/config.hpp"
#include "rabi2/errors.hpp"
#include "rabi2/gfunction.hpp"
#include "rabi2/model.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rabi2 {

struct RootRecord {
    Sector sector;
    int index = 0;            // 1 = lowest in sector
    real energy;
    real residual;            // |G| (normalized) at the root, largest z
    int order_used = 0;
    std::vector<double> z_checked;
    std::pair<real, real> bracket;  // final bisection bracket (width <= tol_root)
    bool tangential = false;  // located as a |G| minimum, not a sign change
    bool extrapolated = false;  // Richardson 1/L estimate; non-certified
};

struct MergedEntry {
    real energy;
    Sector sector;
    int index = 0;  // index within its sector
};

struct SpectrumResult {
    std::map<Sector, std::vector<RootRecord>> per_sector;
    std::vector<MergedEntry> merged;          // globally sorted
    std::pair<real, real> window;
    std::vector<std::string> warnings;        // e.g. ground-state sector anomaly
};

// All roots of one sector's G-function inside [window.first, window.second].
// Throws CollapseGuardError when omega_big < config.collapse_guard and
// RootScanError (with the grid energy attached) when an evaluation fails.
std::vector<RootRecord> find_roots(const ModelParams& params, Sector sector,
                                   const std::pair<real, real>& window,
                                   const RunConfig& config);

// Union over all four sectors, merged and sorted.  When the window provably
// straddles the ground state (E_min < -omega0/2 < E_max and the lowest root
// lies below -omega0/2), the lowest entry is checked to belong to the Minus
// sector; a violation is recorded as a warning.
SpectrumResult spectrum(const ModelParams& params, const std::pair<real, real>& window,
                        const RunConfig& config);

// One point of a sweep, or its failure diagnostic.
struct SweepPoint {
    real g;
    std::optional<SpectrumResult> result;
    std::string error;  // nonempty iff result is absent
};

// Curve label: per-sector root continuation across sweep points by
// nearest-energy matching (jump threshold 3x the scan step).
struct CurveSample {
    int point = 0;    // index into SweepResult::points
    int root = 0;     // index into that point's per-sector array
    real energy;
};

struct Curve {
    Sector sector;
    int id = 0;
    std::vector<CurveSample> samples;
};

// Inter-sector level crossing, refined by bisection in g.
struct CrossingEvent {
    real g;
    real energy;
    Sector sector_a;
    int index_a = 0;  // per-sector root index at the crossing
    Sector sector_b;
    int index_b = 0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::vector<Curve> curves;
    std::vector<CrossingEvent> crossings;
};

// Spectra for each g in g_values (base params supply omega0/omega), with
// curve tracking and crossing detection.  Per-point failures are recorded
// and the sweep continues.  Points run in parallel when config.jobs > 1;
// assembly is deterministic regardless of completion order.
SweepResult sweep(const ModelParams& params_base, const std::vector<real>& g_values,
                  const std::pair<real, real>& window, const RunConfig& config);

// Lowest root of the Minus sector (always the global ground state), located
// by expanding the search window downward from -omega0/2 until bracketed.
RootRecord ground_state(const ModelParams& params, const RunConfig& config);

}  // namespace rabi2
