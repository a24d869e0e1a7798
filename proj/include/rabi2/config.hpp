#pragma once

// Run-wide configuration shared by the spectrum solver and the CLI.

#include <stdexcept>
#include <string>
#include <vector>

namespace rabi2 {

enum class OutputFormat { csv, json };

struct RunConfig {
    unsigned precision_bits = 256;           // mantissa bits for `real`
    std::vector<double> z_points{100.0, 1000.0};  // evaluation points; scan uses the first,
                                                  // consistency checks use the rest,
                                                  // residuals are recorded at the largest
    double tol_root = 1e-10;                 // bisection bracket width (absolute in E)
    double tol_series = 1e-20;               // relative stability target for adaptive order
    int l_max = 200;                         // truncation order of the series
    int delta_l = 8;                         // adaptive-order step (two parity steps x 4)
    int scan_density = 200;                  // grid points per min(omega, omega*omega_big)
    double collapse_guard = 0.05;            // refuse scans with omega_big below this
    double residual_floor = 1e-12;           // tangential-root detector threshold
    double crossing_g_tol = 1e-6;            // bisection width in g for crossing events
    int jobs = 1;                            // parallel sweep workers
    bool extrapolate = false;                // best-effort Richardson step in 1/L on each
                                             // root; results are flagged non-certified
    OutputFormat output_format = OutputFormat::csv;

    // Throws std::invalid_argument on nonsensical settings (non-positive
    // tolerances, precision below 64 bits, empty/degenerate z list, ...).
    void validate() const;
};

}  // namespace rabi2
