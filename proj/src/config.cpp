#include "rabi2/config.hpp"

#include <cmath>
#include <set>

namespace rabi2 {

void RunConfig::validate() const
{
    if (precision_bits < 64)
        throw std::invalid_argument("config: precision_bits must be at least 64");
    if (!(tol_root > 0))
        throw std::invalid_argument("config: tol_root must be positive");
    if (!(tol_series > 0))
        throw std::invalid_argument("config: tol_series must be positive");
    if (l_max < 8)
        throw std::invalid_argument("config: l_max must be at least 8");
    if (delta_l < 1)
        throw std::invalid_argument("config: delta_l must be positive");
    if (scan_density < 2)
        throw std::invalid_argument("config: scan_density must be at least 2");
    if (!(collapse_guard > 0) || !(collapse_guard < 1))
        throw std::invalid_argument("config: collapse_guard must lie in (0, 1)");
    if (!(residual_floor > 0))
        throw std::invalid_argument("config: residual_floor must be positive");
    if (!(crossing_g_tol > 0))
        throw std::invalid_argument("config: crossing_g_tol must be positive");
    if (jobs < 1)
        throw std::invalid_argument("config: jobs must be positive");
    if (z_points.empty())
        throw std::invalid_argument("config: z_points must be nonempty");
    std::set<double> distinct;
    for (double z : z_points) {
        if (!(z > 0) || !std::isfinite(z))
            throw std::invalid_argument("config: z_points must be positive and finite");
        if (!distinct.insert(z).second)
            throw std::invalid_argument("config: z_points must be distinct");
    }
}

}  // namespace rabi2
