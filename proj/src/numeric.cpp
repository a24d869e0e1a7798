#include "rabi2/numeric.hpp"

#include <sstream>

namespace rabi2 {

namespace {
thread_local unsigned g_precision_bits = 0;
}

void set_precision_bits(unsigned bits)
{
    if (bits < 2)
        throw std::invalid_argument("set_precision_bits: need at least 2 bits");
    // The boost frontend takes decimal digits; round up so the mantissa
    // carries at least the requested bits.
    const auto digits10 = static_cast<unsigned>(std::ceil(bits * 0.30102999566398120));
    real::default_precision(digits10);
    g_precision_bits = bits;
}

unsigned get_precision_bits()
{
    if (g_precision_bits == 0)
        set_precision_bits(256);
    return g_precision_bits;
}

std::string format_real(const real& x, int digits)
{
    std::ostringstream os;
    os << std::scientific;
    os.precision(digits - 1);  // scientific: one digit before the point
    os << x;
    return os.str();
}

}  // namespace rabi2
