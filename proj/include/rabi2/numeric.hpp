#pragma once

// Arbitrary-precision scalar types used throughout the solver.
//
// The working real type is an MPFR-backed float whose precision is set at
// runtime (default 256 bits of mantissa).  Series coefficients multiply z^n
// with z up to ~10^3 and n up to ~200, far beyond double's dynamic range,
// so everything downstream of the model layer computes in `real`.
// An exact rational type backs the termination/self-check oracles.

#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <string>

namespace rabi2 {

using real = boost::multiprecision::mpfr_float;
using rational = boost::multiprecision::mpq_rational;
using bigint = boost::multiprecision::mpz_int;

// Precision control.  The MPFR default precision is thread-local: worker
// threads must call set_precision_bits() on entry before touching `real`.
void set_precision_bits(unsigned bits);
unsigned get_precision_bits();

inline bool is_finite(const real& x)
{
    return boost::math::isfinite(x);
}

// Deterministic decimal rendering at `digits` significant digits
// (scientific form), used for all machine-readable output.
std::string format_real(const real& x, int digits = 15);

}  // namespace rabi2
