#include "doctest.h"

#include "rabi2/model.hpp"

#include <stdexcept>

using namespace rabi2;

TEST_CASE("parameter validation enforces the normalizability bound")
{
    CHECK_NOTHROW(ModelParams(1, 1, 0.2499));
    CHECK_NOTHROW(ModelParams(0, 1, 0));
    CHECK_NOTHROW(ModelParams(-1, 2, -0.3));  // omega0 sign and g sign are free
    CHECK_THROWS_AS(ModelParams(1, 1, 0.25), std::domain_error);   // 4g = omega
    CHECK_THROWS_AS(ModelParams(1, 1, -0.25), std::domain_error);  // 4|g| = omega
    CHECK_THROWS_AS(ModelParams(1, 1, 0.3), std::domain_error);
    CHECK_THROWS_AS(ModelParams(1, 0, 0), std::domain_error);
    CHECK_THROWS_AS(ModelParams(1, -2, 0.1), std::domain_error);
}

TEST_CASE("derived quantities hit their exact rational values")
{
    // omega = 1, g = 1/5: omega^2 - 16 g^2 = 9/25, so kappa = 1/4, Omega = 3/5
    const DerivedParams d1 = derive(ModelParams(0, 1, real(1) / 5));
    CHECK(abs(d1.kappa - real(1) / 4) < 1e-70);
    CHECK(abs(d1.omega_big - real(3) / 5) < 1e-70);

    // omega = 2, g = 3/10: kappa = 1/6, Omega = 4/5
    const DerivedParams d2 = derive(ModelParams(1, 2, real(3) / 10));
    CHECK(abs(d2.kappa - real(1) / 6) < 1e-70);
    CHECK(abs(d2.omega_big - real(4) / 5) < 1e-70);
}

TEST_CASE("kappa is odd in g, omega_big even, with the right g -> 0 limit")
{
    const ModelParams plus(1, 2, 0.17), minus(1, 2, -0.17);
    CHECK(derive(plus).kappa == -derive(minus).kappa);
    CHECK(derive(plus).omega_big == derive(minus).omega_big);

    const DerivedParams at_zero = derive(ModelParams(1, 2, 0));
    CHECK(at_zero.kappa == 0);
    CHECK(at_zero.omega_big == 1);

    // kappa ~ g/omega for small g
    const real g = real(1) / 1000000;
    const DerivedParams small = derive(ModelParams(1, 2, g));
    CHECK(abs(small.kappa - g / 2) < 1e-18);
}

TEST_CASE("sector parity, seeds, and names are consistent")
{
    CHECK(all_sectors().size() == 4);

    CHECK(sector_parity(Sector::Plus) == Parity::Even);
    CHECK(sector_parity(Sector::Minus) == Parity::Even);
    CHECK(sector_parity(Sector::PlusI) == Parity::Odd);
    CHECK(sector_parity(Sector::MinusI) == Parity::Odd);

    const SectorSeeds sp = sector_seeds(Sector::Plus);
    CHECK(sp.q_seed == 1);
    CHECK(sp.k_seed == 1);
    CHECK(sp.start_index == 0);
    const SectorSeeds sm = sector_seeds(Sector::Minus);
    CHECK(sm.q_seed == 1);
    CHECK(sm.k_seed == -1);
    CHECK(sm.start_index == 0);
    const SectorSeeds spi = sector_seeds(Sector::PlusI);
    CHECK(spi.q_seed == 1);
    CHECK(spi.k_seed == 1);
    CHECK(spi.start_index == 1);
    const SectorSeeds smi = sector_seeds(Sector::MinusI);
    CHECK(smi.q_seed == 1);
    CHECK(smi.k_seed == -1);
    CHECK(smi.start_index == 1);

    for (Sector s : all_sectors())
        CHECK(parse_sector(sector_name(s)) == s);
    CHECK(parse_sector("+") == Sector::Plus);
    CHECK(parse_sector("-") == Sector::Minus);
    CHECK(parse_sector("i") == Sector::PlusI);
    CHECK(parse_sector("+i") == Sector::PlusI);
    CHECK(parse_sector("-i") == Sector::MinusI);
    CHECK_THROWS_AS(parse_sector("bogus"), std::invalid_argument);
}
