#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include "rabi2/numeric.hpp"

int main(int argc, char** argv)
{
    rabi2::set_precision_bits(256);
    doctest::Context context;
    context.applyCommandLine(argc, argv);
    return context.run();
}
