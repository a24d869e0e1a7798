#include "rabi2/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return rabi2::run_cli(argc, argv, std::cout, std::cerr);
}
