#include "sqf/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return sqf::cli::main_entry(argc, argv, std::cout, std::cerr);
}
