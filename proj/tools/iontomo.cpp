#include <iostream>

#include "iontomo/cli/commands.hpp"

int main(int argc, char** argv)
{
    return iontomo::cli::run(argc, argv, std::cout, std::cerr);
}
