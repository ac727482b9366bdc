#include "segscore/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    const bool color = std::getenv("SEGSCORE_NO_COLOR") == nullptr && isatty(STDOUT_FILENO) != 0;
    return segscore::cli::run(args, std::cout, std::cerr, color);
}
