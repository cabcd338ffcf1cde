#include <iostream>
#include <string>
#include <vector>

#include "volrelax_cli/commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return volrelax::cli::run(args, std::cout, std::cerr);
}
