#include <iostream>

#include "ecp/commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ecp::cli::run_cli(args, std::cout, std::cerr);
}
