#include <iostream>
#include <string>
#include <vector>

#include "asub/cli.hpp"

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    const std::vector<std::string> args(argv, argv + argc);
    return asub::cli::run(args, std::cin, std::cout, std::cerr);
}
