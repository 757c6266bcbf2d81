#include <iostream>
#include <string>
#include <vector>

#include "polarbd/cli_app.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return polarbd::cli::run(std::move(args), std::cout, std::cerr);
}
