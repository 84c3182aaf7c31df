#include <iostream>
#include <string>
#include <vector>

#include "yuancert/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return yuancert::cli::run(args, std::cout, std::cerr);
}
