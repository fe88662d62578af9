#include <iostream>

#include "blochlab/cli.hpp"

int main(int argc, char** argv) {
    return blochlab::run_cli(argc, argv, std::cout, std::cerr);
}
