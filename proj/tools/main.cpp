#include <iostream>

#include "triosc/cli.hpp"

int main(int argc, char** argv) {
    return triosc::run_cli(argc, argv, std::cout, std::cerr);
}
