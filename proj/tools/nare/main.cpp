#include <iostream>

#include "nare/cli.hpp"

int main(int argc, char** argv) { return nare::cli::run_cli(argc, argv, std::cout, std::cerr); }
