#include <iostream>

#include "coinlab/cli.hpp"

int main(int argc, char** argv) { return coinlab::cli::run_cli(argc, argv, std::cout, std::cerr); }
