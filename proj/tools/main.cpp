#include <iostream>

#include "dftlab/cli.hpp"

int main(int argc, char** argv) { return dftlab::cli::run(argc, argv, std::cout, std::cerr); }
