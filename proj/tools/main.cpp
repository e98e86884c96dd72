#include <iostream>

#include "f2f/expt/cli.hpp"

int main(int argc, char** argv) { return f2f::expt::run_cli(argc, argv, std::cout, std::cerr); }
