#include <iostream>

#include "fluidruin/cli.hpp"

int main(int argc, char** argv) { return fluidruin::run_cli(argc, argv, std::cout, std::cerr); }
