#include <iostream>

#include "egtlab/runner/cli.hpp"

int main(int argc, char** argv) { return egt::runner::run_cli(argc, argv, std::cout, std::cerr); }
