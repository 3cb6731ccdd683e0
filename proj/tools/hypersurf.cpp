#include <iostream>

#include "hypersurf/cli.hpp"

int main(int argc, char** argv) { return hypersurf::run_cli(argc, argv, std::cerr); }
