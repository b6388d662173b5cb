#include <iostream>

#include "minsurf/cli.hpp"

int main(int argc, char** argv) { return minsurf::cli::run(argc, argv, std::cout, std::cerr); }
