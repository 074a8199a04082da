#include "minflow/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return minflow::cli::run(argc, argv, std::cout, std::cerr); }
