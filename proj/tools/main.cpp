#include "dremkit/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return dremkit::cli::run(argc, argv, std::cout, std::cerr); }
