#include "fracop/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return fracop::cli::main(argc, argv, std::cout, std::cerr); }
