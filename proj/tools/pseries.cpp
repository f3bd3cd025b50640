#include <iostream>

#include "poincare/cli.hpp"

int main(int argc, char** argv) { return poincare::cli::main(argc, argv, std::cout, std::cerr); }
