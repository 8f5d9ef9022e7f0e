#include <iostream>

#include "lvasym/cli.hpp"

int main(int argc, char** argv) { return lvasym::cli::run(argc, argv, std::cout, std::cerr); }
