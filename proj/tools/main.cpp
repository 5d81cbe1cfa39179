#include <iostream>

#include "acipmaps/cli.hpp"

int main(int argc, char** argv) { return acipmaps::cli::main(argc, argv, std::cout, std::cerr); }
