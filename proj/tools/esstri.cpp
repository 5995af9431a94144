#include <iostream>

#include "esstri/cli.hpp"

int main(int argc, char** argv) { return esstri::cli::run(argc, argv, std::cout, std::cerr); }
