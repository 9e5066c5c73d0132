#include <iostream>

#include "temgrid/cli.hpp"

int main(int argc, char** argv) { return temgrid::cli::main(argc, argv, std::cout, std::cerr); }
