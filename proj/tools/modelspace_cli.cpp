#include <iostream>

#include "modelspace/cli.hpp"

int main(int argc, char** argv) { return modelspace::cli::run(argc, argv, std::cout, std::cerr); }
