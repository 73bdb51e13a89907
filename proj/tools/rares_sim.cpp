#include <iostream>

#include "rares/cli.hpp"

int main(int argc, char** argv) { return rares::cli::main(argc, argv, std::cout, std::cerr); }
