#include <iostream>

#include "subweyl/cli.hpp"

int main(int argc, char** argv) { return subweyl::cli::run(argc, argv, std::cout, std::cerr); }
