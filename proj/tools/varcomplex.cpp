#include <iostream>

#include "varcomplex/cli.hpp"

int main(int argc, char** argv) { return varcomplex::cli::run_cli(argc, argv, std::cout, std::cerr); }
