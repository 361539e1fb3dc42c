#include <iostream>

#include "finslab_cli/commands.hpp"

int main(int argc, char** argv) { return finslab::cli::run_cli(argc, argv, std::cout, std::cerr); }
