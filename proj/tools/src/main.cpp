#include <iostream>

#include "symcube_cli/commands.hpp"

int main(int argc, char** argv) { return symcube::cli::run(argc, argv, std::cout, std::cerr); }
