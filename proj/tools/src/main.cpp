#include <iostream>

#include "sdlab_cli/commands.hpp"

int main(int argc, char** argv) { return sdlab::cli::run(argc, argv, std::cout, std::cerr); }
