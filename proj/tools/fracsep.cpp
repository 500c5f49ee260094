#include <iostream>

#include "fracsep/cli.hpp"

int main(int argc, char** argv) { return fracsep::cli::main_entry(argc, argv, std::cout, std::cerr); }
