#include <iostream>

#include "gazegram_cli/commands.hpp"

int main(int argc, char** argv) { return gazegram::cli::run(argc, argv, std::cout, std::cerr); }
