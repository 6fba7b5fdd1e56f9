#include <iostream>

#include "fsibem/cli.hpp"

int main(int argc, char** argv) { return fsibem::cli::run(argc, argv, std::cout, std::cerr); }
