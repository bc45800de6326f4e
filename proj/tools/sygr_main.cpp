#include <iostream>

#include "sygr/cli.hpp"

int main(int argc, char** argv) { return sygr::cli::run(argc, argv, std::cout, std::cerr); }
