#include <iostream>

#include "kbqe/cli.hpp"

int main(int argc, char** argv) { return kbqe::cli::main(argc, argv, std::cout, std::cerr); }
