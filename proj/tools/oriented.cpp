#include <iostream>

#include "oriented/cli.hpp"

int main(int argc, char** argv) { return oriented::cli::run(argc, argv, std::cout, std::cerr); }
