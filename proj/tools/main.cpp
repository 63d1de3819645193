#include "cli.hpp"

#include <iostream>

int main(int argc, char **argv) { return mils::cli::run(argc, argv, std::cout, std::cerr); }
