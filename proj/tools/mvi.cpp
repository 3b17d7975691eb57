#include <iostream>

#include "mvi_cli.hpp"

int main(int argc, char** argv) { return mvi::cli::run(argc, argv, std::cout, std::cerr); }
