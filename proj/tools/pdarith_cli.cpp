#include <iostream>

#include "pdarith/cli.hpp"

int main(int argc, char** argv) { return pdarith::cli::run(argc, argv, std::cout, std::cerr); }
