#include "zonoid/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return zonoid::cli::run(argc, argv, std::cout, std::cerr); }
