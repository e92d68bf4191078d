#include <iostream>

#include "rimwalk/cli.hpp"

int main(int argc, char** argv) { return rimwalk::cli::run(argc, argv, std::cout, std::cerr); }
