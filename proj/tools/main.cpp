#include <iostream>

#include "cantorwalk/cli.hpp"

int main(int argc, char** argv) { return cantorwalk::run_cli(argc, argv, std::cout, std::cerr); }
