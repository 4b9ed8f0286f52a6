#include "polymv/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return polymv::run_cli(argc, argv, std::cout, std::cerr); }
