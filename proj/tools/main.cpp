#include <iostream>

#include "cogbasic/cli.hpp"

int main(int argc, char** argv) { return cogbasic::run_cli(argc, argv, std::cin, std::cout, std::cerr); }
