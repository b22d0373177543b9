#include "drbcbf/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return drbcbf::run_cli(argc, argv, std::cout, std::cerr); }
