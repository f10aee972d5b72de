#include <iostream>

#include "kontact/cli.hpp"

int main(int argc, char** argv) { return kontact::run_cli(argc, argv, std::cout, std::cerr); }
