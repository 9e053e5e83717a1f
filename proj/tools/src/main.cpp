#include <iostream>

#include "dcres_tools/cli.hpp"

int main(int argc, char** argv) { return dcres::tools::run_cli(argc, argv, std::cout, std::cerr); }
