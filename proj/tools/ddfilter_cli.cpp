// ddfilter - command-line front end.
#include <iostream>

#include "ddf/cli.hpp"

int main(int argc, char** argv) { return ddf::run_cli(argc, argv, std::cout, std::cerr); }
