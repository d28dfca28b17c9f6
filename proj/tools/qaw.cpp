#include <iostream>

#include "qaw/cli.hpp"

int main(int argc, char** argv) { return qaw::run_cli(argc, argv, std::cout, std::cerr); }
