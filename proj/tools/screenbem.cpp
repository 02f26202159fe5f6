#include "screenbem/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return screenbem::run_cli(argc, argv, std::cout, std::cerr); }
