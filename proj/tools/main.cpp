#include "rankr/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return rankr::run_cli(argc, argv, std::cout, std::cerr); }
