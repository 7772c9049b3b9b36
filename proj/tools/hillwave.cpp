#include <iostream>

#include "hillwave/cli.hpp"

int main(int argc, char** argv) { return hillwave::run(argc, argv, std::cout, std::cerr); }
