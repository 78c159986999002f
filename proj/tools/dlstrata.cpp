#include <iostream>

#include "dlstrata/cli.hpp"

int main(int argc, char** argv) { return dls::run(argc, argv, std::cout, std::cerr); }
