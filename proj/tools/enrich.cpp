#include <iostream>

#include "enrich/cli.hpp"

int main(int argc, char** argv) { return enrich::run(argc, argv, std::cout, std::cerr); }
