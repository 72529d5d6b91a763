#include <iostream>

#include "ermm/cli.hpp"

int main(int argc, char** argv) { return ermm::cli::run(argc, argv, std::cout, std::cerr); }
