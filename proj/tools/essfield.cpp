#include <iostream>

#include <essfield/cli.hpp>

int main(int argc, char** argv) { return essfield::cli::run(argc, argv, std::cout, std::cerr); }
