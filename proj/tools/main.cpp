#include "nehari/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return nehari::cli::run_cli(argc, argv, std::cout, std::cerr); }
