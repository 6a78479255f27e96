#include <iostream>

#include "mdhv/cli.hpp"

int main(int argc, char** argv) { return mdhv::cli::run(argc, argv, std::cout, std::cerr); }
