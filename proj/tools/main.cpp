#include <iostream>

#include "qrst/cli.hpp"

int main(int argc, char** argv) { return qrst::cli::run(argc, argv, std::cout, std::cerr); }
