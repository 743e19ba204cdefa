#include <iostream>

#include "qlnls/cli.hpp"

int main(int argc, char** argv) { return qlnls::cli::run(argc, argv, std::cout, std::cerr); }
