#include <iostream>

#include "wpgibbs/cli.hpp"

int main(int argc, char** argv) { return wpgibbs::cli::run(argc, argv, std::cout, std::cerr); }
