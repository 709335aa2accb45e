#include <iostream>

#include "adahuber/cli.hpp"

int main(int argc, char** argv) { return adahuber::cli::run(argc, argv, std::cout, std::cerr); }
