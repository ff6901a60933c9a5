#include <iostream>

#include "potopt_cli/app.hpp"

int main(int argc, char** argv) { return potopt::cli::run_app(argc, argv, std::cout, std::cerr); }
