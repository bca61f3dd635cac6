#include <iostream>

#include "confclust_cli/commands.hpp"

int main(int argc, char** argv) { return confclust::cli::run(argc, argv, std::cout, std::cerr); }
