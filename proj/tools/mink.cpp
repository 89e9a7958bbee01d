#include "mink/commands.hpp"

#include <iostream>

int main(int argc, char **argv) { return mink::run_cli(argc, argv, std::cout, std::cerr); }
