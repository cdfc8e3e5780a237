#include <iostream>

#include "thetagauss/cli.hpp"

int main(int argc, char** argv) { return thetagauss::cli::main(argc, argv, std::cout); }
