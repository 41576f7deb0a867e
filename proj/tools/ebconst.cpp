#include <iostream>

#include "ebconst/verifier.hpp"

int main(int argc, char** argv) { return ebconst::run_cli(argc, argv, std::cout, std::cerr); }
