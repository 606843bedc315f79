#include <iostream>

#include "convoysim/cli.hpp"

int main(int argc, char** argv) {
  return convoysim::run_cli(argc, argv, std::cout, std::cerr);
}
