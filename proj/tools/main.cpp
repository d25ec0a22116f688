#include <iostream>

#include "multmodel/cli.hpp"

int main(int argc, char** argv) {
  return multmodel::run_cli(argc, argv, std::cout, std::cerr);
}
