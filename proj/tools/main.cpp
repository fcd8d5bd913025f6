#include <iostream>

#include "cryomux/cli.hpp"

int main(int argc, char** argv) {
  return cryomux::cli::run_cli(argc, argv, std::cout, std::cerr);
}
