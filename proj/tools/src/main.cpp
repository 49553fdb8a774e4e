#include <iostream>

#include "sidelink/cli/commands.hpp"

int main(int argc, char** argv) {
  return sidelink::cli::run_cli(argc, argv, std::cout, std::cerr);
}
