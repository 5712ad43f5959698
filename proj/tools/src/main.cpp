#include <iostream>

#include "flagcount_cli/commands.hpp"

int main(int argc, char** argv) {
  return flagcount::cli::run_cli(argc, argv, std::cout, std::cerr);
}
