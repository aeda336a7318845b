#include <iostream>

#include "crysl/cli/cli.hpp"

int main(int argc, char** argv) {
  return crysl::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
