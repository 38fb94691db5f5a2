#include <iostream>

#include "doa/cli/cli.hpp"

int main(int argc, char** argv) {
  return doa::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
