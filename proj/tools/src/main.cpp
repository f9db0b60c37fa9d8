#include <iostream>

#include "oddsrank/cli/app.hpp"

int main(int argc, char** argv) {
  return oddsrank::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
