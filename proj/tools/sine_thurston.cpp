#include <iostream>
#include <string>
#include <vector>

#include "sine_thurston/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sine_thurston::cli::dispatch(args, std::cout, std::cerr);
}
