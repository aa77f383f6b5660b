#include "covprop/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return covprop::cli_main({argv + 1, argv + argc}, std::cout, std::cerr);
}
