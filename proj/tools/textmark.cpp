#include <iostream>

#include "textmark/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return textmark::run_cli(argc, argv, std::cin, std::cout, std::cerr);
}
