#include <iostream>

#include "proxygrade/cli.hpp"

int main(int argc, char** argv) {
  return proxygrade::run_cli(argc, argv, std::cout, std::cerr);
}
