#include <iostream>

#include "routegame/cli.hpp"

int main(int argc, char** argv) {
  return routegame::cli::main_entry(argc, argv, std::cout, std::cerr);
}
