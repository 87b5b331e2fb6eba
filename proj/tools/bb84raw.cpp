#include "bb84/commands.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return bb84::cli::run(argc, argv, std::cout, std::cerr);
}
