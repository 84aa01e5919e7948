#include <iostream>

#include "locrec/cli.hpp"

int main(int argc, char** argv) {
  try {
    const auto config = locrec::cli::parse_command_line(argc, argv);
    if (!config) return 0;
    return locrec::cli::run(*config, std::cout, std::cerr);
  } catch (const locrec::cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
