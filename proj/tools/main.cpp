#include "cli.hpp"

#include <exception>
#include <iostream>
#include <stdexcept>

// Exit codes: 0 success, 1 usage/config error, 2 runtime or IO failure.
int main(int argc, char** argv) {
  try {
    return drest::cli::run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
