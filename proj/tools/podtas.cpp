#include <string>
#include <vector>

#include "podtas/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return podtas::cli::run_cli(args);
}
