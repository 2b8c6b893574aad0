#include <string>
#include <vector>

#include "advconf/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return advconf::run_cli(args);
}
