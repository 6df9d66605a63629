#include <vector>

#include "qgse/cli.hpp"

int main(int argc, char** argv) {
  return qgse::cli_main(std::vector<std::string>(argv + 1, argv + argc));
}
