#include <vector>

#include "westervelt/cli.hpp"

int main(int argc, char** argv) {
  return westervelt::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
