// Minimal stand-in for an external partial MaxSAT solver: reads a WCNF file
// and prints the standard "o"/"s"/"v" result lines.

#include <fstream>
#include <iostream>
#include <sstream>

#include "wrc/satcount.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: maxsat_stub file.wcnf\n";
    return 1;
  }
  std::ifstream in(argv[1]);
  std::stringstream text;
  text << in.rdbuf();
  std::cout << wrc::solve_wcnf_internal(wrc::parse_wcnf(text.str()));
  return 0;
}
