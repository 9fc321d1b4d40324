#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cogbasic/assets.hpp"
#include "cogbasic/parser.hpp"

namespace cogbasic::testing {

inline Program reference_program() { return parse_program(assets::conflict_resolution_program()); }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}


}  // namespace cogbasic::testing
