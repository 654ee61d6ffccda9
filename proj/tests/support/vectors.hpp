#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pufzk/common/bytes.hpp"

namespace pufzk::testing {

struct Vector {
  std::string kind;
  Bytes input;
  Bytes output;
};

// Reads `kind input_hex output_hex` lines; '#' starts a comment line.
inline std::vector<Vector> load_vectors(const std::string& file, const std::string& kind = {}) {
  std::ifstream in(std::string(PUFZK_VECTOR_DIR) + "/" + file);
  if (!in) throw std::runtime_error("missing vector file " + file);
  std::vector<Vector> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string k, a, b;
    fields >> k >> a >> b;
    if (!kind.empty() && k != kind) continue;
    out.push_back({k, from_hex(a == "-" ? "" : a), from_hex(b)});
  }
  return out;
}

}  // namespace pufzk::testing
