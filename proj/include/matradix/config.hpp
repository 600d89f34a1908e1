#pragma once

// JSON system descriptions:
//   {"A": [[1,-2],[2,1]], "digits": [[0,0],[3,0]], "dual_digits": [...],
//    "transpose": true}
// The radix base is A^T unless "transpose" is false.

#include <string>
#include <vector>

#include "matradix/exact_linalg.hpp"
#include "matradix/radix_system.hpp"

namespace matradix {

struct SystemConfig {
  std::string name;
  IntMatrix a;
  std::vector<IntVector> digits;
  std::vector<IntVector> dual_digits;
  bool transpose = true;
  // optional cycle words in the `;` digit grammar, for the codec and solenoid
  std::vector<std::string> cycles;

  IntMatrix base() const { return transpose ? a.transpose() : a; }
  /// Throws the validation errors of RadixSystem.
  RadixSystem system() const;
};

/// Throws ParseError for malformed JSON and InvalidConfig for shape errors.
SystemConfig parse_config(const std::string& json_text);
SystemConfig load_config(const std::string& path);

/// {"denom": q, "basis": [[...], ...]} with the HNF basis given row by row.
std::string lattice_to_json(const Lattice& lattice);

}  // namespace matradix
