#pragma once

#include "qmono/types.hpp"

#include <map>
#include <string>
#include <variant>

namespace qmono::cli {

using Meta = std::map<std::string, std::string>;
using StateObject = std::variant<PureState, DensityMatrix>;

// JSON file layout:
//   kind: "pure" | "density"
//   dims: [d_0, d_1, ...]
//   data: [[re, im], ...]   amplitude order (pure) / row-major (density)
//   meta: { string: string }   optional
// Numbers are written with shortest round-trip decimals, so save followed by
// load reproduces every entry bit-exactly.
//
// load_state throws ParseError with a "path:line:" prefix on malformed JSON or
// a structural mismatch, and InvariantViolation naming the violated invariant
// ("norm", "trace", "hermiticity", "positivity", "dims") on bad content.
StateObject load_state(const std::string& path);

void save_state(const PureState& psi, const std::string& path, const Meta& meta = {});
void save_state(const DensityMatrix& rho, const std::string& path, const Meta& meta = {});
void save_state(const StateObject& obj, const std::string& path, const Meta& meta = {});

}  // namespace qmono::cli
