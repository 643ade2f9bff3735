#pragma once

#include <stdexcept>
#include <string>

namespace asymgame {

// The operator family stops being a contraction near p = 0.7887; solver
// routines refuse to iterate past that point.
struct no_contraction_error : std::runtime_error {
  explicit no_contraction_error(const std::string& what) : std::runtime_error(what) {}
};

// Requested computation cannot reach the stated tolerance in the active
// arithmetic (e.g. deep preimage trees in float64).
struct precision_error : std::runtime_error {
  explicit precision_error(const std::string& what) : std::runtime_error(what) {}
};

// Series whose tail does not vanish (p = 1 ladder).
struct divergence_error : std::runtime_error {
  explicit divergence_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace asymgame
