#pragma once

// Command-line front end. Exit codes:
//   0  success (certified value at or below the threshold)
//   1  certified but above the threshold, or no crossover
//   2  inadmissible parameters, malformed input or bad flags
//   3  precision exhausted
//   4  a lemma or oracle check failed
//   5  numerical failure (non-convergence, internal invariant)

#include <ostream>

namespace subweyl::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace subweyl::cli
