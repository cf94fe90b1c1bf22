#pragma once

#include "runsec/spec_io.hpp"

#include <string>
#include <vector>

namespace runsec {

// Spec documents for the named systems, each with an expect block.
//   EX1, EX2, EX3, NONMEASURABLE
//   COSMIC n eps        n words, cosmic-ray probability eps ("1/10")
//   XOR k               binary XOR channel with k steps
//   GS-XOR k            probabilistic protocols over the XOR channel
//   L_O_ONCE m          at most one l_o, never after a high input; m events per class
//   SHUFFLE-PRODUCT a b all interleavings of low words of length a and high words of length b
//   SEP-GAP n           finite form of the separability limit counterexample
Json fixture(const std::string& name, const std::vector<std::string>& params = {});
const std::vector<std::string>& fixture_names();

} // namespace runsec
