#pragma once

#include <string_view>

namespace phylokit {

// Fixed nucleotide order A, C, G, T.
inline constexpr std::string_view kNucleotides = "ACGT";

// 0..3 for A, C, G, T (either case), -1 otherwise.
constexpr int nucleotide_index(char c) {
  switch (c) {
    case 'A': case 'a': return 0;
    case 'C': case 'c': return 1;
    case 'G': case 'g': return 2;
    case 'T': case 't': return 3;
    default: return -1;
  }
}

}  // namespace phylokit
