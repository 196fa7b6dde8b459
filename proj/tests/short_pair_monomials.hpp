#pragma once

// The 25 alignments of sequences ij and klm with their monomials, written as
// space-separated factors: tIk = t_I(k), tDi = t_D(i), tMik = t_M(i, k),
// sXY = transition X -> Y.

#include <array>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

#include "oracles.hpp"

namespace short_pair {

inline constexpr std::array<std::pair<std::string_view, std::string_view>, 25> kRows{{
    {"IIIDD", "tIk sII tIl sII tIm sID tDi sDD tDj"},
    {"IIDID", "tIk sII tIl sID tDi sDI tIm sID tDj"},
    {"IIDDI", "tIk sII tIl sID tDi sDD tDj sDI tIm"},
    {"IDIID", "tIk sID tDi sDI tIl sII tIm sID tDj"},
    {"IDIDI", "tIk sID tDi sDI tIl sID tDj sDI tIm"},
    {"IDDII", "tIk sID tDi sDD tDj sDI tIl sII tIm"},
    {"DIIID", "tDi sDI tIk sII tIl sII tIm sID tDj"},
    {"DIIDI", "tDi sDI tIk sII tIl sID tDj sDI tIm"},
    {"DIDII", "tDi sDI tIk sID tDj sDI tIl sII tIm"},
    {"DDIII", "tDi sDD tDj sDI tIk sII tIl sII tIm"},
    {"MIID", "tMik sMI tIl sII tIm sID tDj"},
    {"MIDI", "tMik sMI tIl sID tDj sDI tIm"},
    {"MDII", "tMik sMD tDj sDI tIl sII tIm"},
    {"IMID", "tIk sIM tMil sMI tIm sID tDj"},
    {"IMDI", "tIk sIM tMil sMD tDj sDI tIm"},
    {"IIMD", "tIk sII tIl sIM tMim sMD tDj"},
    {"IIDM", "tIk sII tIl sID tDi sDM tMjm"},
    {"IDMI", "tIk sID tDi sDM tMjl sMI tIm"},
    {"IDIM", "tIk sID tDi sDI tIl sIM tMjm"},
    {"DMII", "tDi sDM tMjk sMI tIl sII tIm"},
    {"DIMI", "tDi sDI tIk sIM tMjl sMI tIm"},
    {"DIIM", "tDi sDI tIk sII tIl sIM tMjm"},
    {"MMI", "tMik sMM tMjl sMI tIm"},
    {"MIM", "tMik sMI tIl sIM tMjm"},
    {"IMM", "tIk sIM tMil sMM tMjm"},
}};

// Evaluates one monomial of the length-(2, 3) table.
template <class P>
double monomial(const P& p, std::string_view factors, const std::string& s1,
                const std::string& s2) {
  auto letter = [&](char c) {
    if (c == 'i' || c == 'j') return oracle::base_of(s1[c - 'i']);
    return oracle::base_of(s2[c - 'k']);
  };
  std::istringstream in{std::string(factors)};
  std::string f;
  double v = 1;
  while (in >> f) {
    if (f[0] == 's') {
      v *= p.s[oracle::state_of(f[1]) * 3 + oracle::state_of(f[2])];
    } else if (f[1] == 'M') {
      v *= p.tm[letter(f[2]) * 4 + letter(f[3])];
    } else if (f[1] == 'I') {
      v *= p.ti[letter(f[2])];
    } else {
      v *= p.td[letter(f[2])];
    }
  }
  return v;
}

}  // namespace short_pair
