#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "chase/error.hpp"

namespace chase {

// A one-sided monoid presentation <B>/R: every relator word is identified
// with the identity. The empty relator is permitted and is a no-op.
struct MonoidPresentation {
  std::vector<std::string> alphabet;
  std::vector<std::vector<int>> relators;  // indices into alphabet

  void validate() const {
    for (const auto& rho : relators)
      for (int s : rho)
        if (s < 0 || s >= static_cast<int>(alphabet.size()))
          throw Error("presentation: relator references unknown symbol " + std::to_string(s));
  }

  int longest_relator() const {
    int len = 0;
    for (const auto& rho : relators) len = std::max(len, static_cast<int>(rho.size()));
    return len;
  }
};

}  // namespace chase
