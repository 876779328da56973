// Laplacian verdicts for every cell of the connected threshold graphs with
// three cells and at most nine vertices.

#include <cstdio>
#include <string>

#include "sedwalk/sedwalk.hpp"

int main() {
  using namespace sedwalk;
  std::printf("%-12s %-5s %-14s %-12s %s\n", "cells", "cell", "verdict", "constant", "certified bound");
  for (std::size_t a = 1; a <= 4; ++a) {
    for (std::size_t b = 1; b <= 4; ++b) {
      for (std::size_t c = 1; a + b + c <= 9; ++c) {
        ThresholdSpec spec{{a, b, c}, false};
        const std::string name = "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
        for (const auto& v : threshold_pst_or_sedentary(spec)) {
          std::printf("%-12s %-5zu %-14s %-12.8f %s\n", name.c_str(), v.cell, to_string(v.verdict),
                      v.constant.value_or(0.0),
                      v.certified_bound ? std::to_string(*v.certified_bound).c_str() : "-");
        }
      }
    }
  }
}
