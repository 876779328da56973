// Walks on the cocktail party graph CP(2k) under the Laplacian: perfect state
// transfer between antipodal vertices when k is even, a tight constant 1/k
// when k is odd.

#include <cstdio>
#include <numbers>

#include "sedwalk/sedwalk.hpp"

int main() {
  using namespace sedwalk;
  std::printf("%-4s %-14s %-10s %-12s %s\n", "k", "verdict", "constant", "time", "|U(pi/2)_{u,v}|");
  for (std::size_t k = 2; k <= 8; ++k) {
    auto g = cocktail_party(k);
    auto dec = decompose(g, MatrixKind::laplacian());
    auto c = classify_vertex(g, dec, 0);
    WalkEvaluator ev(dec);
    std::printf("%-4zu %-14s %-10.6f %-12.6f %.9f\n", k, to_string(c.verdict), c.constant.value_or(0.0),
                c.time.value_or(0.0), ev.magnitude(0, 1, std::numbers::pi / 2));
  }
}
