// Diagonal return amplitude for direct products of complete graphs: the
// closed-form verdict next to the minimum over one period.

#include <cstdio>
#include <string>
#include <vector>

#include "sedwalk/sedwalk.hpp"

int main() {
  using namespace sedwalk;
  const std::vector<std::vector<std::size_t>> lists = {{2, 3}, {2, 5}, {3, 3}, {3, 4}, {3, 5}, {4, 4},
                                                       {4, 5}, {5, 5}, {3, 3, 3}, {3, 3, 5}};
  std::printf("%-10s %-14s %-26s %-12s %-12s %s\n", "factors", "verdict", "case", "constant", "time", "formula");
  for (const auto& m : lists) {
    std::string name;
    for (auto x : m) name += (name.empty() ? "" : "x") + std::to_string(x);
    auto r = complete_product_verdict(m);
    const auto& c = r.classification;
    std::printf("%-10s %-14s %-26s %-12.8f %-12.8f %.8f\n", name.c_str(), to_string(c.verdict), r.case_label.c_str(),
                c.constant.value_or(0.0), c.time.value_or(0.0), r.closed_form_constant.value_or(0.0));
  }
}
