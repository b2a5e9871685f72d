#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "sparc/dictionary.hpp"

namespace sparc {

// One chosen column index per section, in section order.
struct SupportSet {
  std::vector<int> indices;
  bool operator==(const SupportSet& o) const { return indices == o.indices; }
  bool operator!=(const SupportSet& o) const { return indices != o.indices; }
};

// Section k consumes the next log2(L_k) bits, big-endian, as the 0-based
// offset into the section's column range.
SupportSet encode(const std::vector<std::uint8_t>& bits, const Dictionary& dict);
std::vector<std::uint8_t> decode_support(const SupportSet& support, const Dictionary& dict);

// s = sum of the chosen columns
Eigen::VectorXcd to_codeword(const SupportSet& support, const Dictionary& dict);

// bits per channel use; complex dictionaries burn 2N real dimensions
double code_rate(const SectionPlan& plan, int n_rows, bool complex_dict);

}  // namespace sparc
