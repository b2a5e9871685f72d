#include "sparc/codec.hpp"

#include <stdexcept>

#include "sparc/errors.hpp"

namespace sparc {

SupportSet encode(const std::vector<std::uint8_t>& bits, const Dictionary& dict) {
  if (dict.n_sections() == 0) throw ConfigError("encode: dictionary has no sections");
  if (static_cast<int>(bits.size()) != dict.total_bits())
    throw ConfigError("encode: expected " + std::to_string(dict.total_bits()) +
                      " bits, got " + std::to_string(bits.size()));
  SupportSet s;
  s.indices.reserve(dict.n_sections());
  std::size_t pos = 0;
  for (int k = 0; k < dict.n_sections(); ++k) {
    const SectionRange& sec = dict.section(k);
    int nbits = 0;
    while ((1 << (nbits + 1)) <= sec.size()) ++nbits;
    int offset = 0;
    for (int b = 0; b < nbits; ++b) offset = (offset << 1) | (bits[pos++] ? 1 : 0);
    s.indices.push_back(sec.begin + offset);
  }
  return s;
}

std::vector<std::uint8_t> decode_support(const SupportSet& support, const Dictionary& dict) {
  if (static_cast<int>(support.indices.size()) != dict.n_sections())
    throw ConfigError("decode_support: support size does not match section count");
  std::vector<std::uint8_t> bits;
  bits.reserve(dict.total_bits());
  for (int k = 0; k < dict.n_sections(); ++k) {
    const SectionRange& sec = dict.section(k);
    int idx = support.indices[k];
    if (idx < sec.begin || idx >= sec.end)
      throw ConfigError("decode_support: index " + std::to_string(idx) +
                        " outside section " + std::to_string(k));
    int offset = idx - sec.begin;
    int nbits = 0;
    while ((1 << (nbits + 1)) <= sec.size()) ++nbits;
    for (int b = nbits - 1; b >= 0; --b) bits.push_back((offset >> b) & 1);
  }
  return bits;
}

Eigen::VectorXcd to_codeword(const SupportSet& support, const Dictionary& dict) {
  Eigen::VectorXcd s = Eigen::VectorXcd::Zero(dict.n_rows());
  for (int idx : support.indices) s += dict.columns().col(idx);
  return s;
}

double code_rate(const SectionPlan& plan, int n_rows, bool complex_dict) {
  double uses = complex_dict ? 2.0 * n_rows : 1.0 * n_rows;
  return static_cast<double>(plan.total_bits) / uses;
}

}  // namespace sparc
