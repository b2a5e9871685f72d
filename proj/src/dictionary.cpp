#include "sparc/dictionary.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sparc/errors.hpp"

namespace sparc {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kNormTol = 1e-10;

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

int ilog2(int v) {
  int b = 0;
  while ((1 << (b + 1)) <= v) ++b;
  return b;
}

}  // namespace

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; static_cast<long>(d) * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

SectionPlan partition_sections(int n_cols, int n_sections) {
  if (n_sections < 1) throw ConfigError("partition_sections: need at least one section");
  if (n_sections > n_cols)
    throw ConfigError("partition_sections: more sections than columns (K=" +
                      std::to_string(n_sections) + ", L=" + std::to_string(n_cols) + ")");
  int base = 1;
  while (2 * base <= n_cols / n_sections) base *= 2;
  std::vector<int> sizes(n_sections, base);
  long budget = static_cast<long>(n_cols) - static_cast<long>(n_sections) * base;
  // smallest sections live at the back once we keep the vector sorted desc
  for (;;) {
    int smallest = sizes.back();
    if (budget < smallest) break;
    // double one smallest section; re-sorting keeps output deterministic
    sizes.back() *= 2;
    budget -= smallest;
    std::sort(sizes.begin(), sizes.end(), std::greater<int>());
  }
  SectionPlan plan;
  plan.sizes = sizes;
  plan.bits_per_section.reserve(sizes.size());
  for (int s : sizes) {
    plan.bits_per_section.push_back(ilog2(s));
    plan.total_bits += ilog2(s);
  }
  return plan;
}

Dictionary Dictionary::build_mub_prime(int p) {
  if (p == 2 || !is_prime(p))
    throw ConfigError("build_mub_prime: p must be an odd prime, got " + std::to_string(p));
  const int n = p;
  const int l = p * p;
  auto cols = std::make_shared<Eigen::MatrixXcd>(n, l);
  const double scale = 1.0 / std::sqrt(static_cast<double>(p));
  for (int t = 0; t < p; ++t) {
    for (int j = 0; j < p; ++j) {
      int c = t * p + j;
      for (int k = 0; k < p; ++k) {
        long e = (static_cast<long>(t) * k % p * k + static_cast<long>(j) * k) % p;
        (*cols)(k, c) = std::polar(scale, kTwoPi * static_cast<double>(e) / p);
      }
    }
  }
  // Gauss-sum difference table: <a_{t,j}, a_{t',j'}> depends only on
  // (t'-t, j'-j) mod p, which makes gram() O(1).
  auto table = std::make_shared<Eigen::MatrixXcd>(p, p);
  for (int dt = 0; dt < p; ++dt) {
    for (int dj = 0; dj < p; ++dj) {
      std::complex<double> acc(0.0, 0.0);
      for (int k = 0; k < p; ++k) {
        long e = (static_cast<long>(dt) * k % p * k + static_cast<long>(dj) * k) % p;
        acc += std::polar(1.0, kTwoPi * static_cast<double>(e) / p);
      }
      (*table)(dt, dj) = acc / static_cast<double>(p);
    }
  }
  Dictionary d;
  d.cols_ = std::move(cols);
  d.section_of_.assign(l, -1);
  d.coherence_ = 1.0 / std::sqrt(static_cast<double>(p));
  d.mub_p_ = p;
  d.gram_table_ = std::move(table);
  return d;
}

Dictionary Dictionary::from_columns(Eigen::MatrixXcd columns,
                                    const std::vector<int>& section_sizes) {
  Dictionary d;
  d.cols_ = std::make_shared<Eigen::MatrixXcd>(std::move(columns));
  d.section_of_.assign(d.n_cols(), -1);
  d.validate_columns();
  d.coherence_ = d.n_cols() >= 2 ? mutual_coherence(*d.cols_) : 0.0;
  if (!section_sizes.empty()) d.assign_sections(section_sizes);
  return d;
}

void Dictionary::validate_columns() const {
  if (cols_->rows() < 1 || cols_->cols() < 1)
    throw ConfigError("dictionary: empty column matrix");
  if (!cols_->allFinite()) throw ConfigError("dictionary: non-finite entries");
  for (int c = 0; c < n_cols(); ++c) {
    double nrm = cols_->col(c).norm();
    if (std::abs(nrm - 1.0) > kNormTol)
      throw ConfigError("dictionary: column " + std::to_string(c) +
                        " is not unit norm (||a|| = " + std::to_string(nrm) + ")");
  }
}

void Dictionary::assign_sections(const std::vector<int>& sizes) {
  if (sizes.empty()) throw ConfigError("dictionary: empty section plan");
  long total = 0;
  sections_.clear();
  for (int s : sizes) {
    if (!is_pow2(s))
      throw ConfigError("dictionary: section size " + std::to_string(s) +
                        " is not a power of two");
    sections_.push_back({static_cast<int>(total), static_cast<int>(total + s)});
    total += s;
  }
  if (total > n_cols())
    throw ConfigError("dictionary: section sizes exceed column count");
  active_cols_ = static_cast<int>(total);
  section_of_.assign(n_cols(), -1);
  for (int k = 0; k < n_sections(); ++k)
    for (int c = sections_[k].begin; c < sections_[k].end; ++c) section_of_[c] = k;
}

Dictionary Dictionary::with_sections(const SectionPlan& plan) const {
  return with_sections(plan.sizes);
}

Dictionary Dictionary::with_sections(const std::vector<int>& sizes) const {
  Dictionary d = *this;
  d.assign_sections(sizes);
  return d;
}

int Dictionary::total_bits() const {
  int bits = 0;
  for (const auto& s : sections_) bits += ilog2(s.size());
  return bits;
}

double mutual_coherence(const Eigen::MatrixXcd& columns) {
  const int l = static_cast<int>(columns.cols());
  if (l < 2) throw ConfigError("mutual_coherence: need at least two columns");
  Eigen::VectorXd norms = columns.colwise().norm();
  for (int c = 0; c < l; ++c)
    if (norms(c) == 0.0) throw ConfigError("mutual_coherence: zero column");
  double mu = 0.0;
  const int block = 64;
  for (int b = 0; b < l; b += block) {
    int w = std::min(block, l - b);
    Eigen::MatrixXcd g = columns.middleCols(b, w).adjoint() * columns;
    for (int r = 0; r < w; ++r) {
      for (int c = 0; c < l; ++c) {
        if (b + r == c) continue;
        double v = std::abs(g(r, c)) / (norms(b + r) * norms(c));
        if (v > mu) mu = v;
      }
    }
  }
  return mu;
}

double mutual_coherence(const Dictionary& dict) { return mutual_coherence(dict.columns()); }

void Dictionary::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("save_dictionary: cannot open " + path);
  out << n_rows() << ' ' << n_cols() << ' ' << n_sections() << '\n';
  for (int k = 0; k < n_sections(); ++k) {
    if (k) out << ' ';
    out << sections_[k].size();
  }
  out << '\n';
  char buf[32];
  for (int c = 0; c < n_cols(); ++c) {
    for (int r = 0; r < n_rows(); ++r) {
      const std::complex<double>& v = (*cols_)(r, c);
      std::snprintf(buf, sizeof buf, "%.17g", v.real());
      out << (r ? " " : "") << buf;
      std::snprintf(buf, sizeof buf, "%.17g", v.imag());
      out << ' ' << buf;
    }
    out << '\n';
  }
  if (!out) throw ConfigError("save_dictionary: write failed for " + path);
}

Dictionary Dictionary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("load_dictionary: cannot open " + path);
  int n = 0, l = 0, k = 0;
  if (!(in >> n >> l >> k) || n < 1 || l < 1 || k < 0)
    throw ConfigError("load_dictionary: malformed header in " + path);
  std::vector<int> sizes(k);
  for (int i = 0; i < k; ++i)
    if (!(in >> sizes[i])) throw ConfigError("load_dictionary: truncated section sizes");
  Eigen::MatrixXcd cols(n, l);
  for (int c = 0; c < l; ++c) {
    for (int r = 0; r < n; ++r) {
      double re = 0, im = 0;
      if (!(in >> re >> im))
        throw ConfigError("load_dictionary: truncated column data in " + path);
      cols(r, c) = {re, im};
    }
  }
  Dictionary d = from_columns(std::move(cols), sizes);
  // degenerate dictionaries (repeated columns) cannot carry a code
  if (d.coherence_ >= 1.0 - kNormTol)
    throw ConfigError("load_dictionary: coherence is 1 (duplicate columns) in " + path);
  return d;
}

}  // namespace sparc
