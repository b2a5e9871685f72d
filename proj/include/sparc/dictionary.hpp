#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace sparc {

struct SectionRange {
  int begin = 0;
  int end = 0;  // one past last column
  int size() const { return end - begin; }
};

// K power-of-two section sizes and the bit budget they carry.
struct SectionPlan {
  std::vector<int> sizes;
  std::vector<int> bits_per_section;  // log2 of each size
  int total_bits = 0;
};

// Greedy partition of L columns into K power-of-two sections maximizing the
// total bit count: start every section at the largest power of two <= L/K,
// then keep doubling the smallest section that still fits in the leftover
// column budget. Output is sorted largest-first and is deterministic.
SectionPlan partition_sections(int n_cols, int n_sections);

// Unit-norm complex dictionary with disjoint power-of-two sections assigned
// to a prefix of the columns. Immutable after construction; copies share the
// column storage, so dictionaries are cheap to pass across worker threads.
class Dictionary {
 public:
  // p mutually unbiased bases for odd prime p (computational basis excluded):
  // column (t, j) has k-th entry exp(2*pi*i*(t*k^2 + j*k)/p)/sqrt(p), columns
  // ordered lexicographically by (t, j). No sections assigned yet.
  static Dictionary build_mub_prime(int p);

  // Arbitrary column set (test generators, externally built matrices).
  // Validates unit norms; sections optional.
  static Dictionary from_columns(Eigen::MatrixXcd columns,
                                 const std::vector<int>& section_sizes = {});

  Dictionary with_sections(const SectionPlan& plan) const;
  Dictionary with_sections(const std::vector<int>& sizes) const;

  int n_rows() const { return static_cast<int>(cols_->rows()); }
  int n_cols() const { return static_cast<int>(cols_->cols()); }
  int n_sections() const { return static_cast<int>(sections_.size()); }
  const std::vector<SectionRange>& sections() const { return sections_; }
  const SectionRange& section(int k) const { return sections_[k]; }
  // columns covered by sections (always a prefix of the column index range)
  int active_cols() const { return active_cols_; }
  int section_of(int col) const { return section_of_[col]; }
  const Eigen::MatrixXcd& columns() const { return *cols_; }
  int total_bits() const;

  double coherence() const { return coherence_; }

  bool has_fast_gram() const { return gram_table_ != nullptr; }

  // <a_i, a_j>, conjugate-linear in the first argument. O(1) for MUB-built
  // dictionaries (Gauss-sum difference table), O(N) otherwise.
  std::complex<double> gram(int i, int j) const {
    if (gram_table_) {
      int p = mub_p_;
      int dt = (j / p - i / p) % p;
      int dj = (j % p - i % p) % p;
      if (dt < 0) dt += p;
      if (dj < 0) dj += p;
      return (*gram_table_)(dt, dj);
    }
    return cols_->col(i).dot(cols_->col(j));
  }

  // Interchange format: "N L K" header, K section sizes, then L columns as
  // 2N floats (real imag interleaved) printed with 17 significant digits.
  void save(const std::string& path) const;
  static Dictionary load(const std::string& path);

 private:
  Dictionary() = default;
  void assign_sections(const std::vector<int>& sizes);
  void validate_columns() const;

  std::shared_ptr<const Eigen::MatrixXcd> cols_;
  std::vector<SectionRange> sections_;
  std::vector<int> section_of_;  // -1 outside any section
  int active_cols_ = 0;
  double coherence_ = 1.0;
  // set when built by build_mub_prime; enables the O(1) gram path
  int mub_p_ = 0;
  std::shared_ptr<const Eigen::MatrixXcd> gram_table_;
};

// Exhaustive max_{i != j} |<a_i, a_j>| / (||a_i|| ||a_j||), blocked so large
// dictionaries do not materialize the full Gram matrix.
double mutual_coherence(const Eigen::MatrixXcd& columns);
double mutual_coherence(const Dictionary& dict);

bool is_prime(int n);

}  // namespace sparc
