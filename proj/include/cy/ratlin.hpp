// Exact rational and integer linear algebra over Z, Q and (Q/Z)^m.
#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cy {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reduced rational p/q with q > 0.
Rat make_rat(const Int& num, const Int& den);
Rat parse_rat(const std::string& s);
// "0", "3", "-1/2"
std::string to_string(const Rat& r);
// Representative of r in Q/Z lying in [0,1).
Rat frac(const Rat& r);
Int floor_rat(const Rat& r);
RatVec frac(const RatVec& v);
bool is_integral(const Rat& r);
bool is_integral(const RatVec& v);
Int lcm_denominator(const RatVec& v);

class IntMat {
public:
  IntMat() = default;
  IntMat(std::size_t rows, std::size_t cols);
  IntMat(std::initializer_list<std::initializer_list<long>> rows);
  static IntMat identity(std::size_t n);
  static IntMat from_rows(const std::vector<IntVec>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Int& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  IntVec row(std::size_t i) const;
  IntVec col(std::size_t j) const;
  IntMat transpose() const;
  bool is_zero() const;
  IntMat block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;

  void swap_rows(std::size_t i, std::size_t j);
  void swap_cols(std::size_t i, std::size_t j);
  // row i += c * row j
  void add_row(std::size_t i, std::size_t j, const Int& c);
  void add_col(std::size_t i, std::size_t j, const Int& c);
  void negate_row(std::size_t i);
  void negate_col(std::size_t j);

  friend bool operator==(const IntMat& a, const IntMat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }
  friend bool operator<(const IntMat& a, const IntMat& b);

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Int> a_;
};

IntMat operator*(const IntMat& a, const IntMat& b);
IntMat operator+(const IntMat& a, const IntMat& b);
IntMat operator-(const IntMat& a, const IntMat& b);
IntVec operator*(const IntMat& a, const IntVec& v);
RatVec operator*(const IntMat& a, const RatVec& v);
RatVec operator+(const RatVec& a, const RatVec& b);
RatVec operator-(const RatVec& a, const RatVec& b);
RatVec operator-(const RatVec& a);
RatVec to_rat(const IntVec& v);
Int det(const IntMat& m);
// Exact inverse of a unimodular matrix; throws if not unimodular.
IntMat inverse_unimodular(const IntMat& m);
std::size_t rank(const IntMat& m);
std::string to_string(const IntMat& m);

struct HnfResult {
  IntMat h;
  IntMat u;
};

// Row Hermite normal form: h = u*m, pivots positive, entries above a pivot
// reduced into [0, pivot), zero rows last.
HnfResult hnf(const IntMat& m);

struct SnfResult {
  IntMat s;
  IntMat u;
  IntMat v;
};

// Smith normal form: s = u*m*v with d1 | d2 | ... and d_i >= 0.
SnfResult snf(const IntMat& m);
std::vector<Int> invariant_factors(const IntMat& m);

class Sublattice {
public:
  Sublattice() = default;
  explicit Sublattice(std::size_t ambient);
  static Sublattice from_generators(std::size_t ambient, const std::vector<IntVec>& gens);
  static Sublattice from_matrix_rows(const IntMat& m);
  static Sublattice full(std::size_t ambient);

  std::size_t ambient_rank() const { return ambient_; }
  std::size_t rank() const { return basis_.rows(); }
  const IntMat& basis() const { return basis_; }
  std::vector<IntVec> basis_vectors() const;
  bool saturated() const { return saturated_; }
  bool contains(const IntVec& v) const;
  // Canonical representative of v modulo the lattice (only meaningful along pivots).
  IntVec reduce(const IntVec& v) const;
  // Index in the ambient lattice when rank is full, 0 otherwise.
  Int index() const;

  friend bool operator==(const Sublattice& a, const Sublattice& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }
  friend bool operator<(const Sublattice& a, const Sublattice& b);

private:
  std::size_t ambient_ = 0;
  IntMat basis_;
  bool saturated_ = false;
  void canonicalize(const IntMat& gens);
  friend Sublattice saturation(const Sublattice& l);
};

Sublattice lattice_sum(const Sublattice& a, const Sublattice& b);
Sublattice lattice_intersection(const Sublattice& a, const Sublattice& b);
Sublattice saturation(const Sublattice& l);
// Saturated left kernel {x : x*m = 0} of an integer matrix.
Sublattice left_kernel(const IntMat& m);

struct QuotientInvariants {
  std::size_t free_rank = 0;
  std::vector<Int> torsion;  // factors > 1, divisibility chain
};
QuotientInvariants quotient_invariants(const Sublattice& l);
QuotientInvariants cokernel_invariants(const IntMat& relations, std::size_t generators);

// Complement data for a saturated lattice D of rank k in Z^m: proj is an
// (m-k) x m matrix with proj*D = 0 and proj*Z^m = Z^(m-k); lift is m x (m-k)
// with proj*lift = I.  x is in D (x) R + Z^m iff proj*x is integral.
struct Complement {
  IntMat proj;
  IntMat lift;
};
Complement complement(const Sublattice& saturated_dir);

// Canonical representative of x modulo (D (x) R + Z^m), coordinates in [0,1).
RatVec canonical_offset(const Complement& c, const RatVec& x);

struct SolutionSet {
  bool empty = true;
  std::vector<RatVec> offsets;  // reduced to [0,1), pairwise distinct modulo direction
  Sublattice direction;         // saturated
  std::size_t dim() const { return direction.rank(); }
};

// Solutions of a*x = b (mod Z^r) for x in (Q/Z)^m, a is r x m.
SolutionSet solve_mod_lattice(const IntMat& a, const RatVec& b);
// Solutions of (m - I)x = -t (mod Z^n): fixed points of x -> m*x + t.
SolutionSet solve_affine_mod_lattice(const IntMat& m, const RatVec& t);
// Whether a*x = b has a rational solution.
bool solvable_over_q(const IntMat& a, const RatVec& b);

}  // namespace cy
