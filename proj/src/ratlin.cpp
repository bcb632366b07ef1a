#include "cy/ratlin.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace cy {

Rat make_rat(const Int& num, const Int& den) {
  if (den == 0)
    throw std::domain_error("zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

Rat parse_rat(const std::string& s) {
  std::string t;
  for (char c : s)
    if (c != ' ' && c != '\t')
      t += c;
  if (t.empty())
    throw std::invalid_argument("empty rational");
  if (t[0] == '+')
    t.erase(0, 1);
  auto slash = t.find('/');
  auto valid_int = [](const std::string& x) {
    std::size_t i = (!x.empty() && x[0] == '-') ? 1 : 0;
    if (i == x.size())
      return false;
    for (; i < x.size(); ++i)
      if (x[i] < '0' || x[i] > '9')
        return false;
    return true;
  };
  if (slash == std::string::npos) {
    if (!valid_int(t))
      throw std::invalid_argument("bad rational: " + s);
    return Rat(Int(t));
  }
  std::string n = t.substr(0, slash), d = t.substr(slash + 1);
  if (!valid_int(n) || !valid_int(d))
    throw std::invalid_argument("bad rational: " + s);
  return make_rat(Int(n), Int(d));
}

std::string to_string(const Rat& r) {
  if (r.get_den() == 1)
    return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Int floor_rat(const Rat& r) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Rat frac(const Rat& r) {
  Rat f = r - Rat(floor_rat(r));
  f.canonicalize();
  return f;
}

RatVec frac(const RatVec& v) {
  RatVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = frac(v[i]);
  return out;
}

bool is_integral(const Rat& r) { return r.get_den() == 1; }

bool is_integral(const RatVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& r) { return is_integral(r); });
}

Int lcm_denominator(const RatVec& v) {
  Int l = 1;
  for (const auto& r : v)
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r.get_den_mpz_t());
  return l;
}

// ---------------------------------------------------------------- IntMat

IntMat::IntMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, Int(0)) {}

IntMat::IntMat(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  for (const auto& r : rows) {
    if (r.size() != cols_)
      throw DimensionError("ragged matrix literal");
    for (long x : r)
      a_.emplace_back(x);
  }
}

IntMat IntMat::identity(std::size_t n) {
  IntMat m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) = 1;
  return m;
}

IntMat IntMat::from_rows(const std::vector<IntVec>& rows, std::size_t cols) {
  IntMat m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols)
      throw DimensionError("row length mismatch");
    for (std::size_t j = 0; j < cols; ++j)
      m(i, j) = rows[i][j];
  }
  return m;
}

IntVec IntMat::row(std::size_t i) const {
  return IntVec(a_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                a_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

IntVec IntMat::col(std::size_t j) const {
  IntVec c(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    c[i] = (*this)(i, j);
  return c;
}

IntMat IntMat::transpose() const {
  IntMat t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      t(j, i) = (*this)(i, j);
  return t;
}

bool IntMat::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const Int& x) { return x == 0; });
}

IntMat IntMat::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_)
    throw DimensionError("block out of range");
  IntMat b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j)
      b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void IntMat::swap_rows(std::size_t i, std::size_t j) {
  if (i == j)
    return;
  for (std::size_t k = 0; k < cols_; ++k)
    std::swap((*this)(i, k), (*this)(j, k));
}

void IntMat::swap_cols(std::size_t i, std::size_t j) {
  if (i == j)
    return;
  for (std::size_t k = 0; k < rows_; ++k)
    std::swap((*this)(k, i), (*this)(k, j));
}

void IntMat::add_row(std::size_t i, std::size_t j, const Int& c) {
  if (c == 0)
    return;
  for (std::size_t k = 0; k < cols_; ++k)
    if ((*this)(j, k) != 0)
      (*this)(i, k) += c * (*this)(j, k);
}

void IntMat::add_col(std::size_t i, std::size_t j, const Int& c) {
  if (c == 0)
    return;
  for (std::size_t k = 0; k < rows_; ++k)
    if ((*this)(k, j) != 0)
      (*this)(k, i) += c * (*this)(k, j);
}

void IntMat::negate_row(std::size_t i) {
  for (std::size_t k = 0; k < cols_; ++k)
    (*this)(i, k) = -(*this)(i, k);
}

void IntMat::negate_col(std::size_t j) {
  for (std::size_t k = 0; k < rows_; ++k)
    (*this)(k, j) = -(*this)(k, j);
}

bool operator<(const IntMat& a, const IntMat& b) {
  if (a.rows_ != b.rows_)
    return a.rows_ < b.rows_;
  if (a.cols_ != b.cols_)
    return a.cols_ < b.cols_;
  return a.a_ < b.a_;
}

IntMat operator*(const IntMat& a, const IntMat& b) {
  if (a.cols() != b.rows())
    throw DimensionError("matrix product dimension mismatch");
  IntMat c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Int& x = a(i, k);
      if (x == 0)
        continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (b(k, j) != 0)
          c(i, j) += x * b(k, j);
    }
  return c;
}

IntMat operator+(const IntMat& a, const IntMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("matrix sum dimension mismatch");
  IntMat c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      c(i, j) = a(i, j) + b(i, j);
  return c;
}

IntMat operator-(const IntMat& a, const IntMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("matrix difference dimension mismatch");
  IntMat c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      c(i, j) = a(i, j) - b(i, j);
  return c;
}

IntVec operator*(const IntMat& a, const IntVec& v) {
  if (a.cols() != v.size())
    throw DimensionError("matrix-vector dimension mismatch");
  IntVec out(a.rows(), Int(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0)
        out[i] += a(i, j) * v[j];
  return out;
}

RatVec operator*(const IntMat& a, const RatVec& v) {
  if (a.cols() != v.size())
    throw DimensionError("matrix-vector dimension mismatch");
  RatVec out(a.rows(), Rat(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0 && v[j] != 0)
        out[i] += Rat(a(i, j)) * v[j];
  return out;
}

RatVec operator+(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size())
    throw DimensionError("vector sum dimension mismatch");
  RatVec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    c[i] = a[i] + b[i];
  return c;
}

RatVec operator-(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size())
    throw DimensionError("vector difference dimension mismatch");
  RatVec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    c[i] = a[i] - b[i];
  return c;
}

RatVec operator-(const RatVec& a) {
  RatVec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    c[i] = -a[i];
  return c;
}

RatVec to_rat(const IntVec& v) {
  RatVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    r[i] = Rat(v[i]);
  return r;
}

Int det(const IntMat& m) {
  if (m.rows() != m.cols())
    throw DimensionError("determinant of non-square matrix");
  std::size_t n = m.rows();
  if (n == 0)
    return 1;
  IntMat a = m;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0)
        ++p;
      if (p == n)
        return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a(i, j) = t;
      }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

std::size_t rank(const IntMat& m) {
  IntMat a = m;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a(p, c) == 0)
      ++p;
    if (p == a.rows())
      continue;
    a.swap_rows(r, p);
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      if (a(i, c) == 0)
        continue;
      Int f = a(i, c), g = a(r, c);
      for (std::size_t j = c; j < a.cols(); ++j)
        a(i, j) = a(i, j) * g - a(r, j) * f;
      // keep entries small
      Int gg = 0;
      for (std::size_t j = c; j < a.cols(); ++j)
        mpz_gcd(gg.get_mpz_t(), gg.get_mpz_t(), a(i, j).get_mpz_t());
      if (gg > 1)
        for (std::size_t j = c; j < a.cols(); ++j)
          mpz_divexact(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), gg.get_mpz_t());
    }
    ++r;
  }
  return r;
}

std::string to_string(const IntMat& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j)
      os << (j ? "," : "") << m(i, j).get_str();
    os << "]";
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------- HNF / SNF

namespace {

Int fdiv(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int tdiv(const Int& a, const Int& b) {
  Int q;
  mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

HnfResult hnf(const IntMat& m) {
  IntMat h = m;
  IntMat u = IntMat::identity(m.rows());
  std::size_t r = 0;
  for (std::size_t c = 0; c < h.cols() && r < h.rows(); ++c) {
    for (;;) {
      std::size_t best = h.rows();
      for (std::size_t i = r; i < h.rows(); ++i)
        if (h(i, c) != 0 && (best == h.rows() || abs(h(i, c)) < abs(h(best, c))))
          best = i;
      if (best == h.rows())
        break;
      h.swap_rows(r, best);
      u.swap_rows(r, best);
      bool clean = true;
      for (std::size_t i = r + 1; i < h.rows(); ++i) {
        if (h(i, c) == 0)
          continue;
        Int q = tdiv(h(i, c), h(r, c));
        h.add_row(i, r, -q);
        u.add_row(i, r, -q);
        if (h(i, c) != 0)
          clean = false;
      }
      if (clean)
        break;
    }
    if (h(r, c) == 0)
      continue;
    if (h(r, c) < 0) {
      h.negate_row(r);
      u.negate_row(r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      Int q = fdiv(h(i, c), h(r, c));
      h.add_row(i, r, -q);
      u.add_row(i, r, -q);
    }
    ++r;
  }
  return {std::move(h), std::move(u)};
}

SnfResult snf(const IntMat& m) {
  IntMat s = m;
  IntMat u = IntMat::identity(m.rows());
  IntMat v = IntMat::identity(m.cols());
  std::size_t n = std::min(s.rows(), s.cols());
  for (std::size_t t = 0; t < n; ++t) {
    // pivot: smallest nonzero entry of the trailing block
    std::size_t pi = s.rows(), pj = s.cols();
    for (std::size_t i = t; i < s.rows(); ++i)
      for (std::size_t j = t; j < s.cols(); ++j)
        if (s(i, j) != 0 && (pi == s.rows() || abs(s(i, j)) < abs(s(pi, pj)))) {
          pi = i;
          pj = j;
        }
    if (pi == s.rows())
      break;
    s.swap_rows(t, pi);
    u.swap_rows(t, pi);
    s.swap_cols(t, pj);
    v.swap_cols(t, pj);
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < s.rows(); ++i) {
        if (s(i, t) == 0)
          continue;
        Int q = tdiv(s(i, t), s(t, t));
        s.add_row(i, t, -q);
        u.add_row(i, t, -q);
        if (s(i, t) != 0)
          clean = false;
      }
      for (std::size_t j = t + 1; j < s.cols(); ++j) {
        if (s(t, j) == 0)
          continue;
        Int q = tdiv(s(t, j), s(t, t));
        s.add_col(j, t, -q);
        v.add_col(j, t, -q);
        if (s(t, j) != 0)
          clean = false;
      }
      if (!clean) {
        // move the smallest remainder in row/column t into the pivot
        std::size_t bi = t, bj = t;
        for (std::size_t i = t + 1; i < s.rows(); ++i)
          if (s(i, t) != 0 && abs(s(i, t)) < abs(s(bi, bj))) {
            bi = i;
            bj = t;
          }
        for (std::size_t j = t + 1; j < s.cols(); ++j)
          if (s(t, j) != 0 && abs(s(t, j)) < abs(s(bi, bj))) {
            bi = t;
            bj = j;
          }
        s.swap_rows(t, bi);
        u.swap_rows(t, bi);
        s.swap_cols(t, bj);
        v.swap_cols(t, bj);
        continue;
      }
      std::size_t bad = s.rows();
      for (std::size_t i = t + 1; i < s.rows() && bad == s.rows(); ++i)
        for (std::size_t j = t + 1; j < s.cols(); ++j)
          if (!mpz_divisible_p(s(i, j).get_mpz_t(), s(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
      if (bad == s.rows())
        break;
      s.add_row(t, bad, 1);
      u.add_row(t, bad, 1);
    }
    if (s(t, t) < 0) {
      s.negate_row(t);
      u.negate_row(t);
    }
  }
  return {std::move(s), std::move(u), std::move(v)};
}

std::vector<Int> invariant_factors(const IntMat& m) {
  SnfResult r = snf(m);
  std::vector<Int> d;
  for (std::size_t i = 0; i < std::min(r.s.rows(), r.s.cols()); ++i)
    d.push_back(r.s(i, i));
  return d;
}

IntMat inverse_unimodular(const IntMat& m) {
  if (m.rows() != m.cols())
    throw DimensionError("inverse of non-square matrix");
  HnfResult r = hnf(m);
  if (!(r.h == IntMat::identity(m.rows())))
    throw std::domain_error("matrix is not unimodular");
  return r.u;
}

// ---------------------------------------------------------------- Sublattice

Sublattice::Sublattice(std::size_t ambient) : ambient_(ambient), basis_(0, ambient), saturated_(true) {}

void Sublattice::canonicalize(const IntMat& gens) {
  HnfResult r = hnf(gens);
  std::size_t k = 0;
  while (k < r.h.rows() && [&] {
    for (std::size_t j = 0; j < r.h.cols(); ++j)
      if (r.h(k, j) != 0)
        return true;
    return false;
  }())
    ++k;
  basis_ = r.h.block(0, 0, k, ambient_);
  saturated_ = true;
  if (k > 0)
    for (const Int& d : invariant_factors(basis_))
      if (d != 1)
        saturated_ = false;
}

Sublattice Sublattice::from_generators(std::size_t ambient, const std::vector<IntVec>& gens) {
  Sublattice l(ambient);
  if (gens.empty())
    return l;
  l.canonicalize(IntMat::from_rows(gens, ambient));
  return l;
}

Sublattice Sublattice::from_matrix_rows(const IntMat& m) {
  Sublattice l(m.cols());
  if (m.rows() == 0)
    return l;
  l.canonicalize(m);
  return l;
}

Sublattice Sublattice::full(std::size_t ambient) { return from_matrix_rows(IntMat::identity(ambient)); }

std::vector<IntVec> Sublattice::basis_vectors() const {
  std::vector<IntVec> out;
  for (std::size_t i = 0; i < basis_.rows(); ++i)
    out.push_back(basis_.row(i));
  return out;
}

IntVec Sublattice::reduce(const IntVec& v) const {
  if (v.size() != ambient_)
    throw DimensionError("vector does not match lattice ambient rank");
  IntVec w = v;
  std::size_t p = 0;
  for (std::size_t i = 0; i < basis_.rows(); ++i) {
    while (basis_(i, p) == 0)
      ++p;
    Int q = fdiv(w[p], basis_(i, p));
    if (q != 0)
      for (std::size_t j = p; j < ambient_; ++j)
        w[j] -= q * basis_(i, j);
  }
  return w;
}

bool Sublattice::contains(const IntVec& v) const {
  IntVec w = reduce(v);
  return std::all_of(w.begin(), w.end(), [](const Int& x) { return x == 0; });
}

Int Sublattice::index() const {
  if (rank() != ambient_)
    return 0;
  Int d = 1;
  for (std::size_t i = 0; i < rank(); ++i)
    d *= basis_(i, i);
  return d;
}

bool operator<(const Sublattice& a, const Sublattice& b) {
  if (a.ambient_ != b.ambient_)
    return a.ambient_ < b.ambient_;
  return a.basis_ < b.basis_;
}

Sublattice lattice_sum(const Sublattice& a, const Sublattice& b) {
  if (a.ambient_rank() != b.ambient_rank())
    throw DimensionError("lattice sum: ambient rank mismatch");
  auto g = a.basis_vectors();
  for (auto& v : b.basis_vectors())
    g.push_back(v);
  return Sublattice::from_generators(a.ambient_rank(), g);
}

Sublattice lattice_intersection(const Sublattice& a, const Sublattice& b) {
  if (a.ambient_rank() != b.ambient_rank())
    throw DimensionError("lattice intersection: ambient rank mismatch");
  std::size_t m = a.ambient_rank();
  if (a.rank() == 0 || b.rank() == 0)
    return Sublattice(m);
  IntMat z(a.rank() + b.rank(), 2 * m);
  for (std::size_t i = 0; i < a.rank(); ++i)
    for (std::size_t j = 0; j < m; ++j) {
      z(i, j) = a.basis()(i, j);
      z(i, m + j) = a.basis()(i, j);
    }
  for (std::size_t i = 0; i < b.rank(); ++i)
    for (std::size_t j = 0; j < m; ++j)
      z(a.rank() + i, j) = b.basis()(i, j);
  HnfResult r = hnf(z);
  std::vector<IntVec> gens;
  for (std::size_t i = 0; i < r.h.rows(); ++i) {
    bool left_zero = true;
    for (std::size_t j = 0; j < m; ++j)
      if (r.h(i, j) != 0)
        left_zero = false;
    if (!left_zero)
      continue;
    IntVec v(m);
    bool nz = false;
    for (std::size_t j = 0; j < m; ++j) {
      v[j] = r.h(i, m + j);
      nz = nz || v[j] != 0;
    }
    if (nz)
      gens.push_back(v);
  }
  return Sublattice::from_generators(m, gens);
}

Sublattice saturation(const Sublattice& l) {
  if (l.saturated())
    return l;
  SnfResult r = snf(l.basis());
  IntMat vinv = inverse_unimodular(r.v);
  return Sublattice::from_matrix_rows(vinv.block(0, 0, l.rank(), l.ambient_rank()));
}

Sublattice left_kernel(const IntMat& m) {
  HnfResult r = hnf(m);
  std::vector<IntVec> gens;
  for (std::size_t i = 0; i < r.h.rows(); ++i) {
    bool zero = true;
    for (std::size_t j = 0; j < r.h.cols(); ++j)
      if (r.h(i, j) != 0)
        zero = false;
    if (zero)
      gens.push_back(r.u.row(i));
  }
  return Sublattice::from_generators(m.rows(), gens);
}

QuotientInvariants cokernel_invariants(const IntMat& relations, std::size_t generators) {
  if (relations.cols() != generators)
    throw DimensionError("relation matrix width differs from generator count");
  QuotientInvariants q;
  if (relations.rows() == 0) {
    q.free_rank = generators;
    return q;
  }
  std::size_t rk = 0;
  for (const Int& d : invariant_factors(relations)) {
    if (d == 0)
      continue;
    ++rk;
    if (d != 1)
      q.torsion.push_back(d);
  }
  q.free_rank = generators - rk;
  return q;
}

QuotientInvariants quotient_invariants(const Sublattice& l) {
  return cokernel_invariants(l.basis(), l.ambient_rank());
}

Complement complement(const Sublattice& dir) {
  std::size_t m = dir.ambient_rank(), k = dir.rank();
  if (!dir.saturated())
    throw std::invalid_argument("complement requires a saturated lattice");
  if (k == 0)
    return {IntMat::identity(m), IntMat::identity(m)};
  SnfResult r = snf(dir.basis().transpose());
  IntMat uinv = inverse_unimodular(r.u);
  return {r.u.block(k, 0, m - k, m), uinv.block(0, k, m, m - k)};
}

RatVec canonical_offset(const Complement& c, const RatVec& x) {
  RatVec y = frac(c.proj * x);
  return frac(c.lift * y);
}

SolutionSet solve_mod_lattice(const IntMat& a, const RatVec& b) {
  if (a.rows() != b.size())
    throw DimensionError("solve: right-hand side length mismatch");
  std::size_t m = a.cols();
  SnfResult r = snf(a);
  RatVec c = r.u * b;
  std::size_t rk = 0;
  while (rk < std::min(r.s.rows(), r.s.cols()) && r.s(rk, rk) != 0)
    ++rk;
  SolutionSet out;
  for (std::size_t i = rk; i < c.size(); ++i)
    if (!is_integral(c[i])) {
      out.direction = Sublattice(m);
      return out;
    }
  std::vector<IntVec> dir;
  for (std::size_t j = rk; j < m; ++j)
    dir.push_back(r.v.col(j));
  out.direction = Sublattice::from_generators(m, dir);
  Complement comp = complement(out.direction);
  std::vector<Int> d(rk);
  for (std::size_t i = 0; i < rk; ++i)
    d[i] = r.s(i, i);
  std::vector<Int> k(rk, Int(0));
  for (;;) {
    RatVec y(m, Rat(0));
    for (std::size_t i = 0; i < rk; ++i)
      y[i] = make_rat(c[i].get_num() + k[i] * c[i].get_den(), d[i] * c[i].get_den());
    out.offsets.push_back(canonical_offset(comp, r.v * y));
    std::size_t i = 0;
    while (i < rk) {
      if (++k[i] < d[i])
        break;
      k[i] = 0;
      ++i;
    }
    if (i == rk)
      break;
  }
  std::sort(out.offsets.begin(), out.offsets.end());
  out.empty = false;
  return out;
}

SolutionSet solve_affine_mod_lattice(const IntMat& m, const RatVec& t) {
  if (m.rows() != m.cols() || t.size() != m.rows())
    throw DimensionError("solve_affine: expects square matrix and matching translation");
  return solve_mod_lattice(m - IntMat::identity(m.rows()), -t);
}

bool solvable_over_q(const IntMat& a, const RatVec& b) {
  if (a.rows() != b.size())
    throw DimensionError("solvable_over_q: length mismatch");
  Int d = lcm_denominator(b);
  IntMat aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j)
      aug(i, j) = a(i, j);
    Rat x = b[i] * Rat(d);
    aug(i, a.cols()) = x.get_num();
  }
  return rank(aug) == rank(a);
}

}  // namespace cy
