// Complex tori in lattice coordinates, affine automorphisms and finite groups of them.
#pragma once

#include "cy/ratlin.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cy {

// Product of elliptic curves E_1 x ... x E_n; factor i has period tag tags[i]
// and real coordinates (2i, 2i+1) in the basis (1, tau_i).
struct TorusShape {
  std::vector<std::string> tags;
  // Standing assumption End_Q(E) != Q(zeta_6); recorded, not used.
  bool generic_endomorphisms = true;

  std::size_t complex_dim() const { return tags.size(); }
  std::size_t real_dim() const { return 2 * tags.size(); }
  bool shares_period(std::size_t i, std::size_t j) const { return tags[i] == tags[j]; }
  friend bool operator==(const TorusShape& a, const TorusShape& b) { return a.tags == b.tags; }
};

struct TorusPoint {
  RatVec coords;  // each in [0,1)
  static TorusPoint reduced(const RatVec& v);
  friend bool operator==(const TorusPoint& a, const TorusPoint& b) { return a.coords == b.coords; }
  friend bool operator<(const TorusPoint& a, const TorusPoint& b) { return a.coords < b.coords; }
};

// Torsion value a + b*tau_i on one factor, as its two lattice coordinates.
struct FactorValue {
  Rat re, im;
  friend bool operator==(const FactorValue& a, const FactorValue& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator<(const FactorValue& a, const FactorValue& b) {
    return a.re != b.re ? a.re < b.re : a.im < b.im;
  }
};
std::string format_value(const FactorValue& v, const std::string& tag);

struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotFiniteUnderCap : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class AffineTorusMap {
public:
  AffineTorusMap() = default;
  // Rejects complex linear parts that mix factors with different periods.
  AffineTorusMap(const TorusShape& shape, IntMat complex_linear, RatVec translation);
  static AffineTorusMap identity(const TorusShape& shape);
  static AffineTorusMap translation_by(const TorusShape& shape, const RatVec& t);

  const IntMat& complex_linear() const { return c_; }
  const IntMat& real_linear() const { return m_; }
  const RatVec& translation() const { return t_; }
  std::size_t real_dim() const { return t_.size(); }
  bool is_translation() const;
  bool is_identity() const;

  RatVec apply(const RatVec& x) const;

  friend bool operator==(const AffineTorusMap& a, const AffineTorusMap& b) {
    return a.m_ == b.m_ && a.t_ == b.t_;
  }
  friend bool operator!=(const AffineTorusMap& a, const AffineTorusMap& b) { return !(a == b); }
  friend bool operator<(const AffineTorusMap& a, const AffineTorusMap& b) {
    if (!(a.m_ == b.m_))
      return a.m_ < b.m_;
    return a.t_ < b.t_;
  }

private:
  IntMat c_, m_;
  RatVec t_;
  friend AffineTorusMap compose(const AffineTorusMap& f, const AffineTorusMap& g);
  friend AffineTorusMap inverse(const AffineTorusMap& f);
};

// Real 2n x 2n form C (x) I_2 of a complex integer matrix.
IntMat real_form(const IntMat& complex_linear);

// (f o g)(x) = f(g(x))
AffineTorusMap compose(const AffineTorusMap& f, const AffineTorusMap& g);
AffineTorusMap inverse(const AffineTorusMap& f);
// Order of f, or nullopt when it exceeds cap.
std::optional<std::size_t> order(const AffineTorusMap& f, std::size_t cap = 512);
AffineTorusMap power(const AffineTorusMap& f, std::size_t k);
AffineTorusMap conjugate(const AffineTorusMap& g, const AffineTorusMap& by);  // by g by^-1

// Fixed-point set of f on the torus.
SolutionSet fixed_points(const AffineTorusMap& f);
bool has_fixed_point(const AffineTorusMap& f);

struct VolumeAction {
  Int det;
  bool preserves() const { return det == 1; }
};
VolumeAction volume_form_action(const AffineTorusMap& f);

// Age of an involution at a fixed point: half the number of -1 eigenvalues.
Rat age_at_fixed_point(const AffineTorusMap& f);

class FiniteAffineGroup {
public:
  FiniteAffineGroup() = default;
  FiniteAffineGroup(TorusShape shape, std::vector<AffineTorusMap> elements, std::vector<AffineTorusMap> gens,
                    std::vector<std::string> labels);

  const TorusShape& shape() const { return shape_; }
  const std::vector<AffineTorusMap>& elements() const { return elements_; }
  const std::vector<AffineTorusMap>& generators() const { return gens_; }
  const std::vector<std::string>& generator_labels() const { return labels_; }
  std::size_t order() const { return elements_.size(); }
  bool contains(const AffineTorusMap& f) const { return index_.count(f) != 0; }
  std::size_t index_of(const AffineTorusMap& f) const;
  const AffineTorusMap& operator[](std::size_t i) const { return elements_[i]; }

private:
  TorusShape shape_;
  std::vector<AffineTorusMap> elements_;  // sorted, identity included
  std::vector<AffineTorusMap> gens_;
  std::vector<std::string> labels_;
  std::map<AffineTorusMap, std::size_t> index_;
};

// Map literal in the text form "(z2, -z1, z3+1/4)".
std::string format_map(const TorusShape& shape, const AffineTorusMap& f);
// Translation part of factor i as a value a + b*tau_i.
FactorValue factor_value(const RatVec& t, std::size_t i);

FiniteAffineGroup generate(const TorusShape& shape, const std::vector<AffineTorusMap>& gens, std::size_t cap = 512,
                           std::vector<std::string> labels = {});

}  // namespace cy
