// Crystallographic groups Gamma of quotients X/Upsilon, the subgroup F generated by
// elements with fixed points, and the structure of Gamma/F.
#pragma once

#include "cy/families.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cy {

// x -> M_g x + v_g + lambda on R^m, with (M_g, v_g) the coset representative of g.
struct CrystalElement {
  std::size_t g = 0;
  IntVec lambda;
  friend bool operator==(const CrystalElement& a, const CrystalElement& b) {
    return a.g == b.g && a.lambda == b.lambda;
  }
  friend bool operator<(const CrystalElement& a, const CrystalElement& b) {
    return a.g != b.g ? a.g < b.g : a.lambda < b.lambda;
  }
};

class CrystalGroup {
public:
  // Extension of Z^m by the finite group generated by gens on the torus.
  CrystalGroup(const TorusShape& shape, std::vector<AffineTorusMap> gens, std::size_t cap);

  std::size_t rank() const { return shape_.real_dim(); }
  const TorusShape& shape() const { return shape_; }
  const FiniteAffineGroup& point() const { return point_; }
  std::size_t coset_count() const { return point_.order(); }
  const std::vector<std::size_t>& generator_indices() const { return gens_; }
  std::size_t identity_index() const { return identity_; }
  const IntMat& linear(std::size_t g) const { return point_[g].real_linear(); }
  // Representative translation in [0,1)^m.
  const RatVec& translation(std::size_t g) const { return point_[g].translation(); }

  std::size_t product_index(std::size_t a, std::size_t b) const;
  // v_a + M_a v_b - v_ab, an integer vector.
  const IntVec& correction(std::size_t a, std::size_t b) const;
  std::size_t inverse_index(std::size_t a) const;

  CrystalElement identity() const;
  CrystalElement coset_rep(std::size_t g) const;
  CrystalElement lattice_translation(const IntVec& lambda) const;
  CrystalElement multiply(const CrystalElement& x, const CrystalElement& y) const;
  CrystalElement inverse(const CrystalElement& x) const;
  RatVec full_translation(const CrystalElement& x) const;

private:
  TorusShape shape_;
  FiniteAffineGroup point_;
  std::vector<std::size_t> gens_;
  std::size_t identity_ = 0;
  mutable std::map<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, IntVec>> products_;
  mutable std::map<std::size_t, std::size_t> inverses_;
  const std::pair<std::size_t, IntVec>& product_entry(std::size_t a, std::size_t b) const;
};

// Gamma for X/Upsilon: covering generators followed by the Upsilon lifts.
// Throws ConsistencyError when the closure exceeds |H| * |Upsilon| cosets.
CrystalGroup build_gamma(const FamilySetup& f, const std::vector<AffineTorusMap>& upsilon_lifts,
                         std::size_t upsilon_order);

// (M - I)x = -v solvable over Q.
bool has_fixed_point(const CrystalGroup& gamma, const CrystalElement& x);

// F = subgroup generated by the elements with a fixed point.  It is the disjoint union of
// cosets certificate[k] * L over k in point_image.
struct FGamma {
  Sublattice lattice;                                  // F meet Z^m
  std::vector<std::size_t> point_image;                // sorted
  std::map<std::size_t, CrystalElement> certificates;  // one element of F over each k
  bool trivial() const { return point_image.size() == 1 && lattice.rank() == 0; }
  bool contains(const CrystalGroup& gamma, const CrystalElement& x) const;
};
FGamma f_gamma(const CrystalGroup& gamma);

// Abelianization of Gamma / F from the spanning-tree presentation.
QuotientInvariants abelianization(const CrystalGroup& gamma, const FGamma& f);
// Abelianization of Gamma itself.
QuotientInvariants abelianization(const CrystalGroup& gamma);

// Abelian invariants of a finite group given by its multiplication table.
QuotientInvariants table_abelianization(const std::vector<std::vector<std::size_t>>& table);
// "{0}", "Z/2", "Z/2 x Z/4", "D4", "Q8", else "order n, nonabelian".
std::string identify_finite_group(const std::vector<std::vector<std::size_t>>& table, std::size_t identity);

// Lattice (1/den) * S in Q^k with S in Hermite normal form.
struct RatLattice {
  std::vector<RatVec> basis;
  static RatLattice from_generators(std::size_t k, const std::vector<RatVec>& gens);
  std::size_t rank() const { return basis.size(); }
  bool contains(const RatVec& x) const;
  friend bool operator==(const RatLattice& a, const RatLattice& b) { return a.basis == b.basis; }
};
RatLattice scaled(const RatLattice& l, const Rat& c);
// Name among Λ3, Λ3', Λ3'', Λ3''' of a rank-2 lattice in (1, τ') coordinates, up to 2^j scaling.
std::optional<std::string> name_z3_lattice(const RatLattice& l);

enum class CoverClass { TypeA, TypeK, Finite, Unclassified };
std::string to_string(CoverClass c);

struct Pi1Descriptor {
  bool finite = false;
  std::optional<std::size_t> order;
  bool abelian = false;
  std::string label;  // finite groups
  QuotientInvariants abelianization;
  // infinite case
  std::size_t lattice_rank = 0;
  // V = R^m / (F meet Z^m) (x) R is the flat factor of the universal cover.
  RatLattice translations;                 // elements of pi1 acting as translations of V only
  std::vector<std::size_t> v_coordinates;  // real coordinates spanning V when it is a coordinate space
  std::optional<std::string> z3_lattice;   // name of the z3 section of translations
  std::size_t point_group_order = 0;       // linear parts acting on V
  std::size_t kernel_order = 0;            // elements acting trivially on V
  std::string point_quotient;              // pi1 / translations
  RatLattice normal_lattice;               // V-translations of elements with trivial linear part on V
  std::string normal_quotient;             // pi1 modulo a normal free abelian lift of normal_lattice
  CoverClass cover = CoverClass::Unclassified;
};

Pi1Descriptor pi1_quotient(const CrystalGroup& gamma, const FGamma& f);
Pi1Descriptor pi1_quotient(const CrystalGroup& gamma);
CoverClass classify_universal_cover(const Pi1Descriptor& d);

// Whether pi1 has a normal free abelian subgroup mapping onto the given sublattice of
// normal_lattice with quotient identified as label.
bool admits_sequence(const CrystalGroup& gamma, const FGamma& f, const RatLattice& lattice, const std::string& label);

// "{0}", "Z/2 x Z/4", "0->Λ3'''->π1->Z/2 x Z/2->0"
std::string to_string(const Pi1Descriptor& d);

}  // namespace cy
