// Hodge numbers of X and of crepant resolutions of X/Upsilon, Euler characteristics,
// Picard groups and the classification of quotients.
#pragma once

#include "cy/fixloc.hpp"
#include "cy/pi1.hpp"

#include <string>
#include <vector>

namespace cy {

struct HodgeDiamondSlice {
  int h10 = 0, h20 = 0, h30 = 0, h11 = 0, h21 = 0;
  friend bool operator==(const HodgeDiamondSlice& a, const HodgeDiamondSlice& b) {
    return a.h10 == b.h10 && a.h20 == b.h20 && a.h30 == b.h30 && a.h11 == b.h11 && a.h21 == b.h21;
  }
};

// Sum of the principal p x p minors of c, the trace of its p-th exterior power.
Int exterior_trace(const IntMat& c, std::size_t p);
// (1/|G|) sum_g tr(L^p C_g) tr(L^q conj C_g); throws ConsistencyError when not integral.
int invariant_hodge(const FiniteAffineGroup& g, std::size_t p, std::size_t q);
HodgeDiamondSlice invariant_hodge_slice(const FiniteAffineGroup& g);

// Group on the torus generated by the covering group and the lifts of Upsilon.
FiniteAffineGroup upsilon_cover_group(const FamilySetup& f, const AutGroupDescription& aut, const AutSubgroup& u);

// Sum over nontrivial volume-preserving alpha in Upsilon of the number of components of
// Fix(alpha_X) modulo Upsilon.
int twisted_curve_sum(const FamilySetup& f, const AutGroupDescription& aut, const AutSubgroup& u);

// Isolated fixed points of the non-symplectic elements, counted modulo Upsilon.
// Throws UnsupportedError unless Z2Z2 with a non-volume-preserving element.
int isolated_point_count(const FamilySetup& f, const AutGroupDescription& aut, const AutSubgroup& u);
// 2^(|Upsilon|+2) / (|Upsilon| - 1), reported next to the direct count.
Rat isolated_point_formula(std::size_t upsilon_order);

HodgeDiamondSlice orbifold_hodge(const FamilySetup& f, const AutGroupDescription& aut, const AutSubgroup& u);

// 2 - 4h10 + 4h20 + 2h11 - 2h30 - 2h21
int euler_char(const HodgeDiamondSlice& h);

enum class QuotientClass { CrepantCalabiYau, NegativeKodaira, ZeroKodairaNontrivialCanonical, SmoothFreeQuotient };
std::string to_string(QuotientClass c);

struct PicardStructure {
  int rank = 0;
  std::vector<Int> torsion;
};

struct QuotientReport {
  QuotientClass classification = QuotientClass::CrepantCalabiYau;
  HodgeDiamondSlice hodge;
  int euler = 0;
  Pi1Descriptor pi1;
  PicardStructure picard;
};

QuotientClass quotient_class(const FamilySetup& f, const AutGroupDescription& aut, const AutSubgroup& u);
QuotientReport classify_quotient(const FamilySetup& f, const AutGroupDescription& aut, const AutSubgroup& u);

// Pic(X): rank h11(X), torsion of the abelianized fundamental group.
PicardStructure picard_structure(const FamilySetup& f);

}  // namespace cy
