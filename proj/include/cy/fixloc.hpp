// Fixed loci of automorphisms of X = A/H computed upstairs on the torus,
// their orbits under finite groups, and a brute-force grid oracle.
#pragma once

#include "cy/families.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cy {

struct BadGrid : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A coset offset + direction_R of a saturated direction lattice, taken mod Z^m.
struct FixedComponent {
  Sublattice direction;
  RatVec offset;                          // canonical modulo direction + Z^m
  std::vector<AffineTorusMap> witnesses;  // the h with alpha(z) = h(z) on this component
  Complement comp;

  std::size_t dim_real() const { return direction.rank(); }
  bool contains(const RatVec& x) const;
  bool contains(const FixedComponent& other) const;
  std::pair<IntMat, RatVec> key() const { return {direction.basis(), offset}; }
};

// Canonical component through x with the given (saturated) direction.
FixedComponent make_component(const Sublattice& direction, const RatVec& x);
// Image g(C) of a component.
FixedComponent transform(const AffineTorusMap& g, const FixedComponent& c);

// Union over h in the covering group of {z : alpha(z) = h(z)}, with duplicate
// and contained components removed; sorted by key.
std::vector<FixedComponent> fixed_locus_upstairs(const AffineTorusMap& alpha, const FiniteAffineGroup& covering);

struct OrbitPartition {
  std::vector<std::size_t> orbit_of;                // component index -> orbit index
  std::vector<std::vector<std::size_t>> orbits;     // sorted by least member
  std::size_t count() const { return orbits.size(); }
};

// Orbits of the maps generated by gens acting on the component set.
// Throws ConsistencyError when a generator maps a component outside the set.
OrbitPartition identify_under_group(const std::vector<FixedComponent>& comps,
                                    const std::vector<AffineTorusMap>& gens);

struct DimensionProfile {
  std::size_t surfaces = 0;  // real dimension 4
  std::size_t curves = 0;    // real dimension 2
  std::size_t points = 0;    // real dimension 0
  std::size_t whole = 0;     // real dimension 6
};

struct FixedLocusReport {
  std::string label;
  std::vector<FixedComponent> components;  // upstairs
  OrbitPartition covering_orbits;          // components of Fix(alpha_X) on X
  std::optional<OrbitPartition> upsilon_orbits;
  DimensionProfile profile;                // counted on covering orbits
  std::size_t count() const { return covering_orbits.count(); }
};

FixedLocusReport fixed_locus_report(const FamilySetup& f, const AutClass& c);
// Orbits of Fix(alpha_X) under the group generated by H and the lifts of upsilon.
FixedLocusReport fixed_locus_in_quotient(const FamilySetup& f, const AutClass& c,
                                         const std::vector<AffineTorusMap>& upsilon_lifts);

bool is_free(const FamilySetup& f, const AutClass& c);

struct SurfaceFixingProfile {
  bool fixes_surfaces = false;
  bool fixes_curves = false;
  bool fixes_points = false;
};
SurfaceFixingProfile surface_fixing_profile(const FamilySetup& f, const AutClass& c);

// Points of ((1/N)Z/Z)^m encoded base N, first coordinate most significant.
using GridPoint = std::uint64_t;
GridPoint encode_grid(const RatVec& x, long n);
RatVec decode_grid(GridPoint p, std::size_t m, long n);

// All grid points x with alpha(x) = h(x) for some h in the covering group.
std::vector<GridPoint> brute_force_fixed_grid(const AffineTorusMap& alpha, const FiniteAffineGroup& covering, long n);
// Number of such points, without materializing them.
std::uint64_t brute_force_fixed_count(const AffineTorusMap& alpha, const FiniteAffineGroup& covering, long n);

// Grid points lying on a union of components.
std::vector<GridPoint> component_grid_points(const std::vector<FixedComponent>& comps, long n);

struct OracleCheck {
  bool agree = false;
  std::uint64_t solver_points = 0;
  std::uint64_t oracle_points = 0;
};
// Solver versus grid oracle for one automorphism lift.
OracleCheck check_against_grid(const AffineTorusMap& alpha, const FiniteAffineGroup& covering, long n);

// Named elliptic curves C^1 ... C^10 on A' for a translation t of the D4 family.
struct CurveLabel {
  int family = 0;                  // 1..10
  std::optional<FactorValue> sup;  // t1 superscript of families 5..8
  std::vector<FactorValue> params;
  friend bool operator<(const CurveLabel& a, const CurveLabel& b);
};

struct CurveMember {
  CurveLabel label;
  FixedComponent component;
};

std::vector<CurveMember> curve_family_members(const FamilySetup& f, const RatVec& t);
// Preferred label per covering orbit: least family, then diagonal members of C^1 and C^2,
// then lexicographic parameters. Orbits with no named member get no label.
std::vector<std::optional<CurveLabel>> orbit_labels(const FamilySetup& f, const RatVec& t,
                                                    const std::vector<FixedComponent>& comps,
                                                    const OrbitPartition& orbits);
// "C^1_{0,τ/2}", "C^{5,τ/2}_{0}"
std::string to_string(const FamilySetup& f, const CurveLabel& l);
// Plain description "(o1, o2, o3) + <d1, d2>" of a component.
std::string describe_component(const FamilySetup& f, const FixedComponent& c);

}  // namespace cy
