// The two families of type-A threefolds: covering groups, automorphism groups,
// free automorphisms, moduli dimension and the degree-two moduli map.
#pragma once

#include "cy/torus.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cy {

enum class FamilyTag { D4, Z2Z2 };
std::string to_string(FamilyTag tag);

struct InvalidParameters : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotFree : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FamilySetup {
  FamilyTag tag = FamilyTag::D4;
  TorusShape shape;
  FiniteAffineGroup covering;
  std::vector<FactorValue> u;  // torsion parameters u1, u2, u3
  // Z2Z2 only: factors pairwise non-isogenous; without it the Aut count is a lower bound.
  bool non_isogenous = true;
};

TorusShape d4_shape();
TorusShape z2_shape();

// u1, u2 in E[2] with (u1,u2) != (0,0) and u1 != u2, u3 in E'[4] \ {0}.
FamilySetup build_d4(const FactorValue& u1, const FactorValue& u2, const FactorValue& u3);
// u1 = (tau+1)/2, u2 = tau/2, u3 = 1/4
FamilySetup build_d4();
// u_j in E_j[2] \ {0}.
FamilySetup build_z2(const FactorValue& u1, const FactorValue& u2, const FactorValue& u3, bool non_isogenous = true);
// u_j = 1/2
FamilySetup build_z2(bool non_isogenous = true);

struct AutClass {
  AffineTorusMap rep;                              // lex-least element of the coset
  std::optional<AffineTorusMap> translation_rep;   // lex-least translation in the coset
  std::vector<AffineTorusMap> lifts;               // the whole coset, sorted
  std::size_t order = 1;                           // order in Aut(X)
  Int det = 1;                                     // determinant of the complex linear part
  bool volume_preserving() const { return det == 1; }
  bool identity = false;                           // the coset of the covering group itself
  bool free_closed_form = false;
};

struct AutGroupDescription {
  std::vector<AffineTorusMap> normalizer_elements;  // sorted
  std::vector<AutClass> classes;                    // identity first, then translation classes, then the rest
  std::size_t quotient_order = 0;
  std::size_t exponent = 1;
  bool lower_bound = false;
  std::map<AffineTorusMap, std::size_t> element_class;

  // Index of the class containing a normalizer element.
  std::size_t class_of(const AffineTorusMap& f) const;
  std::size_t identity_class() const { return 0; }
  // Class of the product of two classes.
  std::size_t multiply(std::size_t a, std::size_t b) const;
};

AutGroupDescription automorphism_group(const FamilySetup& f);

// Subgroup of Aut(X) as a set of class indices.
struct AutSubgroup {
  std::vector<std::size_t> generators;  // greedy over sorted elements, so canonical
  std::vector<std::size_t> elements;    // sorted, identity class first
  std::size_t order() const { return elements.size(); }
  bool contains(std::size_t c) const;
  bool volume_preserving(const AutGroupDescription& aut) const;
};

AutSubgroup generate_subgroup(const AutGroupDescription& aut, const std::vector<std::size_t>& gens);
// All subgroups of order at most max_order, sorted by order then generator tuple.
std::vector<AutSubgroup> all_subgroups(const AutGroupDescription& aut, std::size_t max_order);
// One lift per generator: the translation representative when there is one.
std::vector<AffineTorusMap> generator_lifts(const AutGroupDescription& aut, const AutSubgroup& u);
// Class indices of the free automorphisms by the closed-form criteria.
std::vector<std::size_t> free_automorphisms(const FamilySetup& f, const AutGroupDescription& aut);
// Closed-form freeness criterion for one class.
bool free_closed_form(const FamilySetup& f, const AutClass& c);

// Short label: the translation values for translation classes, the map literal otherwise.
std::string class_label(const FamilySetup& f, const AutClass& c);

// (1/|G|) sum |tr C_g|^2, the dimension of the space of invariant complex structures.
std::size_t moduli_dimension(const FiniteAffineGroup& g);
std::size_t moduli_dimension(const FamilySetup& f);

// a*mu' + b
struct AffineExpr {
  Rat a = 1;
  Rat b = 0;
  friend bool operator==(const AffineExpr& x, const AffineExpr& y) { return x.a == y.a && x.b == y.b; }
};

struct ModuliLabel {
  FamilyTag tag = FamilyTag::D4;
  AffineExpr second;
  // Equal up to an integer translation of the period expression.
  bool equivalent(const ModuliLabel& o) const;
};

std::string to_string(const AffineExpr& e);
// "(mu, 2*mu')"
std::string to_string(const ModuliLabel& m);
ModuliLabel double_cover_map(const ModuliLabel& m);
std::pair<ModuliLabel, ModuliLabel> preimages(const ModuliLabel& m);

}  // namespace cy
