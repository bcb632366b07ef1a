#include "cy/torus.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace cy {

TorusPoint TorusPoint::reduced(const RatVec& v) { return TorusPoint{frac(v)}; }

std::string format_value(const FactorValue& v, const std::string& tag) {
  std::string out;
  if (v.re != 0)
    out = to_string(v.re);
  if (v.im != 0) {
    std::string num = v.im.get_num().get_str();
    std::string part;
    if (num == "1")
      part = tag;
    else if (num == "-1")
      part = "-" + tag;
    else
      part = num + tag;
    if (v.im.get_den() != 1)
      part += "/" + v.im.get_den().get_str();
    if (!out.empty() && part[0] != '-')
      out += "+";
    out += part;
  }
  return out.empty() ? "0" : out;
}

FactorValue factor_value(const RatVec& t, std::size_t i) { return {t.at(2 * i), t.at(2 * i + 1)}; }

std::string format_map(const TorusShape& shape, const AffineTorusMap& f) {
  std::string out = "(";
  const IntMat& c = f.complex_linear();
  for (std::size_t i = 0; i < shape.complex_dim(); ++i) {
    std::string comp;
    for (std::size_t j = 0; j < shape.complex_dim(); ++j) {
      const Int& a = c(i, j);
      if (a == 0)
        continue;
      std::string z = "z" + std::to_string(j + 1);
      std::string coef = a == 1 ? "" : a == -1 ? "-" : a.get_str() + "*";
      if (!comp.empty() && a > 0)
        comp += " + ";
      else if (!comp.empty()) {
        comp += " - ";
        coef = a == -1 ? "" : Int(-a).get_str() + "*";
      }
      comp += coef + z;
    }
    FactorValue v = factor_value(f.translation(), i);
    if (!(v.re == 0 && v.im == 0))
      comp += (comp.empty() ? "" : " + ") + format_value(v, shape.tags[i]);
    if (comp.empty())
      comp = "0";
    out += (i ? ", " : "") + comp;
  }
  return out + ")";
}

IntMat real_form(const IntMat& c) {
  IntMat m(2 * c.rows(), 2 * c.cols());
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) {
      m(2 * i, 2 * j) = c(i, j);
      m(2 * i + 1, 2 * j + 1) = c(i, j);
    }
  return m;
}

AffineTorusMap::AffineTorusMap(const TorusShape& shape, IntMat complex_linear, RatVec translation)
    : c_(std::move(complex_linear)), t_(frac(translation)) {
  std::size_t n = shape.complex_dim();
  if (c_.rows() != n || c_.cols() != n || t_.size() != 2 * n)
    throw DimensionError("map does not match torus dimension");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (c_(i, j) != 0 && !shape.shares_period(i, j))
        throw std::invalid_argument("linear part mixes factors " + std::to_string(i + 1) + " and " +
                                    std::to_string(j + 1) + " with different periods");
  m_ = real_form(c_);
  Int d = det(m_);
  if (d != 1 && d != -1)
    throw std::invalid_argument("linear part is not invertible over Z");
}

AffineTorusMap AffineTorusMap::identity(const TorusShape& shape) {
  return AffineTorusMap(shape, IntMat::identity(shape.complex_dim()), RatVec(shape.real_dim(), Rat(0)));
}

AffineTorusMap AffineTorusMap::translation_by(const TorusShape& shape, const RatVec& t) {
  return AffineTorusMap(shape, IntMat::identity(shape.complex_dim()), t);
}

bool AffineTorusMap::is_translation() const { return c_ == IntMat::identity(c_.rows()); }

bool AffineTorusMap::is_identity() const {
  return is_translation() && std::all_of(t_.begin(), t_.end(), [](const Rat& r) { return r == 0; });
}

RatVec AffineTorusMap::apply(const RatVec& x) const { return frac(m_ * x + t_); }

AffineTorusMap compose(const AffineTorusMap& f, const AffineTorusMap& g) {
  AffineTorusMap h;
  h.c_ = f.c_ * g.c_;
  h.m_ = f.m_ * g.m_;
  h.t_ = frac(f.m_ * g.t_ + f.t_);
  return h;
}

AffineTorusMap inverse(const AffineTorusMap& f) {
  AffineTorusMap h;
  h.c_ = inverse_unimodular(f.c_);
  h.m_ = real_form(h.c_);
  h.t_ = frac(-(h.m_ * f.t_));
  return h;
}

AffineTorusMap power(const AffineTorusMap& f, std::size_t k) {
  AffineTorusMap r = compose(f, inverse(f));
  for (std::size_t i = 0; i < k; ++i)
    r = compose(r, f);
  return r;
}

std::optional<std::size_t> order(const AffineTorusMap& f, std::size_t cap) {
  AffineTorusMap g = f;
  for (std::size_t k = 1; k <= cap; ++k) {
    if (g.is_identity())
      return k;
    g = compose(g, f);
  }
  return std::nullopt;
}

AffineTorusMap conjugate(const AffineTorusMap& g, const AffineTorusMap& by) {
  return compose(compose(by, g), inverse(by));
}

SolutionSet fixed_points(const AffineTorusMap& f) {
  return solve_affine_mod_lattice(f.real_linear(), f.translation());
}

bool has_fixed_point(const AffineTorusMap& f) { return !fixed_points(f).empty; }

VolumeAction volume_form_action(const AffineTorusMap& f) { return {det(f.complex_linear())}; }

Rat age_at_fixed_point(const AffineTorusMap& f) {
  const IntMat& c = f.complex_linear();
  std::size_t n = c.rows();
  if (!(c * c == IntMat::identity(n)))
    throw UnsupportedError("age is defined here for involutions only");
  if (!f.is_identity() && !(compose(f, f).is_identity()))
    throw UnsupportedError("age is defined here for involutions only");
  if (!has_fixed_point(f))
    throw UnsupportedError("age requires a fixed point");
  Int tr = 0;
  for (std::size_t i = 0; i < n; ++i)
    tr += c(i, i);
  // eigenvalues are +-1; the count of -1 is (n - trace)/2
  Int minus = (Int(static_cast<long>(n)) - tr) / 2;
  return make_rat(minus, 2);
}

FiniteAffineGroup::FiniteAffineGroup(TorusShape shape, std::vector<AffineTorusMap> elements,
                                     std::vector<AffineTorusMap> gens, std::vector<std::string> labels)
    : shape_(std::move(shape)), elements_(std::move(elements)), gens_(std::move(gens)), labels_(std::move(labels)) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  for (std::size_t i = 0; i < elements_.size(); ++i)
    index_.emplace(elements_[i], i);
}

std::size_t FiniteAffineGroup::index_of(const AffineTorusMap& f) const {
  auto it = index_.find(f);
  if (it == index_.end())
    throw ConsistencyError("element is not in the group");
  return it->second;
}

FiniteAffineGroup generate(const TorusShape& shape, const std::vector<AffineTorusMap>& gens, std::size_t cap,
                           std::vector<std::string> labels) {
  for (const auto& g : gens)
    if (g.real_dim() != shape.real_dim())
      throw DimensionError("generator does not match torus shape");
  std::map<AffineTorusMap, bool> seen;
  std::deque<AffineTorusMap> queue;
  AffineTorusMap id = AffineTorusMap::identity(shape);
  seen.emplace(id, true);
  queue.push_back(id);
  while (!queue.empty()) {
    AffineTorusMap x = queue.front();
    queue.pop_front();
    for (const auto& g : gens) {
      AffineTorusMap y = compose(x, g);
      if (seen.emplace(y, true).second) {
        if (seen.size() > cap)
          throw NotFiniteUnderCap("group order exceeds cap " + std::to_string(cap));
        queue.push_back(std::move(y));
      }
    }
  }
  std::vector<AffineTorusMap> elems;
  elems.reserve(seen.size());
  for (auto& kv : seen)
    elems.push_back(kv.first);
  return FiniteAffineGroup(shape, std::move(elems), gens, std::move(labels));
}

}  // namespace cy
