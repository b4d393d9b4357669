#pragma once

/**
 * @file map.hpp
 * @brief Immutable descriptors of holomorphic maps.
 *
 * A MapDescriptor is a small expression tree over Mobius maps, formulas,
 * conjugations, compositions, iterates, semigroup elements and model
 * conjugates h^{-1} o g o h. Every node evaluates on dual numbers, so the
 * derivative of the whole tree is exact up to rounding.
 */

#include <array>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "core.hpp"
#include "formula.hpp"
#include "koenigs_map.hpp"
#include "mobius.hpp"
#include "semigroup.hpp"

namespace holodyn {

class MapDescriptor;

namespace node {
struct Identity {};
struct Mobius {
  MobiusMap m;
  Domain domain;
  std::array<cplx, 4> given;  // coefficients as supplied, before normalization
};
struct Formula {
  formula::Expr expr;
  std::string text;
  Domain domain;
};
struct Conjugate {  // outer^{-1} o inner o outer
  MobiusMap outer;
  std::shared_ptr<const MapDescriptor> inner;
  Domain domain;
  std::array<cplx, 4> given;
};
struct Compose {  // maps[0] o maps[1] o ...
  std::vector<MapDescriptor> maps;
};
struct Iterate {
  std::shared_ptr<const MapDescriptor> base;
  unsigned n;
};
struct SemigroupElement {
  SemigroupSpec spec;
  double t;
};
struct ModelConjugate {  // h^{-1} o g o h
  KoenigsPtr koenigs;
  std::shared_ptr<const MapDescriptor> g;
};
struct KoenigsInverse {  // h^{-1} on Omega
  KoenigsPtr koenigs;
};
}  // namespace node

class MapDescriptor {
 public:
  using Node = std::variant<node::Identity, node::Mobius, node::Formula, node::Conjugate,
                            node::Compose, node::Iterate, node::SemigroupElement,
                            node::ModelConjugate, node::KoenigsInverse>;

  MapDescriptor() : node_(std::make_shared<const Node>(node::Identity{})) {}

  static MapDescriptor identity() { return MapDescriptor(); }
  static MapDescriptor mobius(const MobiusMap& m, Domain d = Domain::disc) {
    return MapDescriptor(node::Mobius{m, d, {m.a(), m.b(), m.c(), m.d()}});
  }
  static MapDescriptor mobius(cplx a, cplx b, cplx c, cplx d, Domain dom = Domain::disc) {
    return MapDescriptor(node::Mobius{MobiusMap(a, b, c, d), dom, {a, b, c, d}});
  }
  static MapDescriptor formula(const std::string& text, Domain d = Domain::disc) {
    return MapDescriptor(node::Formula{formula::parse(text), text, d});
  }
  static MapDescriptor formula(const formula::Expr& e, Domain d = Domain::disc) {
    return MapDescriptor(node::Formula{e, formula::to_string(e), d});
  }
  static MapDescriptor conjugate(const MobiusMap& outer, const MapDescriptor& inner,
                                 Domain d = Domain::disc) {
    return MapDescriptor(node::Conjugate{outer, std::make_shared<const MapDescriptor>(inner), d,
                                         {outer.a(), outer.b(), outer.c(), outer.d()}});
  }
  static MapDescriptor conjugate(const std::array<cplx, 4>& outer, const MapDescriptor& inner,
                                 Domain d = Domain::disc) {
    return MapDescriptor(node::Conjugate{MobiusMap(outer[0], outer[1], outer[2], outer[3]),
                                         std::make_shared<const MapDescriptor>(inner), d, outer});
  }
  static MapDescriptor compose(std::vector<MapDescriptor> maps) {
    if (maps.empty()) return identity();
    if (maps.size() == 1) return maps.front();
    return MapDescriptor(node::Compose{std::move(maps)});
  }
  static MapDescriptor semigroup_element(const SemigroupSpec& s, double t) {
    if (t < 0.0) throw Error(Errc::invalid_argument, "negative semigroup time");
    return MapDescriptor(node::SemigroupElement{s, t});
  }
  static MapDescriptor model_conjugate(KoenigsPtr h, const MapDescriptor& g) {
    return MapDescriptor(node::ModelConjugate{std::move(h), std::make_shared<const MapDescriptor>(g)});
  }
  static MapDescriptor koenigs_inverse(KoenigsPtr h) { return MapDescriptor(node::KoenigsInverse{std::move(h)}); }
  /// Iterate(base, n); iterates of semigroup elements stay semigroup elements.
  static MapDescriptor iterate(const MapDescriptor& base, unsigned n) {
    if (n == 0) return identity();
    if (n == 1) return base;
    if (auto* se = std::get_if<node::SemigroupElement>(base.node_.get()))
      return semigroup_element(se->spec, se->t * n);
    if (auto* mb = std::get_if<node::Mobius>(base.node_.get())) {
      MobiusMap acc;
      for (unsigned k = 0; k < n; ++k) acc = acc.compose(mb->m);
      return mobius(acc, mb->domain);
    }
    return MapDescriptor(node::Iterate{std::make_shared<const MapDescriptor>(base), n});
  }

  const Node& node() const { return *node_; }

  template <class T>
  const T* as() const { return std::get_if<T>(node_.get()); }

  Domain domain() const {
    return std::visit(
        [](const auto& n) -> Domain {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, node::Identity>) return Domain::plane;
          else if constexpr (std::is_same_v<T, node::Mobius> || std::is_same_v<T, node::Formula> ||
                             std::is_same_v<T, node::Conjugate>)
            return n.domain;
          else if constexpr (std::is_same_v<T, node::Compose>) return n.maps.back().domain();
          else if constexpr (std::is_same_v<T, node::Iterate>) return n.base->domain();
          else if constexpr (std::is_same_v<T, node::SemigroupElement>) return Domain::disc;
          else if constexpr (std::is_same_v<T, node::KoenigsInverse>) return Domain::plane;
          else return n.koenigs->domain();
        },
        *node_);
  }

  DualValue eval_dual(const DualValue& z) const {
    return std::visit([&](const auto& n) { return apply(n, z); }, *node_);
  }

  cplx operator()(cplx z) const { return eval_dual(DualValue::constant(z)).value; }
  cplx eval(cplx z) const { return (*this)(z); }
  cplx derivative(cplx z) const { return eval_dual(DualValue::variable(z)).deriv; }

 private:
  explicit MapDescriptor(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

  static void check(Domain d, cplx z) {
    if (d != Domain::plane && !in_domain(d, z))
      throw Error(Errc::outside_domain, std::string("argument outside the ") + domain_name(d));
  }

  static DualValue apply(const node::Identity&, const DualValue& z) { return z; }
  static DualValue apply(const node::Mobius& n, const DualValue& z) { return n.m(z); }
  static DualValue apply(const node::Formula& n, const DualValue& z) {
    check(n.domain, z.value);
    return formula::eval_dual(n.expr, z);
  }
  static DualValue apply(const node::Conjugate& n, const DualValue& z) {
    return n.outer.inverse()(n.inner->eval_dual(n.outer(z)));
  }
  static DualValue apply(const node::Compose& n, const DualValue& z) {
    DualValue w = z;
    for (auto it = n.maps.rbegin(); it != n.maps.rend(); ++it) w = it->eval_dual(w);
    return w;
  }
  static DualValue apply(const node::Iterate& n, const DualValue& z) {
    DualValue w = z;
    for (unsigned k = 0; k < n.n; ++k) w = n.base->eval_dual(w);
    return w;
  }
  static DualValue apply(const node::SemigroupElement& n, const DualValue& z) {
    return n.spec.flow_dual(n.t, z);
  }
  static DualValue apply(const node::ModelConjugate& n, const DualValue& z) {
    return n.koenigs->invert_dual(n.g->eval_dual(n.koenigs->eval_dual(z)));
  }
  static DualValue apply(const node::KoenigsInverse& n, const DualValue& w) { return n.koenigs->invert_dual(w); }

  std::shared_ptr<const Node> node_;
};

inline cplx eval(const MapDescriptor& m, cplx z) { return m(z); }
inline cplx derivative(const MapDescriptor& m, cplx z) { return m.derivative(z); }
inline MapDescriptor iterate_n(const MapDescriptor& m, unsigned n) { return MapDescriptor::iterate(m, n); }

/// Applies m n times starting at z, without building a descriptor.
inline cplx orbit_point(const MapDescriptor& m, cplx z, unsigned n) {
  for (unsigned k = 0; k < n; ++k) z = m(z);
  return z;
}

/// C o m o C^{-1}: the map m read in the chart C. Conjugations by C and
/// model conjugates over C-precomposed Koenigs maps are unwrapped
/// symbolically, so half-plane dynamics near the chart's pole stay exact.
inline MapDescriptor chart_form(const MapDescriptor& m, const MobiusMap& C) {
  auto same = [](const MobiusMap& a, const MobiusMap& b) {
    return std::abs(a.a() - b.a()) + std::abs(a.b() - b.b()) + std::abs(a.c() - b.c()) +
               std::abs(a.d() - b.d()) < 1e-13 ||
           std::abs(a.a() + b.a()) + std::abs(a.b() + b.b()) + std::abs(a.c() + b.c()) +
               std::abs(a.d() + b.d()) < 1e-13;
  };
  if (auto* c = m.as<node::Conjugate>(); c && same(c->outer, C)) return *c->inner;
  if (auto* mc = m.as<node::ModelConjugate>()) {
    if (auto* ak = dynamic_cast<const AffineKoenigs*>(mc->koenigs.get());
        ak && ak->pre() && same(*ak->pre(), C)) {
      auto bare = std::make_shared<AffineKoenigs>(ak->inner(), std::nullopt, ak->scale(), ak->shift(),
                                                  ak->base_space(), ak->omega());
      return MapDescriptor::model_conjugate(bare, *mc->g);
    }
  }
  if (auto* it = m.as<node::Iterate>()) return MapDescriptor::iterate(chart_form(*it->base, C), it->n);
  if (auto* cm = m.as<node::Compose>()) {
    std::vector<MapDescriptor> parts;
    for (const auto& p : cm->maps) parts.push_back(chart_form(p, C));
    return MapDescriptor::compose(std::move(parts));
  }
  if (m.as<node::Identity>()) return m;
  if (auto* mb = m.as<node::Mobius>())
    return MapDescriptor::mobius(C.compose(mb->m).compose(C.inverse()), Domain::plane);
  return MapDescriptor::conjugate(C.inverse(), m, Domain::plane);
}

}  // namespace holodyn
