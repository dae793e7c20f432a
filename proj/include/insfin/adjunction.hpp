#pragma once

#include "insfin/common.hpp"

#include <concepts>
#include <functional>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

namespace insfin {

/// A category accessed through its operations, possibly large (Cat, πIns_co, ...).
template <class K>
concept CategoryModel = requires(const K& k, const typename K::object& o, const typename K::arrow& a) {
  { k.identity(o) } -> std::convertible_to<typename K::arrow>;
  { k.compose(a, a) } -> std::convertible_to<typename K::arrow>;
  { k.equal(a, a) } -> std::convertible_to<bool>;
  { k.name(o) } -> std::convertible_to<std::string>;
};

/// f ⊣ g between C and D: f = left (C → D), g = right (D → C).
template <CategoryModel C, CategoryModel D>
struct AdjunctionDatum {
  using CO = typename C::object;
  using CA = typename C::arrow;
  using DO = typename D::object;
  using DA = typename D::arrow;

  std::string lower;  // name of C
  std::string upper;  // name of D
  std::function<DO(const CO&)> left_obj;
  std::function<DA(const CA&)> left_arr;
  std::function<CO(const DO&)> right_obj;
  std::function<CA(const DA&)> right_arr;
  std::function<CA(const CO&)> unit;    // η_c : c → g f c
  std::function<DA(const DO&)> counit;  // ε_d : f g d → d
};

/// Triangle identities checked componentwise on the given objects.
template <CategoryModel C, CategoryModel D>
Report check_triangles(const C& c, const D& d, const AdjunctionDatum<C, D>& a,
                       const std::vector<typename C::object>& cs, const std::vector<typename D::object>& ds) {
  return guarded([&] {
    Report rep;
    for (const auto& x : cs) {
      auto fx = a.left_obj(x);
      auto lhs = d.compose(a.counit(fx), a.left_arr(a.unit(x)));
      if (!d.equal(lhs, d.identity(fx))) rep.violation(c.name(x), "triangle (εf)∘(fη) = 1_f", {d.name(fx)});
    }
    for (const auto& y : ds) {
      auto gy = a.right_obj(y);
      auto lhs = c.compose(a.right_arr(a.counit(y)), a.unit(gy));
      if (!c.equal(lhs, c.identity(gy))) rep.violation(d.name(y), "triangle (gε)∘(ηg) = 1_g", {c.name(gy)});
    }
    return rep;
  });
}

/// Composite of f1 ⊣ g1 (C ⇄ D) and f2 ⊣ g2 (D2 ⇄ E); requires D2 = D.
template <CategoryModel C, CategoryModel D, CategoryModel D2, CategoryModel E>
AdjunctionDatum<C, E> compose_adjunctions(const C& c, const E& e, const AdjunctionDatum<C, D>& a1,
                                          const AdjunctionDatum<D2, E>& a2) {
  if constexpr (!std::is_same_v<D, D2>) {
    throw StructuralError("adjunction boundary mismatch: " + a1.upper + " vs " + a2.lower);
  } else {
    if (a1.upper != a2.lower) throw StructuralError("adjunction boundary mismatch: " + a1.upper + " vs " + a2.lower);
    AdjunctionDatum<C, E> out;
    out.lower = a1.lower;
    out.upper = a2.upper;
    out.left_obj = [a1, a2](const auto& x) { return a2.left_obj(a1.left_obj(x)); };
    out.left_arr = [a1, a2](const auto& f) { return a2.left_arr(a1.left_arr(f)); };
    out.right_obj = [a1, a2](const auto& z) { return a1.right_obj(a2.right_obj(z)); };
    out.right_arr = [a1, a2](const auto& h) { return a1.right_arr(a2.right_arr(h)); };
    out.unit = [a1, a2, c](const auto& x) {
      return c.compose(a1.right_arr(a2.unit(a1.left_obj(x))), a1.unit(x));
    };
    out.counit = [a1, a2, e](const auto& z) {
      return e.compose(a2.counit(z), a2.left_arr(a1.counit(a2.right_obj(z))));
    };
    return out;
  }
}

struct HomBijection {
  std::size_t left = 0;   // |Hom(L x, y)|
  std::size_t right = 0;  // |Hom(x, R y)|
  Report report;
};

/// Verifies that the transposes are mutually inverse bijections between two enumerated hom-sets.
template <class A, class B>
HomBijection hom_bijection(const std::vector<A>& lhs, const std::vector<B>& rhs,
                           const std::function<std::optional<B>(const A&)>& to_right,
                           const std::function<std::optional<A>(const B&)>& to_left, const std::string& where) {
  HomBijection out{lhs.size(), rhs.size(), {}};
  auto contains = [](const auto& v, const auto& x) {
    for (const auto& y : v)
      if (y == x) return true;
    return false;
  };
  if (lhs.size() != rhs.size())
    out.report.violation(where, "hom-set cardinality", {std::to_string(lhs.size()), std::to_string(rhs.size())});
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    auto b = to_right(lhs[i]);
    if (!b) {
      out.report.violation(where, "transpose undefined", {"left#" + std::to_string(i)});
      continue;
    }
    if (!contains(rhs, *b)) out.report.violation(where, "transpose leaves hom-set", {"left#" + std::to_string(i)});
    auto back = to_left(*b);
    if (!back || !(*back == lhs[i]))
      out.report.violation(where, "transposes not inverse", {"left#" + std::to_string(i)});
  }
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    auto a = to_left(rhs[i]);
    if (!a) {
      out.report.violation(where, "transpose undefined", {"right#" + std::to_string(i)});
      continue;
    }
    if (!contains(lhs, *a)) out.report.violation(where, "transpose leaves hom-set", {"right#" + std::to_string(i)});
    auto back = to_right(*a);
    if (!back || !(*back == rhs[i]))
      out.report.violation(where, "transposes not inverse", {"right#" + std::to_string(i)});
  }
  return out;
}

}  // namespace insfin
