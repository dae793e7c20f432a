#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace insfin {

/// Subsets of a finite ground set, indexed by element position.
using Subset = boost::dynamic_bitset<>;

inline Subset full_subset(std::size_t n) {
  Subset s(n);
  s.set();
  return s;
}

inline Subset subset_of_indices(std::size_t n, const std::vector<int>& idx) {
  Subset s(n);
  for (int i : idx) s.set(static_cast<std::size_t>(i));
  return s;
}

inline std::vector<int> subset_indices(const Subset& s) {
  std::vector<int> out;
  for (auto i = s.find_first(); i != Subset::npos; i = s.find_next(i))
    out.push_back(static_cast<int>(i));
  return out;
}

/// Preimage of `target` under the function `fn` (domain size fn.size()).
inline Subset preimage(const std::vector<int>& fn, const Subset& target) {
  Subset out(fn.size());
  for (std::size_t i = 0; i < fn.size(); ++i)
    if (target.test(static_cast<std::size_t>(fn[i]))) out.set(i);
  return out;
}

inline Subset image(const std::vector<int>& fn, const Subset& src, std::size_t cod) {
  Subset out(cod);
  for (auto i = src.find_first(); i != Subset::npos; i = src.find_next(i))
    out.set(static_cast<std::size_t>(fn[i]));
  return out;
}

/// "{a,b}" rendering with element names.
inline std::string show_subset(const Subset& s, const std::vector<std::string>& names) {
  std::string out = "{";
  bool first = true;
  for (auto i = s.find_first(); i != Subset::npos; i = s.find_next(i)) {
    if (!first) out += ",";
    out += names[i];
    first = false;
  }
  return out + "}";
}

/// Calls fn(subset) for every subset of an n-element set, in binary counting order.
inline void for_each_subset(std::size_t n, const std::function<void(const Subset&)>& fn) {
  if (n > 30) throw std::length_error("for_each_subset: ground too large");
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t bits = 0; bits < total; ++bits) fn(Subset(n, bits));
}

class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Refusal : public std::runtime_error {
 public:
  explicit Refusal(const std::string& guard)
      : std::runtime_error("too large: " + guard), guard_(guard) {}
  const std::string& guard() const { return guard_; }

 private:
  std::string guard_;
};

/// Search-space budget. Exceeding it aborts the whole computation.
class Guard {
 public:
  explicit Guard(std::uint64_t limit = 10'000'000, std::string name = "search space")
      : limit_(limit), name_(std::move(name)) {}

  void tick(std::uint64_t n = 1) {
    used_ += n;
    if (used_ > limit_) throw Refusal(name_ + " > " + std::to_string(limit_));
  }
  std::uint64_t used() const { return used_; }
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
  std::string name_;
};

enum class Status { valid, violations, refused, structural_error };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::valid: return "valid";
    case Status::violations: return "violations";
    case Status::refused: return "refused";
    case Status::structural_error: return "structural_error";
  }
  return "?";
}

enum class ItemKind { violation, structural, refusal };

struct Item {
  ItemKind kind = ItemKind::violation;
  std::string location;
  std::string law;
  std::vector<std::string> witnesses;

  bool operator==(const Item&) const = default;
};

struct Report {
  std::vector<Item> items;

  Status status() const {
    bool structural = false, violation = false;
    for (const auto& it : items) {
      if (it.kind == ItemKind::refusal) return Status::refused;
      if (it.kind == ItemKind::structural) structural = true;
      if (it.kind == ItemKind::violation) violation = true;
    }
    if (structural) return Status::structural_error;
    return violation ? Status::violations : Status::valid;
  }
  bool ok() const { return items.empty(); }

  void violation(std::string location, std::string law, std::vector<std::string> witnesses = {}) {
    items.push_back({ItemKind::violation, std::move(location), std::move(law), std::move(witnesses)});
  }
  void structural(std::string location, std::string law, std::vector<std::string> witnesses = {}) {
    items.push_back({ItemKind::structural, std::move(location), std::move(law), std::move(witnesses)});
  }
  void refuse(std::string guard) { items.push_back({ItemKind::refusal, "guard", std::move(guard), {}}); }

  void merge(const Report& other, const std::string& prefix = "") {
    for (auto it : other.items) {
      if (!prefix.empty()) it.location = prefix + (it.location.empty() ? "" : "/" + it.location);
      items.push_back(std::move(it));
    }
  }

  bool has_law(const std::string& law) const {
    for (const auto& it : items)
      if (it.law == law) return true;
    return false;
  }
};

/// Runs fn, converting thrown structural errors and refusals into report items.
inline Report guarded(const std::function<Report()>& fn) {
  try {
    return fn();
  } catch (const Refusal& r) {
    Report rep;
    rep.refuse(r.guard());
    return rep;
  } catch (const StructuralError& e) {
    Report rep;
    rep.structural("", e.what());
    return rep;
  }
}

}  // namespace insfin
