#pragma once

#include <initializer_list>
#include <map>
#include <set>
#include <string_view>
#include <utility>

#include "fuzzynet/label.hpp"

namespace fuzzynet {

/// Absolute tolerance for every equality comparison on degrees and scores.
inline constexpr double kDegreeTolerance = 1e-9;

/// Rounds to 9 fractional digits (the precision of every persisted degree
/// and score).
double quantize(double value);

/// Membership degree in [0, 1]; out-of-range values are rejected.
class Degree {
 public:
  constexpr Degree() = default;
  explicit Degree(double value);

  constexpr double value() const noexcept { return value_; }
  constexpr operator double() const noexcept { return value_; }

  friend constexpr bool operator==(const Degree&, const Degree&) = default;

 private:
  double value_ = 0.0;
};

/// Discrete fuzzy set: normalized label -> degree. Zero degrees are never
/// stored, so every stored degree lies in (0, 1].
class FuzzySet {
 public:
  using Map = std::map<Label, Degree>;

  FuzzySet() = default;
  FuzzySet(std::initializer_list<std::pair<std::string_view, double>> entries);

  /// Sets the degree of `label`; a zero degree removes the entry.
  void set(const Label& label, Degree degree);
  /// Membership of `label`, 0 when absent.
  double operator()(const Label& label) const;

  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }
  const Map& entries() const noexcept { return entries_; }
  Map::const_iterator begin() const noexcept { return entries_.begin(); }
  Map::const_iterator end() const noexcept { return entries_.end(); }

  friend bool operator==(const FuzzySet&, const FuzzySet&);

 private:
  Map entries_;
};

/// Pointwise minimum; labels missing on either side drop out.
FuzzySet intersect(const FuzzySet& a, const FuzzySet& b);
/// Pointwise maximum.
FuzzySet unite(const FuzzySet& a, const FuzzySet& b);
/// Largest stored degree, 0 for the empty set.
Degree height(const FuzzySet& a);
std::set<Label> support(const FuzzySet& a);
/// True iff a(x) <= b(x) for every label x in either support.
bool pointwise_leq(const FuzzySet& a, const FuzzySet& b);
/// Same support and every degree within kDegreeTolerance.
bool approx_equal(const FuzzySet& a, const FuzzySet& b);

}  // namespace fuzzynet
