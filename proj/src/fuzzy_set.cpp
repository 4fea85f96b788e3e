#include "fuzzynet/fuzzy_set.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "fuzzynet/error.hpp"

namespace fuzzynet {

double quantize(double value) {
  // printf rounds the exact binary value, so ties resolve half-even.
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", value);
  double out = std::strtod(buf, nullptr);
  return out == 0.0 ? 0.0 : out;  // no negative zero
}

Degree::Degree(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorCode::kDegreeOutOfRange,
                "degree " + std::to_string(value) + " is outside [0, 1]");
  }
}

FuzzySet::FuzzySet(std::initializer_list<std::pair<std::string_view, double>> entries) {
  for (const auto& [label, degree] : entries) set(Label(label), Degree(degree));
}

void FuzzySet::set(const Label& label, Degree degree) {
  if (degree.value() == 0.0) {
    entries_.erase(label);
  } else {
    entries_.insert_or_assign(label, degree);
  }
}

double FuzzySet::operator()(const Label& label) const {
  auto it = entries_.find(label);
  return it == entries_.end() ? 0.0 : it->second.value();
}

bool operator==(const FuzzySet& a, const FuzzySet& b) { return a.entries_ == b.entries_; }

FuzzySet intersect(const FuzzySet& a, const FuzzySet& b) {
  FuzzySet out;
  for (const auto& [label, degree] : a) {
    double other = b(label);
    if (other > 0.0) out.set(label, Degree(std::min(degree.value(), other)));
  }
  return out;
}

FuzzySet unite(const FuzzySet& a, const FuzzySet& b) {
  FuzzySet out = a;
  for (const auto& [label, degree] : b) {
    out.set(label, Degree(std::max(degree.value(), a(label))));
  }
  return out;
}

Degree height(const FuzzySet& a) {
  double best = 0.0;
  for (const auto& [label, degree] : a) best = std::max(best, degree.value());
  return Degree(best);
}

std::set<Label> support(const FuzzySet& a) {
  std::set<Label> out;
  for (const auto& [label, degree] : a) out.insert(label);
  return out;
}

bool pointwise_leq(const FuzzySet& a, const FuzzySet& b) {
  // Labels only in b satisfy a(x) = 0 <= b(x) trivially.
  return std::all_of(a.begin(), a.end(),
                     [&](const auto& entry) { return entry.second.value() <= b(entry.first); });
}

bool approx_equal(const FuzzySet& a, const FuzzySet& b) {
  if (a.size() != b.size()) return false;
  return std::all_of(a.begin(), a.end(), [&](const auto& entry) {
    auto it = b.entries().find(entry.first);
    return it != b.end() && std::abs(it->second.value() - entry.second.value()) <= kDegreeTolerance;
  });
}

}  // namespace fuzzynet
