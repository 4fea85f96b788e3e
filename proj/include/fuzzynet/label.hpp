#pragma once

#include <compare>
#include <functional>
#include <string>
#include <string_view>

namespace fuzzynet {

/// Lowercases, trims surrounding whitespace and collapses internal
/// whitespace runs to one space. Hyphens and all other bytes are kept.
/// Throws Error(kEmptyLabel) when nothing is left.
std::string normalize_label_text(std::string_view raw);

/// A normalized name from a discrete universe (value labels, attribute and
/// facet names, entity names). Two labels are equal iff their normalized
/// bytes are identical.
class Label {
 public:
  Label() = default;
  explicit Label(std::string_view raw) : text_(normalize_label_text(raw)) {}

  const std::string& text() const noexcept { return text_; }
  bool empty() const noexcept { return text_.empty(); }

  friend bool operator==(const Label&, const Label&) = default;
  friend auto operator<=>(const Label&, const Label&) = default;

 private:
  std::string text_;
};

inline Label normalize_label(std::string_view raw) { return Label(raw); }

}  // namespace fuzzynet

template <>
struct std::hash<fuzzynet::Label> {
  size_t operator()(const fuzzynet::Label& l) const noexcept {
    return std::hash<std::string>{}(l.text());
  }
};
