#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pedacc/term.hpp"

namespace pedacc {

/// One hypothesis `name : type`. In CCr mode `witness` is an optional
/// user-supplied inhabitant of `type`, offered to product formation before
/// any search.
struct Entry {
  std::string name;
  Term type;
  std::optional<Term> witness;
};

/// Ordered telescope of named hypotheses. Entry i may mention only the names
/// of entries before it; names are pairwise distinct once well-formed.
class Environment {
 public:
  Environment() = default;
  explicit Environment(std::vector<Entry> entries) : entries_(std::move(entries)) {}

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Entry& operator[](std::size_t i) const { return entries_[i]; }
  const Entry& back() const { return entries_.back(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  const Entry* find(const std::string& name) const;
  std::optional<std::size_t> index_of(const std::string& name) const;
  bool contains(const std::string& name) const { return index_of(name).has_value(); }
  std::vector<std::string> names() const;

  Environment extended(std::string name, Term type, std::optional<Term> witness = std::nullopt) const;
  Environment prefix(std::size_t n) const;
  void push_back(Entry e) { entries_.push_back(std::move(e)); }

  /// Compares names and types; witness annotations are not part of judgments.
  friend bool operator==(const Environment& a, const Environment& b);

 private:
  std::vector<Entry> entries_;
};

/// A name derived from `hint` that is not bound in `env` and does not occur
/// free in `avoid`. Falls back to the reserved prefix when needed.
std::string fresh_name(const std::string& hint, const Environment& env, const Term& avoid);

}  // namespace pedacc
