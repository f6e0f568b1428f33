#include "pedacc/environment.hpp"

#include <cctype>

namespace pedacc {

const Entry* Environment::find(const std::string& name) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->name == name) return &*it;
  }
  return nullptr;
}

std::optional<std::size_t> Environment::index_of(const std::string& name) const {
  for (std::size_t i = entries_.size(); i-- > 0;) {
    if (entries_[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<std::string> Environment::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.name);
  return out;
}

Environment Environment::extended(std::string name, Term type, std::optional<Term> witness) const {
  Environment copy = *this;
  copy.entries_.push_back(Entry{std::move(name), std::move(type), std::move(witness)});
  return copy;
}

Environment Environment::prefix(std::size_t n) const {
  return Environment(std::vector<Entry>(entries_.begin(), entries_.begin() + static_cast<long>(n)));
}

bool operator==(const Environment& a, const Environment& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].name != b[i].name || a[i].type != b[i].type) return false;
  }
  return true;
}

namespace {

bool plain_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
  }
  return true;
}

}  // namespace

std::string fresh_name(const std::string& hint, const Environment& env, const Term& avoid) {
  auto taken = [&](const std::string& n) { return env.contains(n) || occurs_free(avoid, n); };
  if (plain_identifier(hint) && !taken(hint)) return hint;
  std::string base = std::string(1, kReservedPrefix) + (plain_identifier(hint) ? hint : "v");
  for (std::size_t k = env.size();; ++k) {
    std::string candidate = base + std::to_string(k);
    if (!taken(candidate)) return candidate;
  }
}

}  // namespace pedacc
