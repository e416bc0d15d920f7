#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace mdrkit {

using Count = boost::multiprecision::cpp_int;

// Finite multiset stored as a sorted vector of (element, positive multiplicity).
template <class E, class Less = std::less<E>>
class Multiset {
 public:
  using Entry = std::pair<E, Count>;

  Multiset() = default;
  Multiset(std::initializer_list<E> elems) {
    for (const auto& e : elems) insert(e);
  }
  template <class It>
  Multiset(It first, It last) {
    for (; first != last; ++first) insert(*first);
  }

  static Multiset from_entries(std::vector<Entry> entries) {
    Multiset m;
    for (auto& [e, n] : entries) m.insert(e, n);
    return m;
  }

  void insert(const E& e, const Count& n = 1) {
    if (n <= 0) return;
    auto it = lower(e);
    if (it != entries_.end() && equal(it->first, e)) {
      it->second += n;
    } else {
      entries_.insert(it, Entry{e, n});
    }
  }

  // Removes up to n copies; returns false if fewer than n were present.
  bool erase(const E& e, const Count& n = 1) {
    auto it = lower(e);
    if (it == entries_.end() || !equal(it->first, e)) return n <= 0;
    if (it->second < n) {
      entries_.erase(it);
      return false;
    }
    it->second -= n;
    if (it->second == 0) entries_.erase(it);
    return true;
  }

  Count count(const E& e) const {
    auto it = lower(e);
    if (it != entries_.end() && equal(it->first, e)) return it->second;
    return 0;
  }
  bool contains(const E& e) const { return count(e) > 0; }

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t distinct() const { return entries_.size(); }

  Count size() const {
    Count total = 0;
    for (const auto& [e, n] : entries_) total += n;
    return total;
  }

  // Cardinality as a machine integer, for callers that enumerate elements.
  std::size_t small_size() const { return static_cast<std::size_t>(size()); }

  std::vector<E> root() const {
    std::vector<E> out;
    out.reserve(entries_.size());
    for (const auto& [e, n] : entries_) out.push_back(e);
    return out;
  }

  // Elements listed with repetition, in canonical order.
  std::vector<E> expand() const {
    std::vector<E> out;
    for (const auto& [e, n] : entries_)
      for (Count i = 0; i < n; ++i) out.push_back(e);
    return out;
  }

  friend bool operator==(const Multiset& a, const Multiset& b) {
    if (a.entries_.size() != b.entries_.size()) return false;
    for (std::size_t i = 0; i < a.entries_.size(); ++i) {
      if (!equal(a.entries_[i].first, b.entries_[i].first) ||
          a.entries_[i].second != b.entries_[i].second)
        return false;
    }
    return true;
  }
  friend bool operator!=(const Multiset& a, const Multiset& b) { return !(a == b); }

  // Arbitrary total order on canonical forms (not the submultiset order).
  friend bool operator<(const Multiset& a, const Multiset& b) {
    Less less;
    std::size_t n = std::min(a.entries_.size(), b.entries_.size());
    for (std::size_t i = 0; i < n; ++i) {
      const auto& x = a.entries_[i];
      const auto& y = b.entries_[i];
      if (less(x.first, y.first)) return true;
      if (less(y.first, x.first)) return false;
      if (x.second != y.second) return x.second > y.second;
    }
    return a.entries_.size() < b.entries_.size();
  }

 private:
  static bool equal(const E& a, const E& b) {
    Less less;
    return !less(a, b) && !less(b, a);
  }
  typename std::vector<Entry>::iterator lower(const E& e) {
    return std::lower_bound(entries_.begin(), entries_.end(), e,
                            [](const Entry& x, const E& v) { return Less{}(x.first, v); });
  }
  typename std::vector<Entry>::const_iterator lower(const E& e) const {
    return std::lower_bound(entries_.begin(), entries_.end(), e,
                            [](const Entry& x, const E& v) { return Less{}(x.first, v); });
  }

  std::vector<Entry> entries_;
};

template <class E, class L>
Multiset<E, L> sum(const Multiset<E, L>& x, const Multiset<E, L>& y) {
  Multiset<E, L> out = x;
  for (const auto& [e, n] : y.entries()) out.insert(e, n);
  return out;
}

template <class E, class L>
Multiset<E, L> operator+(const Multiset<E, L>& x, const Multiset<E, L>& y) {
  return sum(x, y);
}

template <class E, class L>
bool submultiset(const Multiset<E, L>& x, const Multiset<E, L>& y) {
  if (x.distinct() > y.distinct()) return false;
  for (const auto& [e, n] : x.entries())
    if (y.count(e) < n) return false;
  return true;
}

template <class E, class L>
Multiset<E, L> join(const Multiset<E, L>& x, const Multiset<E, L>& y) {
  Multiset<E, L> out = x;
  for (const auto& [e, n] : y.entries()) {
    Count have = x.count(e);
    if (n > have) out.insert(e, n - have);
  }
  return out;
}

template <class E, class L>
Multiset<E, L> meet(const Multiset<E, L>& x, const Multiset<E, L>& y) {
  Multiset<E, L> out;
  for (const auto& [e, n] : x.entries()) {
    Count m = y.count(e);
    out.insert(e, n < m ? n : m);
  }
  return out;
}

template <class E, class L>
Multiset<E, L> difference(const Multiset<E, L>& x, const Multiset<E, L>& y) {
  Multiset<E, L> out;
  for (const auto& [e, n] : x.entries()) {
    Count m = y.count(e);
    if (n > m) out.insert(e, n - m);
  }
  return out;
}

template <class E2, class L2 = std::less<E2>, class F, class E, class L>
Multiset<E2, L2> map_morphism(F&& f, const Multiset<E, L>& x) {
  Multiset<E2, L2> out;
  for (const auto& [e, n] : x.entries()) out.insert(f(e), n);
  return out;
}

template <class E, class L, class Show>
std::string to_string(const Multiset<E, L>& x, Show&& show) {
  std::string out = "[";
  bool first = true;
  for (const auto& [e, n] : x.entries()) {
    std::string s = show(e);
    for (Count i = 0; i < n; ++i) {
      if (!first) out += ", ";
      out += s;
      first = false;
    }
  }
  return out + "]";
}

// Splits the inside of a bracketed literal at top-level commas.
std::vector<std::string> split_multiset_literal(const std::string& text);

template <class E, class L = std::less<E>, class Parse>
Multiset<E, L> parse_multiset(const std::string& text, Parse&& parse) {
  Multiset<E, L> out;
  for (const auto& item : split_multiset_literal(text)) out.insert(parse(item));
  return out;
}

}  // namespace mdrkit
