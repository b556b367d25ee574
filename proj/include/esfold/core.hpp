/*
 * Copyright 2026 The esfold Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <iterator>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace esfold {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed structure: duplicate ids, dangling edge endpoints, cyclic causality.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Raised instead of silently truncating an exponential enumeration.
class CapacityError : public Error {
 public:
  using Error::Error;
};

using EventIndex = std::size_t;

/// Hard limit imposed by the 64-bit event-set representation.
inline constexpr std::size_t kMaxEvents = 64;
inline constexpr std::size_t kDefaultCapacity = 24;

/// Event-count cap for enumerating operations. ESFOLD_CAP overrides the
/// default; values are clamped to [1, kMaxEvents].
inline std::size_t capacity_cap() {
  if (const char* env = std::getenv("ESFOLD_CAP"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != nullptr && *end == '\0' && v > 0) {
      return static_cast<std::size_t>(std::min<unsigned long long>(v, kMaxEvents));
    }
  }
  return kDefaultCapacity;
}

inline void check_capacity(std::size_t event_count, std::size_t cap, std::string_view what) {
  if (event_count > cap) {
    throw CapacityError(std::string(what) + ": " + std::to_string(event_count) +
                        " events exceed the capacity cap of " + std::to_string(cap) +
                        " (set ESFOLD_CAP to raise it)");
  }
}

/// A finite set of events of one structure, stored as a bitmask.
class EventSet {
 public:
  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = EventIndex;
    using difference_type = std::ptrdiff_t;
    using pointer = const EventIndex*;
    using reference = EventIndex;

    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t rest) : rest_(rest) {}
    constexpr EventIndex operator*() const { return static_cast<EventIndex>(std::countr_zero(rest_)); }
    constexpr iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr iterator operator++(int) {
      iterator old = *this;
      ++*this;
      return old;
    }
    constexpr bool operator==(const iterator&) const = default;

   private:
    std::uint64_t rest_ = 0;
  };

  constexpr EventSet() = default;
  constexpr explicit EventSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr EventSet single(EventIndex e) { return EventSet(std::uint64_t{1} << e); }
  static constexpr EventSet all(std::size_t n) {
    return EventSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }
  template <typename Range>
  static EventSet of(const Range& events) {
    EventSet s;
    for (EventIndex e : events) s.insert(e);
    return s;
  }
  static EventSet of(std::initializer_list<EventIndex> events) {
    EventSet s;
    for (EventIndex e : events) s.insert(e);
    return s;
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool contains(EventIndex e) const { return (bits_ >> e) & 1U; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr EventIndex first() const { return static_cast<EventIndex>(std::countr_zero(bits_)); }

  constexpr void insert(EventIndex e) { bits_ |= std::uint64_t{1} << e; }
  constexpr void erase(EventIndex e) { bits_ &= ~(std::uint64_t{1} << e); }
  constexpr EventSet with(EventIndex e) const { return EventSet(bits_ | (std::uint64_t{1} << e)); }
  constexpr EventSet without(EventIndex e) const { return EventSet(bits_ & ~(std::uint64_t{1} << e)); }

  constexpr bool subset_of(EventSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(EventSet other) const { return (bits_ & other.bits_) != 0; }

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

  constexpr EventSet operator|(EventSet o) const { return EventSet(bits_ | o.bits_); }
  constexpr EventSet operator&(EventSet o) const { return EventSet(bits_ & o.bits_); }
  constexpr EventSet operator-(EventSet o) const { return EventSet(bits_ & ~o.bits_); }
  constexpr EventSet& operator|=(EventSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  constexpr EventSet& operator&=(EventSet o) {
    bits_ &= o.bits_;
    return *this;
  }
  constexpr EventSet& operator-=(EventSet o) {
    bits_ &= ~o.bits_;
    return *this;
  }

  constexpr bool operator==(const EventSet&) const = default;
  constexpr auto operator<=>(const EventSet&) const = default;

 private:
  std::uint64_t bits_ = 0;
};

/// Deterministic ordering for families of event sets: by size, then by bits.
inline bool size_then_bits(EventSet a, EventSet b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.bits() < b.bits();
}

/// Binary relation on the events of one structure; row i holds {j | i R j}.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::size_t n) : rows_(n) {}

  std::size_t size() const { return rows_.size(); }

  bool holds(EventIndex a, EventIndex b) const { return rows_[a].contains(b); }
  void add(EventIndex a, EventIndex b) { rows_[a].insert(b); }
  void remove(EventIndex a, EventIndex b) { rows_[a].erase(b); }

  EventSet successors(EventIndex a) const { return rows_[a]; }
  EventSet predecessors(EventIndex b) const {
    EventSet s;
    for (EventIndex a = 0; a < rows_.size(); ++a) {
      if (rows_[a].contains(b)) s.insert(a);
    }
    return s;
  }
  /// Union of the successors of every member of `from`.
  EventSet image(EventSet from) const {
    EventSet s;
    for (EventIndex a : from) s |= rows_[a];
    return s;
  }
  /// Union of the predecessors of every member of `to`.
  EventSet preimage(EventSet to) const {
    EventSet s;
    for (EventIndex a = 0; a < rows_.size(); ++a) {
      if (rows_[a].intersects(to)) s.insert(a);
    }
    return s;
  }

  std::size_t pair_count() const {
    std::size_t c = 0;
    for (EventSet r : rows_) c += r.size();
    return c;
  }
  std::vector<std::pair<EventIndex, EventIndex>> pairs() const {
    std::vector<std::pair<EventIndex, EventIndex>> out;
    for (EventIndex a = 0; a < rows_.size(); ++a) {
      for (EventIndex b : rows_[a]) out.emplace_back(a, b);
    }
    return out;
  }

  Relation restricted_to(EventSet domain) const {
    Relation r(rows_.size());
    for (EventIndex a : domain) r.rows_[a] = rows_[a] & domain;
    return r;
  }

  Relation inverse() const {
    Relation r(rows_.size());
    for (EventIndex a = 0; a < rows_.size(); ++a) {
      for (EventIndex b : rows_[a]) r.add(b, a);
    }
    return r;
  }

  Relation symmetric_closure() const {
    Relation r = *this;
    for (EventIndex a = 0; a < rows_.size(); ++a) {
      for (EventIndex b : rows_[a]) r.add(b, a);
    }
    return r;
  }

  /// Transitive (not reflexive) closure.
  Relation transitive_closure() const {
    Relation r = *this;
    const std::size_t n = rows_.size();
    for (EventIndex k = 0; k < n; ++k) {
      for (EventIndex i = 0; i < n; ++i) {
        if (r.rows_[i].contains(k)) r.rows_[i] |= r.rows_[k];
      }
    }
    return r;
  }

  /// Transitive reduction; meaningful for acyclic relations.
  Relation transitive_reduction() const {
    const Relation closed = transitive_closure();
    Relation r(rows_.size());
    for (EventIndex a = 0; a < rows_.size(); ++a) {
      EventSet direct = closed.rows_[a];
      for (EventIndex b : closed.rows_[a]) direct -= closed.rows_[b];
      r.rows_[a] = direct;
    }
    return r;
  }

  bool is_irreflexive() const {
    for (EventIndex a = 0; a < rows_.size(); ++a) {
      if (rows_[a].contains(a)) return false;
    }
    return true;
  }
  bool is_symmetric() const {
    for (EventIndex a = 0; a < rows_.size(); ++a) {
      for (EventIndex b : rows_[a]) {
        if (!rows_[b].contains(a)) return false;
      }
    }
    return true;
  }
  /// True iff the relation restricted to `domain` has no cycle (self-loops count).
  bool is_acyclic_on(EventSet domain) const {
    EventSet remaining = domain;
    // Repeatedly strip events without predecessors inside the remaining set.
    bool progress = true;
    while (!remaining.empty() && progress) {
      progress = false;
      for (EventIndex b : remaining) {
        bool has_pred = false;
        for (EventIndex a : remaining) {
          if (rows_[a].contains(b)) {
            has_pred = true;
            break;
          }
        }
        if (!has_pred) {
          remaining.erase(b);
          progress = true;
        }
      }
    }
    return remaining.empty();
  }
  bool is_acyclic() const { return is_acyclic_on(EventSet::all(rows_.size())); }

  bool operator==(const Relation&) const = default;

 private:
  std::vector<EventSet> rows_;
};

struct Event {
  std::string id;
  std::string label;

  bool operator==(const Event&) const = default;
};

/// The event set of a structure: ids are unique, labels are non-empty.
class EventTable {
 public:
  EventTable() = default;
  explicit EventTable(std::vector<Event> events) : events_(std::move(events)) {
    if (events_.size() > kMaxEvents) {
      throw StructuralError("structures with more than " + std::to_string(kMaxEvents) +
                            " events are not supported");
    }
    for (EventIndex i = 0; i < events_.size(); ++i) {
      if (events_[i].id.empty()) throw StructuralError("event with empty id");
      if (events_[i].label.empty()) {
        throw StructuralError("event '" + events_[i].id + "' has an empty label");
      }
      if (!index_.emplace(events_[i].id, i).second) {
        throw StructuralError("duplicate event id '" + events_[i].id + "'");
      }
    }
  }

  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  const Event& operator[](EventIndex i) const { return events_[i]; }
  const std::string& id(EventIndex i) const { return events_[i].id; }
  const std::string& label(EventIndex i) const { return events_[i].label; }
  const std::vector<Event>& events() const { return events_; }
  EventSet all() const { return EventSet::all(events_.size()); }

  bool contains(std::string_view id) const { return index_.find(std::string(id)) != index_.end(); }
  EventIndex index_of(std::string_view id) const {
    const auto it = index_.find(std::string(id));
    if (it == index_.end()) throw StructuralError("unknown event '" + std::string(id) + "'");
    return it->second;
  }
  EventSet set_of(const std::vector<std::string>& ids) const {
    EventSet s;
    for (const auto& id : ids) s.insert(index_of(id));
    return s;
  }

  /// "{a, b, c}" using event ids in index order.
  std::string format(EventSet s) const {
    std::string out = "{";
    bool first = true;
    for (EventIndex e : s) {
      if (!first) out += ", ";
      out += events_[e].id;
      first = false;
    }
    return out + "}";
  }

  bool operator==(const EventTable& other) const { return events_ == other.events_; }

 private:
  std::vector<Event> events_;
  std::unordered_map<std::string, EventIndex> index_;
};

}  // namespace esfold
