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

// JSON documents:
//
//   {"kind": "aes",
//    "events": [{"id": "d", "label": "d"}, ...],
//    "relations": {"le": [["d", "c1"], ...], "aconf": [...]}}
//
// Relation names: "le" causality (pes, aes), "aconf" asymmetric conflict
// (aes), "flow" (fes), "conf" symmetric conflict (pes, fes). Unknown
// fields are rejected.

#pragma once

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "esfold/core.hpp"
#include "esfold/structures.hpp"

namespace esfold {

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line = 0, std::size_t column = 0)
      : Error(line == 0 ? message
                        : "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A structure that loaded but failed its validator.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& message, ValidationReport report)
      : Error(message), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

inline Kind parse_kind(const std::string& s) {
  if (s == "pes") return Kind::pes;
  if (s == "aes") return Kind::aes;
  if (s == "fes") return Kind::fes;
  throw ParseError("unknown kind '" + s + "' (expected pes, aes or fes)");
}

inline std::vector<std::string> allowed_relations(Kind k) {
  switch (k) {
    case Kind::pes: return {"le", "conf"};
    case Kind::aes: return {"le", "aconf"};
    case Kind::fes: return {"flow", "conf"};
  }
  return {};
}

inline const std::string& as_string(const nlohmann::json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where + " must be a string");
  return j.get_ref<const std::string&>();
}

inline Relation read_edges(const nlohmann::json& j, const EventTable& events, const std::string& name) {
  Relation r(events.size());
  if (!j.is_array()) throw ParseError("relations." + name + " must be an array of pairs");
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& edge = j[i];
    const std::string where = "relations." + name + "[" + std::to_string(i) + "]";
    if (!edge.is_array() || edge.size() != 2) throw ParseError(where + " must be a pair of event ids");
    const std::string& a = as_string(edge[0], where + "[0]");
    const std::string& b = as_string(edge[1], where + "[1]");
    if (!events.contains(a)) throw ParseError(where + " names undeclared event '" + a + "'");
    if (!events.contains(b)) throw ParseError(where + " names undeclared event '" + b + "'");
    r.add(events.index_of(a), events.index_of(b));
  }
  return r;
}

}  // namespace detail

/// Loads a document without running the validator. Causality is closed
/// transitively (reflexive pairs are dropped) and must be acyclic; "conf"
/// is symmetrised.
inline EventStructure parse_unchecked(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, column] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string what = e.what();
    if (const auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ParseError(what, line, column);
  }
  if (!doc.is_object()) throw ParseError("document must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "kind" && key != "events" && key != "relations") throw ParseError("unknown field '" + key + "'");
  }
  if (!doc.contains("kind")) throw ParseError("missing field 'kind'");
  if (!doc.contains("events")) throw ParseError("missing field 'events'");
  const Kind kind = detail::parse_kind(detail::as_string(doc["kind"], "kind"));

  const auto& evs = doc["events"];
  if (!evs.is_array()) throw ParseError("events must be an array");
  std::vector<Event> list;
  for (std::size_t i = 0; i < evs.size(); ++i) {
    const auto& ev = evs[i];
    const std::string where = "events[" + std::to_string(i) + "]";
    if (!ev.is_object()) throw ParseError(where + " must be an object");
    for (const auto& [key, value] : ev.items()) {
      if (key != "id" && key != "label") throw ParseError(where + ": unknown field '" + key + "'");
    }
    if (!ev.contains("id") || !ev.contains("label")) throw ParseError(where + " needs 'id' and 'label'");
    list.push_back({detail::as_string(ev["id"], where + ".id"), detail::as_string(ev["label"], where + ".label")});
  }
  EventTable events(std::move(list));

  const nlohmann::json empty = nlohmann::json::object();
  const auto& rels = doc.contains("relations") ? doc["relations"] : empty;
  if (!rels.is_object()) throw ParseError("relations must be an object");
  const auto allowed = detail::allowed_relations(kind);
  for (const auto& [key, value] : rels.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ParseError("relation '" + key + "' is not allowed for kind " + kind_name(kind));
    }
  }
  auto edges = [&](const std::string& name) {
    return rels.contains(name) ? detail::read_edges(rels[name], events, name) : Relation(events.size());
  };
  auto causality = [&]() {
    Relation le = edges("le");
    for (EventIndex e = 0; e < events.size(); ++e) le.remove(e, e);
    return close_causality(le);
  };

  switch (kind) {
    case Kind::pes: {
      Relation lt = causality();
      return Pes(events, std::move(lt), edges("conf").symmetric_closure());
    }
    case Kind::aes: {
      Relation lt = causality();
      return Aes(events, std::move(lt), edges("aconf"));
    }
    case Kind::fes:
      return Fes(events, edges("flow"), edges("conf").symmetric_closure());
  }
  throw ParseError("unreachable kind");
}

/// Loads and validates (structural checks only for FES).
inline EventStructure parse(const std::string& text) {
  EventStructure s = parse_unchecked(text);
  if (auto report = validate(s); !report.ok()) {
    throw ValidationError("invalid " + std::string(kind_name(kind_of(s))) + "\n" + report.format(events_of(s)),
                          std::move(report));
  }
  return s;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline EventStructure load(const std::string& path) { return parse(read_file(path)); }

namespace detail {

inline nlohmann::json edge_list(const EventTable& events, const Relation& r, bool once) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [a, b] : r.pairs()) {
    if (once && b < a && r.holds(b, a)) continue;
    out.push_back({events.id(a), events.id(b)});
  }
  return out;
}

}  // namespace detail

/// Canonical form: causality as its transitive reduction, each symmetric
/// conflict pair once, asymmetric conflict and flow in full.
inline nlohmann::json to_json(const EventStructure& s) {
  const EventTable& events = events_of(s);
  nlohmann::json doc;
  doc["kind"] = kind_name(kind_of(s));
  doc["events"] = nlohmann::json::array();
  for (const Event& e : events.events()) doc["events"].push_back({{"id", e.id}, {"label", e.label}});
  nlohmann::json rels = nlohmann::json::object();
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Pes>) {
          rels["le"] = detail::edge_list(events, x.causality().transitive_reduction(), false);
          rels["conf"] = detail::edge_list(events, x.conflict(), true);
        } else if constexpr (std::is_same_v<T, Aes>) {
          rels["le"] = detail::edge_list(events, x.causality().transitive_reduction(), false);
          rels["aconf"] = detail::edge_list(events, x.aconflict(), false);
        } else {
          rels["flow"] = detail::edge_list(events, x.flow(), false);
          rels["conf"] = detail::edge_list(events, x.conflict(), true);
        }
      },
      s);
  doc["relations"] = rels;
  return doc;
}

inline std::string serialize(const EventStructure& s) {
  nlohmann::ordered_json ordered;
  const nlohmann::json doc = to_json(s);
  ordered["kind"] = doc["kind"];
  ordered["events"] = doc["events"];
  ordered["relations"] = doc["relations"];
  return ordered.dump(2) + "\n";
}

}  // namespace esfold
