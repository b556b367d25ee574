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

// esfold command line. Exit codes: 0 success or equivalent, 1 negative
// verdict, 2 usage or input error, 3 capacity cap exceeded.

#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "esfold/esfold.hpp"

namespace esfold::cli {

inline constexpr int kOk = 0;
inline constexpr int kNegative = 1;
inline constexpr int kUsage = 2;
inline constexpr int kCapacity = 3;

class UsageError : public Error {
 public:
  using Error::Error;
};

inline std::vector<std::string> split_ids(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  return out;
}

/// Distinct e-histories over all configurations, for any kind.
template <typename S>
std::vector<EventSet> event_histories(const S& s, EventIndex e, std::size_t cap) {
  if constexpr (std::is_same_v<S, Aes>) {
    std::vector<EventSet> out;
    for (const History& h : histories(s, e, cap)) out.push_back(h.events);
    return out;
  } else {
    std::vector<EventSet> out;
    for (EventSet c : configuration_sets(s, cap)) {
      if (!c.contains(e)) continue;
      const EventSet h = local_order(s, c).predecessors(e).with(e);
      if (std::find(out.begin(), out.end(), h) == out.end()) out.push_back(h);
    }
    std::sort(out.begin(), out.end(), size_then_bits);
    return out;
  }
}

struct Options {
  std::string file;
  std::string file2;
  std::string event;
  std::string set;
  std::string strategy = "first";
  std::string to;
  std::string kind = "pes";
  std::string output;
  bool semantic = false;
  bool force = false;
  bool all = false;
  bool equal = false;
  bool maximal = false;
  bool orders = false;
  std::size_t k = 0;
  std::size_t budget = 10000;
  GenParams gen;
};

inline void write_document(const EventStructure& s, const Options& o, std::ostream& out) {
  if (o.output.empty()) {
    out << serialize(s);
    return;
  }
  std::ofstream f(o.output);
  if (!f) throw Error("cannot write '" + o.output + "'");
  f << serialize(s);
}

inline int cmd_validate(const Options& o, std::ostream& out) {
  const EventStructure s = parse_unchecked(read_file(o.file));
  ValidationReport report = validate(s);
  if (o.semantic) {
    if (const auto* f = std::get_if<Fes>(&s); f != nullptr && report.ok()) {
      report.append(validate_fes_semantic(*f, capacity_cap()));
    }
  }
  out << report.format(events_of(s));
  return report.ok() ? kOk : kNegative;
}

inline int cmd_configs(const Options& o, std::ostream& out) {
  const EventStructure s = load(o.file);
  std::visit(
      [&](const auto& x) {
        std::vector<EventSet> sets = configuration_sets(x, capacity_cap());
        if (o.maximal) sets = maximal_sets(sets);
        for (EventSet c : sets) {
          out << x.events().format(c);
          if (o.orders) {
            const Relation order = local_order(x, c).transitive_reduction();
            for (const auto& [a, b] : order.pairs()) out << " " << x.events().id(a) << "<" << x.events().id(b);
          }
          out << "\n";
        }
      },
      s);
  return kOk;
}

inline int cmd_hist(const Options& o, std::ostream& out) {
  const EventStructure s = load(o.file);
  std::visit(
      [&](const auto& x) {
        const EventIndex e = x.events().index_of(o.event);
        for (EventSet h : event_histories(x, e, capacity_cap())) out << x.events().format(h) << "\n";
      },
      s);
  return kOk;
}

template <typename S>
void print_candidates(const S& s, const Options& o, std::ostream& out) {
  const auto cands = enumerate_candidates(s, o.k, capacity_cap());
  if (cands.empty()) out << "no candidates\n";
  for (const auto& c : cands) {
    if constexpr (std::is_same_v<S, Aes>) {
      if (o.equal) {
        out << format_plan(s, is_combinable_aes(s, c.set, HistoryMatch::equal));
        continue;
      }
    }
    out << format_plan(s, c.plan);
  }
}

inline const char* foldable_kinds_hint() { return "folding applies to aes and fes documents (see 'convert')"; }

inline int cmd_candidates(const Options& o, std::ostream& out) {
  const EventStructure s = load(o.file);
  if (const auto* a = std::get_if<Aes>(&s)) {
    print_candidates(*a, o, out);
  } else if (const auto* f = std::get_if<Fes>(&s)) {
    print_candidates(*f, o, out);
  } else {
    throw UsageError(foldable_kinds_hint());
  }
  return kOk;
}

inline int cmd_fold(const Options& o, std::ostream& out, std::ostream& err) {
  const EventStructure s = load(o.file);
  const auto ids = split_ids(o.set);
  if (ids.size() < 2) throw UsageError("--set needs at least two event ids");
  if (const auto* a = std::get_if<Aes>(&s)) {
    const auto plan = is_combinable_aes(*a, a->events().set_of(ids), o.equal ? HistoryMatch::equal : HistoryMatch::subset);
    if (!plan.combinable() && !o.force) {
      err << format_plan(*a, plan);
      return kNegative;
    }
    write_document(fold_aes(*a, plan, o.force).structure, o, out);
  } else if (const auto* f = std::get_if<Fes>(&s)) {
    const auto plan = is_combinable_fes(*f, f->events().set_of(ids));
    if (!plan.combinable() && !o.force) {
      err << format_plan(*f, plan);
      return kNegative;
    }
    write_document(fold_fes(*f, plan, o.force).structure, o, out);
  } else {
    throw UsageError(foldable_kinds_hint());
  }
  return kOk;
}

template <typename S>
int minimize_structure(const S& s, const Options& o, std::ostream& out) {
  if (o.all) {
    const auto forms = all_minimal_forms(s, o.budget, capacity_cap());
    out << "classes: " << forms.classes.size() << (forms.partial ? " (partial: budget exhausted)" : "") << "\n";
    for (std::size_t i = 0; i < forms.classes.size(); ++i) {
      const auto& cls = forms.classes[i];
      out << "class " << i + 1 << ": " << cls.structure.size() << " events, "
          << (cls.hp_equivalent ? "hp-equivalent" : "NOT hp-equivalent") << " to the input\n";
      ReductionTrace<S> t{s, cls.structure, cls.trace};
      out << format_trace(t) << serialize(cls.structure);
    }
    return forms.partial ? kNegative : kOk;
  }
  Strategy strategy = Strategy::first;
  if (o.strategy == "smallest-result") {
    strategy = Strategy::smallest_result;
  } else if (o.strategy == "exhaustive") {
    strategy = Strategy::exhaustive;
  } else if (o.strategy != "first") {
    throw UsageError("unknown strategy '" + o.strategy + "'");
  }
  const auto trace = minimize(s, strategy, capacity_cap());
  out << format_trace(trace);
  if (!o.output.empty()) write_document(trace.final, o, out);
  return kOk;
}

inline int cmd_minimize(const Options& o, std::ostream& out) {
  const EventStructure s = load(o.file);
  if (const auto* a = std::get_if<Aes>(&s)) return minimize_structure(*a, o, out);
  if (const auto* f = std::get_if<Fes>(&s)) return minimize_structure(*f, o, out);
  throw UsageError(foldable_kinds_hint());
}

inline int cmd_equiv(const Options& o, std::ostream& out) {
  const EventStructure x = load(o.file);
  const EventStructure y = load(o.file2);
  const HpWitness w = hp_bisimilar(x, y, capacity_cap());
  std::visit([&](const auto& a, const auto& b) { out << format_witness(a, b, w); }, x, y);
  return w.equivalent() ? kOk : kNegative;
}

inline int cmd_convert(const Options& o, std::ostream& out) {
  const EventStructure s = load(o.file);
  if (o.to != "aes" && o.to != "fes") throw UsageError("--to must be aes or fes");
  if (const auto* p = std::get_if<Pes>(&s)) {
    if (o.to == "aes") {
      write_document(pes_to_aes(*p), o, out);
    } else {
      write_document(pes_to_fes(*p), o, out);
    }
    return kOk;
  }
  if (kind_name(kind_of(s)) == o.to) {
    write_document(s, o, out);
    return kOk;
  }
  throw UsageError(std::string("cannot convert ") + kind_name(kind_of(s)) + " to " + o.to);
}

inline int cmd_gen(const Options& o, std::ostream& out) {
  check_capacity(o.gen.event_count, capacity_cap(), "gen");
  const Pes p = generate_random_pes(o.gen);
  if (o.kind == "pes") {
    write_document(p, o, out);
  } else if (o.kind == "aes") {
    write_document(pes_to_aes(p), o, out);
  } else if (o.kind == "fes") {
    write_document(pes_to_fes(p), o, out);
  } else {
    throw UsageError("--kind must be pes, aes or fes");
  }
  return kOk;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Event structures: validation, hp-bisimilarity and folding", "esfold"};
  app.require_subcommand(1);
  Options o;

  auto* validate_cmd = app.add_subcommand("validate", "check the axioms of a structure");
  validate_cmd->add_option("file", o.file, "document")->required();
  validate_cmd->add_flag("--semantic", o.semantic, "also check faithfulness and fullness of a FES");

  auto* configs_cmd = app.add_subcommand("configs", "list configurations");
  configs_cmd->add_option("file", o.file, "document")->required();
  configs_cmd->add_flag("--maximal", o.maximal, "maximal configurations only");
  configs_cmd->add_flag("--orders", o.orders, "print the covering pairs of each local order");

  auto* hist_cmd = app.add_subcommand("hist", "list the histories of an event");
  hist_cmd->add_option("file", o.file, "document")->required();
  hist_cmd->add_option("event", o.event, "event id")->required();

  auto* cand_cmd = app.add_subcommand("candidates", "folding candidates with per-condition diagnostics");
  cand_cmd->add_option("file", o.file, "document")->required();
  cand_cmd->add_option("-k", o.k, "largest candidate size (default: largest label class)");
  cand_cmd->add_flag("--equal", o.equal, "AES: require h- = S(X) u floor(Y)");

  auto* fold_cmd = app.add_subcommand("fold", "fold a set of events");
  fold_cmd->add_option("file", o.file, "document")->required();
  fold_cmd->add_option("--set", o.set, "comma separated event ids")->required();
  fold_cmd->add_flag("--force", o.force, "fold even when the set is not combinable");
  fold_cmd->add_flag("--equal", o.equal, "AES: require h- = S(X) u floor(Y)");
  fold_cmd->add_option("-o,--output", o.output, "write the result to a file");

  auto* min_cmd = app.add_subcommand("minimize", "fold until no combinable set remains");
  min_cmd->add_option("file", o.file, "document")->required();
  min_cmd->add_option("--strategy", o.strategy, "first, smallest-result or exhaustive");
  min_cmd->add_flag("--all", o.all, "list every irreducible folding up to isomorphism");
  min_cmd->add_option("--budget", o.budget, "structures expanded by --all");
  min_cmd->add_option("-o,--output", o.output, "write the final structure to a file");

  auto* equiv_cmd = app.add_subcommand("equiv", "decide hp-bisimilarity");
  equiv_cmd->add_option("left", o.file, "document")->required();
  equiv_cmd->add_option("right", o.file2, "document")->required();

  auto* convert_cmd = app.add_subcommand("convert", "embed a PES into an AES or FES");
  convert_cmd->add_option("file", o.file, "document")->required();
  convert_cmd->add_option("--to", o.to, "aes or fes")->required();
  convert_cmd->add_option("-o,--output", o.output, "write the result to a file");

  auto* dot_cmd = app.add_subcommand("dot", "render as Graphviz");
  dot_cmd->add_option("file", o.file, "document")->required();

  auto* gen_cmd = app.add_subcommand("gen", "random PES, optionally embedded");
  gen_cmd->add_option("--events", o.gen.event_count, "number of events");
  gen_cmd->add_option("--labels", o.gen.label_count, "number of labels");
  gen_cmd->add_option("--causality", o.gen.causality_density, "causality density")->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--conflict", o.gen.conflict_density, "conflict density")->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--seed", o.gen.seed, "random seed");
  gen_cmd->add_option("--kind", o.kind, "pes, aes or fes");
  gen_cmd->add_option("-o,--output", o.output, "write the result to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate_cmd) return cmd_validate(o, out);
    if (*configs_cmd) return cmd_configs(o, out);
    if (*hist_cmd) return cmd_hist(o, out);
    if (*cand_cmd) return cmd_candidates(o, out);
    if (*fold_cmd) return cmd_fold(o, out, err);
    if (*min_cmd) return cmd_minimize(o, out);
    if (*equiv_cmd) return cmd_equiv(o, out);
    if (*convert_cmd) return cmd_convert(o, out);
    if (*dot_cmd) {
      out << to_dot(load(o.file));
      return kOk;
    }
    if (*gen_cmd) return cmd_gen(o, out);
  } catch (const CapacityError& e) {
    err << "esfold: " << e.what() << "\n";
    return kCapacity;
  } catch (const Error& e) {
    err << "esfold: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace esfold::cli
