#include "cogbasic/conformance.hpp"

#include <algorithm>
#include <optional>

namespace cogbasic {

namespace {

std::string next_text(const std::optional<NextLine>& next) {
  return next ? format_next(*next) : std::string("(none)");
}

std::optional<std::int64_t> static_operand(const Expression& expr, const MemoryState& memory) {
  if (const auto* number = std::get_if<IntegerLiteral>(&expr.node)) {
    return number->value;
  }
  if (const auto* call = std::get_if<BuiltinCall>(&expr.node)) {
    if (call->function == Builtin::ConflictsCount) {
      return static_cast<std::int64_t>(memory.conflicts.size());
    }
  }
  return std::nullopt;
}

bool contains_normalized(const std::vector<std::string>& list, const std::string& item) {
  const auto key = normalize_whitespace(item);
  return std::any_of(list.begin(), list.end(),
                     [&](const std::string& other) { return normalize_whitespace(other) == key; });
}

bool contains_pair(const std::vector<ConflictPair>& list, const ConflictPair& pair) {
  const auto a = normalize_whitespace(pair.a());
  const auto b = normalize_whitespace(pair.b());
  return std::any_of(list.begin(), list.end(), [&](const ConflictPair& other) {
    const auto oa = normalize_whitespace(other.a());
    const auto ob = normalize_whitespace(other.b());
    return (oa == a && ob == b) || (oa == b && ob == a);
  });
}

std::optional<std::string> lost_item(const MemoryState& before, const MemoryState& after) {
  for (const auto& fact : before.declarative) {
    if (!contains_normalized(after.declarative, fact)) {
      return "declarative lost '" + fact + "'";
    }
  }
  for (const auto& rule : before.procedural) {
    if (!contains_normalized(after.procedural, rule)) {
      return "procedural lost '" + rule + "'";
    }
  }
  for (const auto& pair : before.conflicts) {
    if (!contains_pair(after.conflicts, pair)) {
      return "conflicts lost '" + serialize_pair(pair) + "'";
    }
  }
  return std::nullopt;
}

// Statements that can put pairs into conflicts.
bool adds_conflicts(const Statement& statement) {
  if (const auto* add = std::get_if<stmt::Add>(&statement)) {
    return add->field == MemoryField::Conflicts;
  }
  if (const auto* call = std::get_if<stmt::Call>(&statement)) {
    return call->call.function == Builtin::DetectConflicts;
  }
  return false;
}

}  // namespace

char violation_letter(ViolationKind kind) { return static_cast<char>('a' + static_cast<int>(kind)); }

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::UnknownLine: return "unknown-line";
    case ViolationKind::WrongSuccessor: return "wrong-successor";
    case ViolationKind::BranchInconsistent: return "branch-inconsistent";
    case ViolationKind::MemoryShrink: return "memory-shrink";
    case ViolationKind::UnresolvedConflicts: return "unresolved-conflicts";
    case ViolationKind::MissingEnd: return "missing-end";
  }
  return "unknown";
}

std::vector<Violation> check_conformance(const Program& program, const ModelTrace& trace) {
  std::vector<Violation> out;
  const auto report = [&](ViolationKind kind, std::size_t index, std::string message) {
    out.push_back(Violation{kind, index, std::move(message)});
  };
  const auto& entries = trace.entries;

  MemoryState previous = new_memory();
  std::optional<std::size_t> last_resolve;
  bool conflicts_added_after_resolve = false;

  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& entry = entries[i];
    const auto it = program.lines.find(entry.line);
    if (it == program.lines.end()) {
      report(ViolationKind::UnknownLine, i, "line " + std::to_string(entry.line) + " is not in the program");
    }

    if (i + 1 < entries.size()) {
      const LineNumber following = entries[i + 1].line;
      if (!entry.next || *entry.next != NextLine{following}) {
        report(ViolationKind::WrongSuccessor, i,
               "claims NEXT " + next_text(entry.next) + " but the following entry is line " +
                   std::to_string(following));
      }
    }

    if (it != program.lines.end()) {
      const Statement& statement = it->second;
      const NextLine sequential = program.successor(entry.line);

      if (const auto* branch = std::get_if<stmt::If>(&statement)) {
        const MemoryState& snapshot = entry.memory ? *entry.memory : previous;
        const auto lhs = static_operand(branch->condition.lhs, snapshot);
        const auto rhs = static_operand(branch->condition.rhs, snapshot);
        if (entry.next && lhs && rhs) {
          const bool taken = compare(*lhs, branch->condition.op, *rhs);
          const NextLine expected = taken ? NextLine{branch->target} : sequential;
          if (*entry.next != expected) {
            report(ViolationKind::BranchInconsistent, i,
                   "condition evaluates to " + std::string(taken ? "true" : "false") + " (" + std::to_string(*lhs) +
                       " " + std::string(to_string(branch->condition.op)) + " " + std::to_string(*rhs) +
                       ") so NEXT should be " + format_next(expected) + ", not " + format_next(*entry.next));
          }
        } else if (entry.next && *entry.next != NextLine{branch->target} && *entry.next != sequential) {
          report(ViolationKind::WrongSuccessor, i,
                 "IF may only continue at " + std::to_string(branch->target) + " or " + format_next(sequential) +
                     ", not " + format_next(*entry.next));
        }
      } else {
        NextLine expected = sequential;
        if (const auto* jump = std::get_if<stmt::Goto>(&statement)) {
          expected = jump->target;
        } else if (std::holds_alternative<stmt::End>(statement)) {
          expected = std::nullopt;
        }
        if (!entry.next) {
          report(ViolationKind::WrongSuccessor, i, "no NEXT given; expected " + format_next(expected));
        } else if (*entry.next != expected) {
          report(ViolationKind::WrongSuccessor, i,
                 "NEXT should be " + format_next(expected) + ", not " + format_next(*entry.next));
        }
      }

      const bool resolves = invokes_resolve(statement);
      if (entry.memory) {
        if (!resolves) {
          if (auto lost = lost_item(previous, *entry.memory)) {
            report(ViolationKind::MemoryShrink, i, *lost + " outside RESOLVE_CONFLICTS");
          }
        } else if (!entry.memory->conflicts.empty()) {
          report(ViolationKind::UnresolvedConflicts, i,
                 "conflicts still hold " + std::to_string(entry.memory->conflicts.size()) +
                     " pair(s) after RESOLVE_CONFLICTS");
        }
      }
      if (resolves) {
        last_resolve = i;
        conflicts_added_after_resolve = false;
      } else if (last_resolve && adds_conflicts(statement)) {
        conflicts_added_after_resolve = true;
      }
    }

    if (entry.memory) {
      previous = *entry.memory;
    }
  }

  if (last_resolve && !conflicts_added_after_resolve && !trace.final_memory.conflicts.empty()) {
    report(ViolationKind::UnresolvedConflicts, entries.size(),
           "final memory still holds " + std::to_string(trace.final_memory.conflicts.size()) +
               " conflict pair(s) after RESOLVE_CONFLICTS");
  }

  if (entries.empty()) {
    report(ViolationKind::MissingEnd, 0, "trace has no entries");
  } else {
    const auto& last = entries.back();
    const auto it = program.lines.find(last.line);
    const bool is_end = it != program.lines.end() && std::holds_alternative<stmt::End>(it->second);
    if (!is_end) {
      report(ViolationKind::MissingEnd, entries.size() - 1,
             "last executed line " + std::to_string(last.line) + " is not END");
    } else if (!last.next || *last.next) {
      report(ViolationKind::MissingEnd, entries.size() - 1, "END entry does not claim NEXT: END");
    }
  }
  return out;
}

std::string format_violation(const Violation& violation, const ModelTrace& trace) {
  std::string out = "(";
  out += violation_letter(violation.kind);
  out += ") ";
  out += to_string(violation.kind);
  if (violation.entry < trace.entries.size()) {
    out += " at entry " + std::to_string(violation.entry + 1) + ", line " +
           std::to_string(trace.entries[violation.entry].line);
  }
  out += ": " + violation.message;
  return out;
}

}  // namespace cogbasic
