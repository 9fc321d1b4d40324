#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cogbasic/ast.hpp"
#include "cogbasic/trace_io.hpp"

namespace cogbasic {

/// Violation classes reported by check_conformance.
enum class ViolationKind {
  UnknownLine,          // (a) executed line is not in the program
  WrongSuccessor,       // (b) next line disagrees with a non-branch statement or the following entry
  BranchInconsistent,   // (c) IF outcome disagrees with the entry's own conflicts snapshot
  MemoryShrink,         // (d) a list field lost items at a step that does not resolve conflicts
  UnresolvedConflicts,  // (e) conflicts remain after a RESOLVE_CONFLICTS step
  MissingEnd,           // (f) the trace does not finish with END
};

/// Letter a-f.
char violation_letter(ViolationKind kind);
std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::size_t entry = 0;  // index into trace.entries; entries.size() for whole-trace findings
  std::string message;
};

/// Replays the control-flow skeleton of `program` against a claimed trace.
/// An empty result means the trace is conformant.
std::vector<Violation> check_conformance(const Program& program, const ModelTrace& trace);

/// "(b) entry 3, line 70: ..." style line.
std::string format_violation(const Violation& violation, const ModelTrace& trace);

}  // namespace cogbasic
