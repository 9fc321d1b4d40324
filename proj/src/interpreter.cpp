#include "cogbasic/interpreter.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <utility>

#include "cogbasic/errors.hpp"

namespace cogbasic {

namespace {

std::string plural(std::size_t n, std::string_view singular, std::string_view plural_form) {
  return std::to_string(n) + " " + std::string(n == 1 ? singular : plural_form);
}

std::optional<std::size_t> find_normalized(const std::vector<std::string>& list, const std::string& text) {
  const auto key = normalize_whitespace(text);
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (normalize_whitespace(list[i]) == key) {
      return i;
    }
  }
  return std::nullopt;
}

// Replaces the pair's two statements with the merged one, at the position of
// the first statement found.
void merge_into_declarative(std::vector<std::string>& declarative, const ConflictPair& pair, std::string merged) {
  merged = normalize_whitespace(merged);
  if (merged.empty()) {
    return;
  }
  auto ia = find_normalized(declarative, pair.a());
  auto ib = find_normalized(declarative, pair.b());
  const bool merged_present = find_normalized(declarative, merged).has_value();
  std::vector<std::size_t> erase;
  std::optional<std::size_t> slot = ia ? ia : ib;
  if (slot && !merged_present) {
    declarative[*slot] = merged;
    if (ia && ib && *ib != *slot) {
      erase.push_back(*ib);
    }
  } else {
    if (ia) erase.push_back(*ia);
    if (ib && ib != ia) erase.push_back(*ib);
    if (!merged_present) {
      declarative.push_back(merged);
    }
  }
  std::sort(erase.rbegin(), erase.rend());
  for (auto index : erase) {
    declarative.erase(declarative.begin() + static_cast<std::ptrdiff_t>(index));
  }
}

class Evaluator {
 public:
  Evaluator(ExecutionState& state, const CognitiveOps& provider) : state_(state), provider_(provider) {}

  std::vector<std::string>& notes() { return notes_; }

  Value eval(const Expression& expr) {
    if (const auto* var = std::get_if<VariableRef>(&expr.node)) {
      return lookup(var->name);
    }
    if (const auto* number = std::get_if<IntegerLiteral>(&expr.node)) {
      return number->value;
    }
    if (const auto* text = std::get_if<StringLiteral>(&expr.node)) {
      return text->value;
    }
    return call(std::get<BuiltinCall>(expr.node), false);
  }

  Value call(const BuiltinCall& builtin, bool statement_form) {
    auto& memory = state_.memory();
    switch (builtin.function) {
      case Builtin::Input:
        notes_.push_back("Loaded the scenario text");
        return state_.scenario();
      case Builtin::ExtractDeclarative:
      case Builtin::ExtractProcedural: {
        const Value arg = eval(builtin.arguments.at(0));
        const auto* text = std::get_if<std::string>(&arg);
        if (!text) {
          throw TypeMismatch(std::string(to_string(builtin.function)) + " expects a string argument, got a " +
                             std::string(value_type_name(arg)));
        }
        const bool declarative = builtin.function == Builtin::ExtractDeclarative;
        auto items = declarative ? provider_.extract_declarative(*text) : provider_.extract_procedural(*text);
        notes_.push_back("Extracted " + (declarative ? plural(items.size(), "declarative fact", "declarative facts")
                                                     : plural(items.size(), "procedural rule", "procedural rules")));
        return StringList(std::move(items));
      }
      case Builtin::DetectConflicts: {
        auto pairs = provider_.detect_conflicts(memory.declarative);
        if (statement_form) {
          const auto added = add_to_field(memory, MemoryField::Conflicts, pairs);
          std::string note = "Detected " + plural(pairs.size(), "conflict", "conflicts") + " among declarative facts; appended " +
                             std::to_string(added.appended) + " to conflicts";
          if (added.duplicates > 0) {
            note += " (skipped " + plural(added.duplicates, "duplicate", "duplicates") + ")";
          }
          notes_.push_back(std::move(note));
        } else {
          notes_.push_back("Detected " + plural(pairs.size(), "conflict", "conflicts") +
                           " among declarative facts without changing conflicts");
        }
        return PairList(std::move(pairs));
      }
      case Builtin::ConflictsCount:
        notes_.push_back("Counted " + plural(conflicts_count(memory), "conflict", "conflicts"));
        return static_cast<std::int64_t>(conflicts_count(memory));
      case Builtin::ResolveConflicts:
        return resolve();
    }
    throw Error("unknown builtin");
  }

  Value lookup(const std::string& name) const {
    if (auto field = memory_field_from_name(name)) {
      return field_value(state_.memory(), *field);
    }
    if (const Value* value = state_.env().find(name)) {
      return *value;
    }
    throw UnboundVariable(name, state_.current_line());
  }

 private:
  Value resolve() {
    auto& memory = state_.memory();
    if (memory.conflicts.empty()) {
      notes_.push_back("No conflicts to resolve; memory unchanged");
      return memory.resolution;
    }
    const std::size_t count = memory.conflicts.size();
    Resolution resolution = provider_.resolve_conflicts(memory.conflicts);
    if (resolution.reconciled.size() != count) {
      throw Error("provider returned " + std::to_string(resolution.reconciled.size()) +
                  " reconciled statements for " + std::to_string(count) + " conflicts");
    }
    if (normalize_whitespace(resolution.summary).empty()) {
      throw Error("provider returned an empty resolution summary");
    }
    for (std::size_t i = 0; i < count; ++i) {
      merge_into_declarative(memory.declarative, memory.conflicts[i], resolution.reconciled[i].merged);
    }
    memory.conflicts.clear();
    memory.resolution = resolution.summary;
    notes_.push_back("Resolved " + plural(count, "conflict", "conflicts") +
                     ", merged the reconciled statements into declarative, cleared conflicts and wrote the summary to resolution");
    return resolution.summary;
  }

  ExecutionState& state_;
  const CognitiveOps& provider_;
  std::vector<std::string> notes_;
};

std::string join_notes(const std::vector<std::string>& notes) {
  std::string out;
  for (const auto& note : notes) {
    if (!out.empty()) {
      out += "; ";
    }
    out += note;
  }
  return out;
}

std::string sentence(std::string text) {
  if (!text.empty()) {
    text.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(text.front())));
    if (text.back() != '.') {
      text += '.';
    }
  }
  return text;
}

std::int64_t expect_integer(const Value& value, const Expression& expr) {
  if (const auto* n = std::get_if<std::int64_t>(&value)) {
    return *n;
  }
  throw TypeMismatch("comparison operand " + format_expression(expr) + " is a " +
                     std::string(value_type_name(value)) + ", not an integer");
}

std::string_view item_noun(MemoryField field, std::size_t n) {
  switch (field) {
    case MemoryField::Declarative: return n == 1 ? "fact" : "facts";
    case MemoryField::Procedural: return n == 1 ? "rule" : "rules";
    default: return n == 1 ? "conflict pair" : "conflict pairs";
  }
}

}  // namespace

std::string format_next(const NextLine& next) { return next ? std::to_string(*next) : std::string("END"); }

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Completed: return "completed";
    case Outcome::StepLimitExceeded: return "step-limit-exceeded";
    case Outcome::RuntimeError: return "runtime-error";
  }
  return "runtime-error";
}

ExecutionState::ExecutionState(const Program& program, std::string scenario, RunLimits limits)
    : program_(&program), scenario_(std::move(scenario)), limits_(limits) {
  if (auto first = program.first_line()) {
    current_line_ = *first;
  } else {
    status_ = Status::Failed;
    failure_ = "program has no lines";
  }
}

TraceEntry step(ExecutionState& state, const CognitiveOps& provider) {
  if (state.status_ != Status::Running) {
    throw Error("step called on a program that is not running");
  }
  const LineNumber line = state.current_line_;
  const auto it = state.program_->lines.find(line);
  if (it == state.program_->lines.end()) {
    state.status_ = Status::Failed;
    state.failure_ = "line " + std::to_string(line) + " does not exist";
    throw RuntimeError(line, "line does not exist");
  }
  const Statement& statement = it->second;

  TraceEntry entry;
  entry.line = line;
  entry.instruction = format_statement(statement);
  NextLine next = state.program_->successor(line);
  bool ended = false;

  const auto branch_to = [&](LineNumber target, std::string_view keyword) {
    if (!state.program_->contains(target)) {
      throw RuntimeError(line, std::string(keyword) + " target line " + std::to_string(target) + " does not exist");
    }
    return target;
  };

  try {
    Evaluator evaluator(state, provider);
    if (const auto* rem = std::get_if<stmt::Rem>(&statement)) {
      (void)rem;
      entry.rationale = "Comment only; no state change.";
    } else if (const auto* assign = std::get_if<stmt::Assign>(&statement)) {
      Value value = evaluator.eval(assign->value);
      if (auto field = memory_field_from_name(assign->target)) {
        const auto* text = std::get_if<std::string>(&value);
        if (!text) {
          throw TypeMismatch("cannot assign a " + std::string(value_type_name(value)) + " to " + assign->target);
        }
        (*field == MemoryField::Working ? state.memory().working : state.memory().resolution) = *text;
      } else {
        state.env().bind(assign->target, value);
      }
      const bool is_input = std::holds_alternative<BuiltinCall>(assign->value.node) &&
                            std::get<BuiltinCall>(assign->value.node).function == Builtin::Input;
      if (is_input) {
        entry.rationale = "Loaded scenario into " + assign->target + ".";
      } else {
        auto notes = evaluator.notes();
        notes.push_back("stored the " + std::string(value_type_name(value)) + " in " + assign->target);
        entry.rationale = sentence(join_notes(notes));
      }
    } else if (const auto* add = std::get_if<stmt::Add>(&statement)) {
      const Value source = evaluator.lookup(add->source);
      const auto outcome = add_to_field(state.memory(), add->field, source);
      entry.rationale = "Appended " + std::to_string(outcome.appended) + " " +
                        std::string(item_noun(add->field, outcome.appended)) + " from " + add->source + " to " +
                        std::string(to_string(add->field)) + ".";
      if (outcome.duplicates > 0) {
        entry.rationale += " Skipped " + plural(outcome.duplicates, "duplicate", "duplicates") + ".";
      }
    } else if (const auto* print = std::get_if<stmt::Print>(&statement)) {
      entry.output = display_value(evaluator.eval(print->value));
      auto notes = evaluator.notes();
      notes.push_back("printed " + format_expression(print->value) + " as \"" + *entry.output + "\"");
      entry.rationale = sentence(join_notes(notes));
    } else if (const auto* branch = std::get_if<stmt::If>(&statement)) {
      const auto lhs = expect_integer(evaluator.eval(branch->condition.lhs), branch->condition.lhs);
      const auto rhs = expect_integer(evaluator.eval(branch->condition.rhs), branch->condition.rhs);
      const bool taken = compare(lhs, branch->condition.op, rhs);
      std::ostringstream why;
      why << "Condition " << format_expression(branch->condition.lhs) << ' ' << to_string(branch->condition.op)
          << ' ' << format_expression(branch->condition.rhs) << " is " << (taken ? "true" : "false") << " (" << lhs
          << ' ' << to_string(branch->condition.op) << ' ' << rhs << "); ";
      if (taken) {
        next = branch_to(branch->target, "IF");
        why << "jumping to " << branch->target << '.';
      } else if (next) {
        why << "continuing with " << *next << '.';
      } else {
        why << "no line follows.";
      }
      entry.rationale = why.str();
    } else if (const auto* jump = std::get_if<stmt::Goto>(&statement)) {
      next = branch_to(jump->target, "GOTO");
      entry.rationale = "Jumping to " + std::to_string(jump->target) + ".";
    } else if (const auto* call = std::get_if<stmt::Call>(&statement)) {
      evaluator.call(call->call, true);
      entry.rationale = sentence(join_notes(evaluator.notes()));
    } else {
      ended = true;
      next = std::nullopt;
      entry.rationale = "Reached END; execution finished.";
    }
  } catch (const RuntimeError& e) {
    state.status_ = Status::Failed;
    state.failure_ = e.what();
    throw;
  } catch (const UnboundVariable& e) {
    state.status_ = Status::Failed;
    state.failure_ = e.what();
    throw RuntimeError(line, "variable '" + e.name() + "' is not bound");
  } catch (const std::exception& e) {
    state.status_ = Status::Failed;
    state.failure_ = e.what();
    throw RuntimeError(line, e.what());
  }

  entry.memory = state.memory_;
  entry.next = next;
  ++state.steps_taken_;
  if (ended) {
    state.status_ = Status::Ended;
  } else if (!next) {
    state.status_ = Status::Failed;
    state.failure_ = "line " + std::to_string(line) + ": reached the end of the program without END";
  } else {
    state.current_line_ = *next;
  }
  return entry;
}

Value eval_expression(const Expression& expr, ExecutionState& state, const CognitiveOps& provider) {
  Evaluator evaluator(state, provider);
  return evaluator.eval(expr);
}

void execute_call_statement(const BuiltinCall& call, ExecutionState& state, const CognitiveOps& provider) {
  if (call.function != Builtin::DetectConflicts && call.function != Builtin::ResolveConflicts) {
    throw Error(std::string(to_string(call.function)) + "() cannot be used as a statement");
  }
  Evaluator evaluator(state, provider);
  evaluator.call(call, true);
}

RunResult run(const Program& program, std::string_view scenario, const CognitiveOps& provider, RunLimits limits) {
  ExecutionState state(program, std::string(scenario), limits);
  RunResult result;
  while (state.status() == Status::Running) {
    if (state.steps_taken() >= limits.step_limit) {
      result.outcome = Outcome::StepLimitExceeded;
      result.detail = "step limit of " + std::to_string(limits.step_limit) + " reached at line " +
                      std::to_string(state.current_line());
      break;
    }
    try {
      TraceEntry entry = step(state, provider);
      if (entry.output) {
        result.print_output.push_back(*entry.output);
      }
      result.trace.push_back(std::move(entry));
    } catch (const RuntimeError& e) {
      result.outcome = Outcome::RuntimeError;
      result.detail = e.what();
      break;
    }
  }
  if (state.status() == Status::Failed && result.outcome == Outcome::Completed) {
    result.outcome = Outcome::RuntimeError;
    result.detail = state.failure();
  }
  result.final_memory = state.memory();
  return result;
}

std::string render_entry(const TraceEntry& entry) {
  std::ostringstream out;
  out << "LINE " << entry.line << ": " << entry.instruction << '\n';
  out << "RATIONALE: " << single_line(entry.rationale) << '\n';
  if (entry.output) {
    out << "OUTPUT: " << single_line(*entry.output) << '\n';
  }
  out << "MEMORY:\n" << render_memory_fields(entry.memory);
  out << "NEXT: " << format_next(entry.next) << '\n';
  return out.str();
}

std::string render_trace(const RunResult& result) {
  std::ostringstream out;
  for (const auto& entry : result.trace) {
    out << render_entry(entry) << '\n';
  }
  if (result.outcome != Outcome::Completed) {
    out << "OUTCOME: " << to_string(result.outcome);
    if (!result.detail.empty()) {
      out << ": " << single_line(result.detail);
    }
    out << "\n\n";
  }
  out << render_final_memory(result.final_memory);
  return out.str();
}

}  // namespace cogbasic
