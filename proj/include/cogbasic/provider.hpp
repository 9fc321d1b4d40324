#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cogbasic/memory.hpp"

namespace cogbasic {

struct Reconciled {
  ConflictPair pair;
  std::string merged;
};

struct Resolution {
  std::vector<Reconciled> reconciled;  // one entry per input pair, same order
  std::string summary;
};

/// Backend for the cognitive builtins. Implementations document whether they
/// may be shared across threads.
class CognitiveOps {
 public:
  virtual ~CognitiveOps() = default;

  virtual std::vector<std::string> extract_declarative(std::string_view text) const = 0;
  virtual std::vector<std::string> extract_procedural(std::string_view text) const = 0;
  /// Never returns a pair with identical sides.
  virtual std::vector<ConflictPair> detect_conflicts(std::span<const std::string> facts) const = 0;
  /// Throws EmptyInput when `pairs` is empty.
  virtual Resolution resolve_conflicts(std::span<const ConflictPair> pairs) const = 0;
};

}  // namespace cogbasic
