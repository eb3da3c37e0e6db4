#pragma once

#include <stdexcept>
#include <string>

namespace ql {

/// Base class for all domain-level failures (as opposed to programming
/// errors, which are plain logic_error / assertions).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

class AmbiguousAtBound : public DomainError {
 public:
  explicit AmbiguousAtBound(const std::string& what) : DomainError(what) {}
};

class NotFound : public DomainError {
 public:
  explicit NotFound(const std::string& what) : DomainError(what) {}
};

class WindowBoundaryHit : public DomainError {
 public:
  explicit WindowBoundaryHit(const std::string& what) : DomainError(what) {}
};

class NoUnimodularRoot : public DomainError {
 public:
  explicit NoUnimodularRoot(const std::string& what) : DomainError(what) {}
};

class NearCriticalLevel : public DomainError {
 public:
  explicit NearCriticalLevel(const std::string& what) : DomainError(what) {}
};

class TooShort : public DomainError {
 public:
  explicit TooShort(const std::string& what) : DomainError(what) {}
};

class CriticalValue : public DomainError {
 public:
  CriticalValue(const std::string& what, double nearest)
      : DomainError(what), nearest_critical_value(nearest) {}
  double nearest_critical_value;
};

class NonIntegralClass : public DomainError {
 public:
  explicit NonIntegralClass(const std::string& what) : DomainError(what) {}
};

class DegenerateSingularity : public DomainError {
 public:
  explicit DegenerateSingularity(const std::string& what) : DomainError(what) {}
};

class GenericityViolated : public DomainError {
 public:
  explicit GenericityViolated(const std::string& what) : DomainError(what) {}
};

class NonConnectedInterval : public DomainError {
 public:
  explicit NonConnectedInterval(const std::string& what) : DomainError(what) {}
};

class EmptyTarget : public DomainError {
 public:
  explicit EmptyTarget(const std::string& what) : DomainError(what) {}
};

class UnstableComponentClassification : public DomainError {
 public:
  explicit UnstableComponentClassification(const std::string& what)
      : DomainError(what) {}
};

class CaseDegenerate : public DomainError {
 public:
  explicit CaseDegenerate(const std::string& what) : DomainError(what) {}
};

class NoNontrivialBaseCircle : public DomainError {
 public:
  explicit NoNontrivialBaseCircle(const std::string& what) : DomainError(what) {}
};

class ViolationFound : public DomainError {
 public:
  explicit ViolationFound(const std::string& what) : DomainError(what) {}
};

class UnrenderableRecordKind : public DomainError {
 public:
  explicit UnrenderableRecordKind(const std::string& what) : DomainError(what) {}
};

/// Configuration problems map to exit code 2 in the CLI.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ql
