#pragma once

#include <stdexcept>
#include <string>

namespace harmsurf {

/// Failure categories. Each maps to a CLI exit code.
enum class ErrorKind {
  config,      // invalid input parameters or files
  domain,      // degenerate domain, point on a slit, pole hit
  closure,     // period problem could not be closed
  quadrature,  // integration tolerance not reached
  mesh,        // tessellation failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorKind::config, w) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorKind::domain, w) {}
};
struct ClosureError : Error {
  explicit ClosureError(const std::string& w) : Error(ErrorKind::closure, w) {}
};
struct QuadratureError : Error {
  explicit QuadratureError(const std::string& w) : Error(ErrorKind::quadrature, w) {}
};
struct MeshError : Error {
  explicit MeshError(const std::string& w) : Error(ErrorKind::mesh, w) {}
};

const char* to_string(ErrorKind kind) noexcept;

/// 0 success, 2 config, 3 closure, 4 quadrature, 5 mesh.
int exit_code(ErrorKind kind) noexcept;

}  // namespace harmsurf
