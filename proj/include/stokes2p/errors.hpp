#pragma once

#include <stdexcept>
#include <string>

namespace stokes2p {

// Projection target is ambiguous: the query point sits outside the tube in
// which the closest-point map is single-valued.
struct NonUniqueProjection : std::runtime_error {
  explicit NonUniqueProjection(const std::string& what) : std::runtime_error(what) {}
};

struct ClearanceTooSmall : std::runtime_error {
  explicit ClearanceTooSmall(const std::string& what) : std::runtime_error(what) {}
};

struct NotStarShaped : std::runtime_error {
  explicit NotStarShaped(const std::string& what) : std::runtime_error(what) {}
};

// An element map developed a non-positive Jacobian (mesh tangled).
struct JacobianFlip : std::runtime_error {
  explicit JacobianFlip(const std::string& what) : std::runtime_error(what) {}
};

struct SingularSystem : std::runtime_error {
  explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

struct ReferenceMismatch : std::runtime_error {
  explicit ReferenceMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stokes2p
