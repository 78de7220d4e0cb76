#pragma once

#include <stdexcept>
#include <string>

namespace maxlab {

/// Base class for every failure raised by the library. `stage()` names the
/// pipeline stage that produced it so the CLI can print tagged diagnostics.
class Error : public std::runtime_error {
public:
    Error(std::string stage, const std::string& what)
        : std::runtime_error(what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("domain", what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("config", what) {}
};

class SolverFailure : public Error {
public:
    SolverFailure(const std::string& what, double last_residual, int iterations)
        : Error("solver", what), last_residual_(last_residual), iterations_(iterations) {}

    double last_residual() const noexcept { return last_residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double last_residual_;
    int iterations_;
};

/// Raised when no damped Newton step keeps the graph inside the spacelike
/// set; usually means the boundary data is too steep.
class SpacelikeBreakdown : public Error {
public:
    explicit SpacelikeBreakdown(const std::string& what) : Error("solver", what) {}
};

class GeometryError : public Error {
public:
    explicit GeometryError(const std::string& what) : Error("geometry", what) {}
};

class MeshError : public Error {
public:
    explicit MeshError(const std::string& what) : Error("geodesic", what) {}
};

/// The requested geodesic disc reaches vertices where the surface fields are
/// not available, so D(p,r) is not compactly contained in the surface.
class ContainmentError : public Error {
public:
    explicit ContainmentError(const std::string& what) : Error("geodesic", what) {}
};

class UndefinedBound : public Error {
public:
    explicit UndefinedBound(const std::string& what) : Error("estimate", what) {}
};

}  // namespace maxlab
