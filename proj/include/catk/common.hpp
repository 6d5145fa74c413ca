#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace catk {

// Central numeric tolerances. Geometry code treats drift beyond these as an
// error, not something to patch over silently.
struct Tol {
    static constexpr double model = 1e-10;      // hyperboloid constraint drift (scale-aware)
    static constexpr double geo = 1e-9;         // geodesic arc bookkeeping
    static constexpr double cat = 1e-8;         // comparison-inequality slack
    static constexpr double cos_clamp = 1e-7;   // tolerated |cos| excess before arccos
    static constexpr double ray_param = 1e-10;  // golden-section parameter tolerance
    static constexpr double tree = 1e-12;       // arc-length bookkeeping on trees
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimMismatch : public Error {
public:
    using Error::Error;
};

/// Input outside an operation's domain (bad parameter, invalid point pair).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A point drifted off its model constraint set beyond tolerance.
class DriftError : public Error {
public:
    using Error::Error;
};

/// A runtime audit (nonexpansiveness, contraction factor) tripped.
class AuditError : public Error {
public:
    using Error::Error;
};

class BudgetError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(int line, const std::string& msg)
        : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_ = 0;
};

using Rng = std::mt19937_64;

inline double sq(double x) { return x * x; }

/// arccosh(1 + t) for t >= 0, stable for small t.
inline double acosh1p(double t) {
    if (t < 0.0) t = 0.0;
    return std::log1p(t + std::sqrt(t * (t + 2.0)));
}

/// Clamp a cosine to [-1, 1]; excess beyond `excess` is an error, not data.
inline double clamp_cos(double c, double excess = Tol::cos_clamp) {
    if (c > 1.0 + excess || c < -1.0 - excess)
        throw DomainError("cosine out of range by more than clamp tolerance: " + std::to_string(c));
    if (c > 1.0) return 1.0;
    if (c < -1.0) return -1.0;
    return c;
}

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace catk
