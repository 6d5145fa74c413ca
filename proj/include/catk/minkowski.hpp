#pragma once

#include <vector>

#include "catk/common.hpp"

namespace catk {

/// Coordinate vector in the ambient bilinear-form space R^{n,1}
/// (n spacelike coordinates followed by one timelike coordinate).
struct MinkowskiVec {
    std::vector<double> c;

    MinkowskiVec() = default;
    explicit MinkowskiVec(std::vector<double> coords) : c(std::move(coords)) {}
    MinkowskiVec(std::initializer_list<double> coords) : c(coords) {}

    std::size_t size() const { return c.size(); }
    double operator[](std::size_t i) const { return c[i]; }
    double& operator[](std::size_t i) { return c[i]; }

    bool finite() const;
    double euclid_sq() const;

    MinkowskiVec& axpy(double a, const MinkowskiVec& v);  // *this += a*v
    MinkowskiVec& scale(double a);
};

MinkowskiVec operator+(const MinkowskiVec& a, const MinkowskiVec& b);
MinkowskiVec operator-(const MinkowskiVec& a, const MinkowskiVec& b);
MinkowskiVec operator*(double s, const MinkowskiVec& a);

/// The bilinear form <u|v> = u_1 v_1 + ... + u_n v_n - u_{n+1} v_{n+1}.
double mink_form(const MinkowskiVec& u, const MinkowskiVec& v);

/// Validated point on the upper sheet <x,x> = -1, last coordinate >= 1.
class HPoint {
public:
    explicit HPoint(MinkowskiVec v);

    const MinkowskiVec& vec() const { return v_; }
    std::size_t ambient_dim() const { return v_.size(); }
    double operator[](std::size_t i) const { return v_[i]; }

    /// Base point (0,...,0,1) of H^n.
    static HPoint base(int n = 2);

    /// Point of H^2 at hyperbolic distance r from the base point, direction phi.
    static HPoint polar(double r, double phi);

private:
    MinkowskiVec v_;
};

/// Rescale onto the sheet; drift beyond the (scale-aware) model tolerance
/// throws. `err_scale` lets callers widen the budget to the magnitude of the
/// terms that produced v, which is what the rounding error actually tracks.
HPoint reproject(const MinkowskiVec& v, double err_scale = 0.0);

/// Unchecked rescale for constructions that intentionally leave the sheet
/// (coordinate drops, chart work). No drift policing.
MinkowskiVec rescale_to_sheet(const MinkowskiVec& v);

/// Unit spacelike direction attached to a base point, <base,dir> = 0.
struct HTangent {
    HPoint base;
    MinkowskiVec dir;

    HTangent(HPoint b, MinkowskiVec d);

    /// Point at arc s along the geodesic emanating from base: cosh(s)*base + sinh(s)*dir.
    HPoint at(double s) const;
};

double hdist(const HPoint& x, const HPoint& y);

/// Unit tangent at x pointing toward y (requires x != y).
HTangent unit_tangent_toward(const HPoint& x, const HPoint& y);

/// Orthonormal basis of the tangent space at p (n directions).
std::vector<MinkowskiVec> tangent_basis(const HPoint& p);

/// Point p on [x,y] with d(x,p) = s, for s in [0, d(x,y)] (+/- geo tolerance).
HPoint geodesic_point(const HPoint& x, const HPoint& y, double s);

/// Vertex angle at x of the geodesic triangle (x,y,z), solved from the
/// hyperbolic cosine law and clamped to [0, pi].
double alexandrov_angle(const HPoint& x, const HPoint& y, const HPoint& z);

/// Poincare disk chart, display and brute-force-search use only.
void to_disk(const HPoint& p, double& u1, double& u2);
HPoint from_disk(double u1, double u2);

/// Linear isometry of the ambient form restricted to the upper sheet.
class HIsometry {
public:
    explicit HIsometry(int n);  // identity on H^n

    HPoint apply(const HPoint& p) const;
    HIsometry then(const HIsometry& after) const;  // composition: after * this

    static HIsometry rotation(int n, int i, int j, double angle);
    static HIsometry boost(int n, int axis, double s);

    // H^2 builders.
    static HIsometry rotation_about(const HPoint& p, double angle);
    static HIsometry translation(double phi, double s);  // along the line through base, direction phi
    static HIsometry reflection(double phi);             // across the line through base, direction phi

private:
    int n_;
    std::vector<double> m_;  // (n+1)x(n+1), row-major
    double at(int r, int c) const { return m_[static_cast<std::size_t>(r) * (n_ + 1) + c]; }
    double& at(int r, int c) { return m_[static_cast<std::size_t>(r) * (n_ + 1) + c]; }
};

}  // namespace catk
