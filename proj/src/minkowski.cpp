#include "catk/minkowski.hpp"

#include <algorithm>
#include <cmath>

namespace catk {

bool MinkowskiVec::finite() const {
    return std::all_of(c.begin(), c.end(), [](double x) { return std::isfinite(x); });
}

double MinkowskiVec::euclid_sq() const {
    double s = 0.0;
    for (double x : c) s += x * x;
    return s;
}

MinkowskiVec& MinkowskiVec::axpy(double a, const MinkowskiVec& v) {
    if (v.size() != size()) throw DimMismatch("axpy: dimension mismatch");
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += a * v.c[i];
    return *this;
}

MinkowskiVec& MinkowskiVec::scale(double a) {
    for (double& x : c) x *= a;
    return *this;
}

MinkowskiVec operator+(const MinkowskiVec& a, const MinkowskiVec& b) {
    MinkowskiVec r = a;
    r.axpy(1.0, b);
    return r;
}

MinkowskiVec operator-(const MinkowskiVec& a, const MinkowskiVec& b) {
    MinkowskiVec r = a;
    r.axpy(-1.0, b);
    return r;
}

MinkowskiVec operator*(double s, const MinkowskiVec& a) {
    MinkowskiVec r = a;
    r.scale(s);
    return r;
}

double mink_form(const MinkowskiVec& u, const MinkowskiVec& v) {
    if (u.size() != v.size()) throw DimMismatch("mink_form: dimension mismatch");
    if (u.size() < 2) throw DimMismatch("mink_form: ambient dimension must be >= 2");
    const std::size_t n = u.size() - 1;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += u[i] * v[i];
    return s - u[n] * v[n];
}

HPoint::HPoint(MinkowskiVec v) : v_(std::move(v)) {
    if (v_.size() < 2) throw DimMismatch("HPoint: ambient dimension must be >= 2");
    if (!v_.finite()) throw DomainError("HPoint: non-finite coordinates");
    // The absolute constraint <x,x> = -1 can only be evaluated up to roundoff
    // of the form itself, so the tolerance scales with the coordinate size.
    const double q = mink_form(v_, v_);
    const double slack = Tol::model * std::max(1.0, v_.euclid_sq());
    if (std::abs(q + 1.0) > slack)
        throw DriftError("HPoint: <x,x> = " + std::to_string(q) + " drifted off -1");
    if (v_[v_.size() - 1] < 1.0 - Tol::model)
        throw DriftError("HPoint: not on the upper sheet");
}

HPoint HPoint::base(int n) {
    MinkowskiVec v(std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
    v[static_cast<std::size_t>(n)] = 1.0;
    return HPoint(std::move(v));
}

HPoint HPoint::polar(double r, double phi) {
    return HPoint(MinkowskiVec{std::sinh(r) * std::cos(phi), std::sinh(r) * std::sin(phi), std::cosh(r)});
}

HPoint reproject(const MinkowskiVec& v, double err_scale) {
    const double q = -mink_form(v, v);
    const double slack = Tol::model * std::max({1.0, v.euclid_sq(), err_scale});
    const std::size_t last = v.size() - 1;
    if (q > 0.25) {
        if (std::abs(q - 1.0) > slack)
            throw DriftError("reproject: drift " + std::to_string(q - 1.0) + " exceeds model tolerance");
        MinkowskiVec w = v;
        w.scale(1.0 / std::sqrt(q));
        if (w[last] < 0.0) throw DriftError("reproject: wrong sheet");
        return HPoint(std::move(w));
    }
    // Far out on the sheet the form cancels catastrophically; rebuild the
    // last coordinate from the spatial ones and treat its change as drift.
    double spatial = 0.0;
    for (std::size_t i = 0; i < last; ++i) spatial += v[i] * v[i];
    const double rebuilt = std::sqrt(1.0 + spatial);
    if (v[last] < 0.0) throw DriftError("reproject: wrong sheet");
    if (std::abs(v[last] * v[last] - rebuilt * rebuilt) > slack)
        throw DriftError("reproject: drift exceeds model tolerance (far regime)");
    MinkowskiVec w = v;
    w[last] = rebuilt;
    return HPoint(std::move(w));
}

MinkowskiVec rescale_to_sheet(const MinkowskiVec& v) {
    const double q = -mink_form(v, v);
    if (!(q > 0.0)) throw DriftError("rescale_to_sheet: vector is not timelike");
    MinkowskiVec w = v;
    w.scale(1.0 / std::sqrt(q));
    return w;
}

HTangent::HTangent(HPoint b, MinkowskiVec d) : base(std::move(b)), dir(std::move(d)) {
    if (dir.size() != base.vec().size()) throw DimMismatch("HTangent: dimension mismatch");
    const double q = mink_form(dir, dir);
    if (q < 0.0) throw DomainError("HTangent: direction is not spacelike");
    const double t = mink_form(base.vec(), dir);
    if (std::abs(t) > Tol::model * std::max(1.0, std::sqrt(base.vec().euclid_sq() * dir.euclid_sq())))
        throw DomainError("HTangent: direction is not tangent to the sheet at base");
}

HPoint HTangent::at(double s) const {
    MinkowskiVec p = std::cosh(s) * base.vec();
    p.axpy(std::sinh(s), dir);
    // rounding budget of the superposition: the terms, not the result
    const double terms = sq(std::cosh(s)) * std::max({1.0, base.vec().euclid_sq(), dir.euclid_sq()});
    return reproject(p, 4.0 * terms);
}

double hdist(const HPoint& x, const HPoint& y) {
    // <x-y, x-y> = -2 - 2<x,y>, so t = <x-y,x-y>/2 = -<x,y> - 1.  The
    // difference form keeps nearby points relatively accurate.
    const MinkowskiVec diff = x.vec() - y.vec();
    double t = 0.5 * mink_form(diff, diff);
    const double slack = Tol::model * std::max(1.0, std::max(x.vec().euclid_sq(), y.vec().euclid_sq()));
    if (t < -slack) throw DomainError("hdist: -<x,y> < 1, inputs are off the sheet");
    return acosh1p(std::max(t, 0.0));
}

HTangent unit_tangent_toward(const HPoint& x, const HPoint& y) {
    // Tangential component of y at x: u = y + <x,y> x, with <u,u> = sinh^2 d.
    const double xy = mink_form(x.vec(), y.vec());
    MinkowskiVec u = y.vec();
    u.axpy(xy, x.vec());
    // A second projection pass removes the O(eps) normal residue, which the
    // upcoming normalization would otherwise amplify for nearby points.
    u.axpy(mink_form(x.vec(), u), x.vec());
    const double q = mink_form(u, u);
    if (!(q > 0.0)) throw DomainError("unit_tangent_toward: coincident points");
    u.scale(1.0 / std::sqrt(q));
    return HTangent(x, std::move(u));
}

std::vector<MinkowskiVec> tangent_basis(const HPoint& p) {
    const std::size_t dim = p.ambient_dim() - 1;
    std::vector<MinkowskiVec> basis;
    basis.reserve(dim);
    for (std::size_t i = 0; i <= dim && basis.size() < dim; ++i) {
        MinkowskiVec v(std::vector<double>(dim + 1, 0.0));
        v[i] = 1.0;
        v.axpy(mink_form(p.vec(), v), p.vec());  // tangential component at p
        for (const MinkowskiVec& b : basis) v.axpy(-mink_form(b, v), b);
        const double q = mink_form(v, v);  // positive definite on the tangent space
        if (q > 1e-12) {
            v.scale(1.0 / std::sqrt(q));
            basis.push_back(std::move(v));
        }
    }
    if (basis.size() != dim) throw DriftError("tangent_basis: failed to span the tangent space");
    return basis;
}

HPoint geodesic_point(const HPoint& x, const HPoint& y, double s) {
    const double d = hdist(x, y);
    if (s < -Tol::geo || s > d + Tol::geo)
        throw DomainError("geodesic_point: arc " + std::to_string(s) + " outside [0, " + std::to_string(d) + "]");
    s = std::clamp(s, 0.0, d);
    if (d <= Tol::geo) return x;  // only s ~ 0 reaches here
    if (s == 0.0) return x;
    if (s == d) return y;
    // Evaluate from the nearer endpoint: the cosh/sinh superposition cancels
    // catastrophically when the evaluation arc is long.
    if (s <= 0.5 * d) return unit_tangent_toward(x, y).at(s);
    return unit_tangent_toward(y, x).at(d - s);
}

double alexandrov_angle(const HPoint& x, const HPoint& y, const HPoint& z) {
    const double b = hdist(x, y);
    const double c = hdist(x, z);
    if (b < Tol::geo || c < Tol::geo) throw DomainError("alexandrov_angle: degenerate vertex");
    const double a = hdist(y, z);
    const double cosa = (std::cosh(b) * std::cosh(c) - std::cosh(a)) / (std::sinh(b) * std::sinh(c));
    return std::acos(clamp_cos(cosa));
}

void to_disk(const HPoint& p, double& u1, double& u2) {
    if (p.ambient_dim() != 3) throw DimMismatch("to_disk: H^2 only");
    u1 = p[0] / (1.0 + p[2]);
    u2 = p[1] / (1.0 + p[2]);
}

HPoint from_disk(double u1, double u2) {
    const double q = u1 * u1 + u2 * u2;
    if (q >= 1.0) throw DomainError("from_disk: point outside the unit disk");
    const double f = 1.0 / (1.0 - q);
    return reproject(MinkowskiVec{2.0 * u1 * f, 2.0 * u2 * f, (1.0 + q) * f});
}

HIsometry::HIsometry(int n) : n_(n), m_(static_cast<std::size_t>(n + 1) * (n + 1), 0.0) {
    if (n < 1) throw DimMismatch("HIsometry: n must be >= 1");
    for (int i = 0; i <= n; ++i) at(i, i) = 1.0;
}

HPoint HIsometry::apply(const HPoint& p) const {
    if (static_cast<int>(p.ambient_dim()) != n_ + 1) throw DimMismatch("HIsometry::apply: dimension mismatch");
    MinkowskiVec r(std::vector<double>(static_cast<std::size_t>(n_) + 1, 0.0));
    double frob = 0.0;
    for (double m : m_) frob += m * m;
    for (int i = 0; i <= n_; ++i) {
        double s = 0.0;
        for (int j = 0; j <= n_; ++j) s += at(i, j) * p[static_cast<std::size_t>(j)];
        r[static_cast<std::size_t>(i)] = s;
    }
    return reproject(r, 4.0 * frob * std::max(1.0, p.vec().euclid_sq()));
}

HIsometry HIsometry::then(const HIsometry& after) const {
    if (after.n_ != n_) throw DimMismatch("HIsometry::then: dimension mismatch");
    HIsometry r(n_);
    for (int i = 0; i <= n_; ++i)
        for (int j = 0; j <= n_; ++j) {
            double s = 0.0;
            for (int k = 0; k <= n_; ++k) s += after.at(i, k) * at(k, j);
            r.at(i, j) = s;
        }
    return r;
}

HIsometry HIsometry::rotation(int n, int i, int j, double angle) {
    HIsometry r(n);
    if (i < 0 || j < 0 || i >= n || j >= n || i == j)
        throw DomainError("rotation: needs two distinct spacelike axes");
    r.at(i, i) = std::cos(angle);
    r.at(j, j) = std::cos(angle);
    r.at(i, j) = -std::sin(angle);
    r.at(j, i) = std::sin(angle);
    return r;
}

HIsometry HIsometry::boost(int n, int axis, double s) {
    HIsometry r(n);
    if (axis < 0 || axis >= n) throw DomainError("boost: invalid axis");
    r.at(axis, axis) = std::cosh(s);
    r.at(n, n) = std::cosh(s);
    r.at(axis, n) = std::sinh(s);
    r.at(n, axis) = std::sinh(s);
    return r;
}

HIsometry HIsometry::rotation_about(const HPoint& p, double angle) {
    if (p.ambient_dim() != 3) throw DimMismatch("rotation_about: H^2 only");
    const double r = hdist(HPoint::base(2), p);
    const double phi = std::atan2(p[1], p[0]);
    const HIsometry to_p = rotation(2, 0, 1, -phi).then(boost(2, 0, r)).then(rotation(2, 0, 1, phi));
    const HIsometry from_p = rotation(2, 0, 1, -phi).then(boost(2, 0, -r)).then(rotation(2, 0, 1, phi));
    return from_p.then(rotation(2, 0, 1, angle)).then(to_p);
}

HIsometry HIsometry::translation(double phi, double s) {
    return rotation(2, 0, 1, -phi).then(boost(2, 0, s)).then(rotation(2, 0, 1, phi));
}

HIsometry HIsometry::reflection(double phi) {
    HIsometry flip(2);
    flip.at(1, 1) = -1.0;
    return rotation(2, 0, 1, -phi).then(flip).then(rotation(2, 0, 1, phi));
}

}  // namespace catk
