#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace relgeo {

/// Truncated bivariate Taylor series around a base point.
///
/// Coefficients c(i,j) multiply du^i dv^j for i+j <= order().  All arithmetic
/// is exact on the retained coefficients; binary operations truncate to the
/// smaller of the two operand orders, and differentiation lowers the order by
/// one.  This is the workhorse for analytic jets: every curvature quantity in
/// the library is obtained by series arithmetic, never by re-differencing
/// computed values.
class Series2 {
public:
    explicit Series2(int order)
        : ord_(order), c_(static_cast<size_t>((order + 1) * (order + 2) / 2), 0.0) {
        if (order < 0) throw std::invalid_argument("Series2: negative order");
    }

    static Series2 constant(double value, int order) {
        Series2 s(order);
        s.at(0, 0) = value;
        return s;
    }

    /// The coordinate function u expanded at u0 (value u0, unit slope).
    static Series2 variable_u(double u0, int order) {
        Series2 s(order);
        s.at(0, 0) = u0;
        if (order >= 1) s.at(1, 0) = 1.0;
        return s;
    }

    static Series2 variable_v(double v0, int order) {
        Series2 s(order);
        s.at(0, 0) = v0;
        if (order >= 1) s.at(0, 1) = 1.0;
        return s;
    }

    int order() const { return ord_; }

    double coeff(int i, int j) const {
        return (i < 0 || j < 0 || i + j > ord_) ? 0.0 : c_[idx(i, j)];
    }

    double& at(int i, int j) { return c_[idx(i, j)]; }

    double value() const { return c_[0]; }

    /// Partial derivative d^{i+j} / du^i dv^j at the base point.
    double partial(int i, int j) const {
        return coeff(i, j) * factorial(i) * factorial(j);
    }

    Series2 truncated(int k) const {
        if (k >= ord_) return *this;
        Series2 r(k);
        for (int d = 0; d <= k; ++d)
            for (int j = 0; j <= d; ++j) r.at(d - j, j) = coeff(d - j, j);
        return r;
    }

    Series2 derivative_u() const {
        Series2 r(ord_ > 0 ? ord_ - 1 : 0);
        if (ord_ == 0) return r;
        for (int d = 0; d <= ord_ - 1; ++d)
            for (int j = 0; j <= d; ++j) r.at(d - j, j) = coeff(d - j + 1, j) * (d - j + 1);
        return r;
    }

    Series2 derivative_v() const {
        Series2 r(ord_ > 0 ? ord_ - 1 : 0);
        if (ord_ == 0) return r;
        for (int d = 0; d <= ord_ - 1; ++d)
            for (int j = 0; j <= d; ++j) r.at(d - j, j) = coeff(d - j, j + 1) * (j + 1);
        return r;
    }

    Series2 operator-() const {
        Series2 r(*this);
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend Series2 operator+(const Series2& a, const Series2& b) {
        int n = std::min(a.ord_, b.ord_);
        Series2 r(n);
        for (int d = 0; d <= n; ++d)
            for (int j = 0; j <= d; ++j) r.at(d - j, j) = a.coeff(d - j, j) + b.coeff(d - j, j);
        return r;
    }

    friend Series2 operator-(const Series2& a, const Series2& b) { return a + (-b); }

    friend Series2 operator*(const Series2& a, const Series2& b) {
        int n = std::min(a.ord_, b.ord_);
        Series2 r(n);
        for (int da = 0; da <= n; ++da)
            for (int ja = 0; ja <= da; ++ja) {
                double ca = a.coeff(da - ja, ja);
                if (ca == 0.0) continue;
                for (int db = 0; db + da <= n; ++db)
                    for (int jb = 0; jb <= db; ++jb)
                        r.at(da - ja + db - jb, ja + jb) += ca * b.coeff(db - jb, jb);
            }
        return r;
    }

    friend Series2 operator+(const Series2& a, double s) {
        Series2 r(a);
        r.c_[0] += s;
        return r;
    }
    friend Series2 operator+(double s, const Series2& a) { return a + s; }
    friend Series2 operator-(const Series2& a, double s) { return a + (-s); }
    friend Series2 operator-(double s, const Series2& a) { return (-a) + s; }
    friend Series2 operator*(const Series2& a, double s) {
        Series2 r(a);
        for (auto& x : r.c_) x *= s;
        return r;
    }
    friend Series2 operator*(double s, const Series2& a) { return a * s; }
    friend Series2 operator/(const Series2& a, double s) { return a * (1.0 / s); }

private:
    static int64_t factorial(int n) {
        int64_t f = 1;
        for (int k = 2; k <= n; ++k) f *= k;
        return f;
    }

    size_t idx(int i, int j) const {
        int d = i + j;
        if (i < 0 || j < 0 || d > ord_) throw std::out_of_range("Series2 index");
        return static_cast<size_t>(d * (d + 1) / 2 + j);
    }

    int ord_;
    std::vector<double> c_;
};

/// Univariate composition g(a): derivs[k] must hold g^{(k)} evaluated at the
/// constant term of a, for k = 0 .. a.order().  Works because (a - a0) is
/// nilpotent in the truncated algebra.
Series2 compose1(const Series2& a, const std::vector<double>& derivs);

/// Bivariate composition g(a, b) with mixed partials g_{u^i v^j} supplied by
/// the callback, evaluated at (a0, b0).  Partials are required through the
/// common series order.
Series2 compose2(const Series2& a, const Series2& b,
                 const std::function<double(int, int)>& partial_ab);

Series2 inv(const Series2& a);
inline Series2 operator/(const Series2& a, const Series2& b) { return a * inv(b); }
inline Series2 operator/(double s, const Series2& b) { return inv(b) * s; }
Series2 sqrt(const Series2& a);
Series2 exp(const Series2& a);
Series2 log(const Series2& a);
Series2 sin(const Series2& a);
Series2 cos(const Series2& a);
/// |a|^p for a with non-zero constant term (no sign crossing in the jet).
Series2 pow_abs(const Series2& a, double p);
/// a^p; requires a positive constant term unless p is an integer.
Series2 pow(const Series2& a, double p);
Series2 abs(const Series2& a);

/// A 3-vector of series sharing one base point: a surface-position jet.
struct Vec3Series {
    Series2 x, y, z;

    explicit Vec3Series(int order) : x(order), y(order), z(order) {}
    Vec3Series(Series2 x_, Series2 y_, Series2 z_)
        : x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {}

    int order() const { return std::min({x.order(), y.order(), z.order()}); }

    Eigen::Vector3d value() const { return {x.value(), y.value(), z.value()}; }
    Eigen::Vector3d partial(int i, int j) const {
        return {x.partial(i, j), y.partial(i, j), z.partial(i, j)};
    }

    Vec3Series derivative_u() const { return {x.derivative_u(), y.derivative_u(), z.derivative_u()}; }
    Vec3Series derivative_v() const { return {x.derivative_v(), y.derivative_v(), z.derivative_v()}; }
    Vec3Series truncated(int k) const { return {x.truncated(k), y.truncated(k), z.truncated(k)}; }

    friend Vec3Series operator+(const Vec3Series& a, const Vec3Series& b) {
        return {a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend Vec3Series operator-(const Vec3Series& a, const Vec3Series& b) {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend Vec3Series operator*(const Series2& s, const Vec3Series& a) {
        return {s * a.x, s * a.y, s * a.z};
    }
    friend Vec3Series operator*(double s, const Vec3Series& a) {
        return {s * a.x, s * a.y, s * a.z};
    }
};

Series2 dot(const Vec3Series& a, const Vec3Series& b);
Vec3Series cross(const Vec3Series& a, const Vec3Series& b);

}  // namespace relgeo
