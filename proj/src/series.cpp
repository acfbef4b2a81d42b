#include "relgeo/series.hpp"

namespace relgeo {

Series2 compose1(const Series2& a, const std::vector<double>& derivs) {
    const int n = a.order();
    if (static_cast<int>(derivs.size()) < n + 1)
        throw std::invalid_argument("compose1: not enough derivatives");
    Series2 da = a;
    da.at(0, 0) = 0.0;  // nilpotent part
    Series2 result = Series2::constant(derivs[0], n);
    Series2 power = Series2::constant(1.0, n);
    double kfact = 1.0;
    for (int k = 1; k <= n; ++k) {
        power = power * da;
        kfact *= k;
        result = result + power * (derivs[static_cast<size_t>(k)] / kfact);
    }
    return result;
}

Series2 compose2(const Series2& a, const Series2& b,
                 const std::function<double(int, int)>& partial_ab) {
    const int n = std::min(a.order(), b.order());
    Series2 da = a.truncated(n);
    da.at(0, 0) = 0.0;
    Series2 db = b.truncated(n);
    db.at(0, 0) = 0.0;

    // Precompute powers of the nilpotent parts.
    std::vector<Series2> pa, pb;
    pa.reserve(n + 1);
    pb.reserve(n + 1);
    pa.push_back(Series2::constant(1.0, n));
    pb.push_back(Series2::constant(1.0, n));
    for (int k = 1; k <= n; ++k) {
        pa.push_back(pa.back() * da);
        pb.push_back(pb.back() * db);
    }

    auto fact = [](int m) {
        double f = 1.0;
        for (int k = 2; k <= m; ++k) f *= k;
        return f;
    };

    Series2 result(n);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) {
            double coef = partial_ab(i, j) / (fact(i) * fact(j));
            if (coef == 0.0) continue;
            result = result + coef * (pa[static_cast<size_t>(i)] * pb[static_cast<size_t>(j)]);
        }
    return result;
}

namespace {

std::vector<double> univariate_derivs(int n, double a0, const std::function<double(int, double)>& dk) {
    std::vector<double> d(static_cast<size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) d[static_cast<size_t>(k)] = dk(k, a0);
    return d;
}

}  // namespace

Series2 inv(const Series2& a) {
    double a0 = a.value();
    if (a0 == 0.0) throw std::domain_error("Series2 inv: zero constant term");
    return compose1(a, univariate_derivs(a.order(), a0, [](int k, double x) {
                        // d^k/dx^k (1/x) = (-1)^k k! / x^{k+1}
                        double f = 1.0;
                        for (int m = 1; m <= k; ++m) f *= -m;
                        return f / std::pow(x, k + 1);
                    }));
}

Series2 sqrt(const Series2& a) { return pow(a, 0.5); }

Series2 exp(const Series2& a) {
    double e0 = std::exp(a.value());
    return compose1(a, univariate_derivs(a.order(), a.value(), [e0](int, double) { return e0; }));
}

Series2 log(const Series2& a) {
    double a0 = a.value();
    if (a0 <= 0.0) throw std::domain_error("Series2 log: non-positive constant term");
    return compose1(a, univariate_derivs(a.order(), a0, [](int k, double x) {
                        if (k == 0) return std::log(x);
                        double f = 1.0;
                        for (int m = 1; m < k; ++m) f *= -m;
                        return f / std::pow(x, k);
                    }));
}

Series2 sin(const Series2& a) {
    return compose1(a, univariate_derivs(a.order(), a.value(), [](int k, double x) {
                        switch (k % 4) {
                            case 0: return std::sin(x);
                            case 1: return std::cos(x);
                            case 2: return -std::sin(x);
                            default: return -std::cos(x);
                        }
                    }));
}

Series2 cos(const Series2& a) {
    return compose1(a, univariate_derivs(a.order(), a.value(), [](int k, double x) {
                        switch (k % 4) {
                            case 0: return std::cos(x);
                            case 1: return -std::sin(x);
                            case 2: return -std::cos(x);
                            default: return std::sin(x);
                        }
                    }));
}

Series2 pow(const Series2& a, double p) {
    double a0 = a.value();
    bool integral = (p == std::floor(p));
    // Non-negative integer exponents are polynomial, so any base works.
    if (integral && p >= 0.0 && p <= 64.0) {
        Series2 r = Series2::constant(1.0, a.order());
        for (int m = 0; m < static_cast<int>(p); ++m) r = r * a;
        return r;
    }
    if (a0 <= 0.0 && !integral)
        throw std::domain_error("Series2 pow: non-positive base with fractional exponent");
    if (a0 == 0.0) throw std::domain_error("Series2 pow: zero constant term");
    return compose1(a, univariate_derivs(a.order(), a0, [p](int k, double x) {
                        double f = 1.0;
                        for (int m = 0; m < k; ++m) f *= (p - m);
                        return f * std::pow(x, p - k);
                    }));
}

Series2 pow_abs(const Series2& a, double p) {
    double a0 = a.value();
    if (a0 == 0.0) throw std::domain_error("Series2 pow_abs: zero constant term");
    if (a0 > 0.0) return pow(a, p);
    return pow(-a, p);
}

Series2 abs(const Series2& a) {
    double a0 = a.value();
    if (a0 == 0.0) throw std::domain_error("Series2 abs: zero constant term");
    return a0 > 0.0 ? a : -a;
}

Series2 dot(const Vec3Series& a, const Vec3Series& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

Vec3Series cross(const Vec3Series& a, const Vec3Series& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

}  // namespace relgeo
