#include "relgeo/surface.hpp"

#include <cmath>

namespace relgeo {

Jet4 Jet4::from_series(const Vec3Series& s) {
    Jet4 jet;
    jet.position = s.value();
    int n = std::min(4, s.order());
    for (int d = 0; d <= n; ++d)
        for (int j = 0; j <= d; ++j) jet.partials[{d - j, j}] = s.partial(d - j, j);
    return jet;
}

Vec3Series Jet4::to_series(int order) const {
    if (order > 4) throw DomainError("Jet4 holds partials through order 4 only");
    Vec3Series s(order);
    auto fact = [](int m) {
        double f = 1.0;
        for (int k = 2; k <= m; ++k) f *= k;
        return f;
    };
    for (const auto& [mi, val] : partials) {
        auto [i, j] = mi;
        if (i + j > order) continue;
        double scale = 1.0 / (fact(i) * fact(j));
        s.x.at(i, j) = val.x() * scale;
        s.y.at(i, j) = val.y() * scale;
        s.z.at(i, j) = val.z() * scale;
    }
    return s;
}

Vec3Series SurfacePatch::position_series(double u, double v, int order) const {
    if (!eval_) throw DomainError("SurfacePatch: no evaluator");
    if (order > max_jet_order_)
        throw DomainError("SurfacePatch: jet order " + std::to_string(order) +
                          " exceeds the chart's maximum of " + std::to_string(max_jet_order_));
    const double tol_u = 1e-9 * std::abs(domain_.width_u());
    const double tol_v = 1e-9 * std::abs(domain_.width_v());
    bool in_u = domain_.periodic_u || (u >= domain_.u0 - tol_u && u <= domain_.u1 + tol_u);
    bool in_v = domain_.periodic_v || (v >= domain_.v0 - tol_v && v <= domain_.v1 + tol_v);
    if (!in_u || !in_v) throw DomainError("SurfacePatch: point outside chart domain");
    return eval_(u, v, order);
}

namespace {

void require_positive(double x, const char* what) {
    if (!(x > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

SurfacePatch make_sphere(double radius, const Eigen::Vector3d& center) {
    require_positive(radius, "sphere radius");
    Rect dom{0.0, M_PI, 0.0, 2.0 * M_PI, false, true};
    auto eval = [radius, center](double u, double v, int order) {
        Series2 th = Series2::variable_u(u, order);
        Series2 ph = Series2::variable_v(v, order);
        Series2 st = sin(th), ct = cos(th);
        return Vec3Series{radius * st * cos(ph) + center.x(), radius * st * sin(ph) + center.y(),
                          radius * ct + center.z()};
    };
    SurfacePatch p(dom, eval, -1.0);  // inward normal
    p.set_closed(true).set_convex(true).set_polar_u(true).set_kind("sphere");
    return p;
}

SurfacePatch make_ellipsoid(double a, double b, double c) {
    require_positive(a, "semi-axis");
    require_positive(b, "semi-axis");
    require_positive(c, "semi-axis");
    Rect dom{0.0, M_PI, 0.0, 2.0 * M_PI, false, true};
    auto eval = [a, b, c](double u, double v, int order) {
        Series2 th = Series2::variable_u(u, order);
        Series2 ph = Series2::variable_v(v, order);
        Series2 st = sin(th);
        return Vec3Series{a * st * cos(ph), b * st * sin(ph), c * cos(th)};
    };
    SurfacePatch p(dom, eval, -1.0);
    p.set_closed(true).set_convex(true).set_polar_u(true).set_kind("ellipsoid");
    return p;
}

SurfacePatch make_paraboloid(double l1, double l2, double halfwidth) {
    if (l1 * l2 == 0.0) throw std::invalid_argument("paraboloid requires l1*l2 != 0");
    Rect dom{-halfwidth, halfwidth, -halfwidth, halfwidth, false, false};
    auto eval = [l1, l2](double u, double v, int order) {
        Series2 x = Series2::variable_u(u, order);
        Series2 y = Series2::variable_v(v, order);
        return Vec3Series{x, y, 0.5 * (l1 * (x * x) + l2 * (y * y))};
    };
    SurfacePatch p(dom, eval, 1.0);  // upward normal
    p.set_kind("paraboloid");
    return p;
}

SurfacePatch make_paraboloid_family(const ParaboloidFamilySpec& spec, double halfwidth) {
    if (spec.l1 * spec.l2 == 0.0)
        throw std::invalid_argument("paraboloid family requires l1*l2 != 0");
    Rect dom{-halfwidth, halfwidth, -halfwidth, halfwidth, false, false};
    auto eval = [spec](double u, double v, int order) {
        Series2 x = Series2::variable_u(u, order);
        Series2 y = Series2::variable_v(v, order);
        Series2 z = 0.5 * (spec.l1 * (x * x) + spec.l2 * (y * y));
        // Unit normal of the *undeformed* paraboloid.
        Series2 w = inv(sqrt(1.0 + pow(spec.l1 * x, 2.0) + pow(spec.l2 * y, 2.0)));
        Series2 quartic = spec.a * (x * x * x * x) + spec.b * (x * x * y * y) +
                          spec.c * (y * y * y * y);
        Series2 amp = spec.t * quartic * w;
        return Vec3Series{x - amp * (spec.l1 * x), y - amp * (spec.l2 * y), z + amp};
    };
    SurfacePatch p(dom, eval, 1.0);
    p.set_kind("paraboloid_family");
    return p;
}

SurfacePatch make_torus(double R, double r) {
    require_positive(R, "torus major radius");
    require_positive(r, "torus minor radius");
    if (!(R > r)) throw std::invalid_argument("torus requires R > r");
    Rect dom{0.0, 2.0 * M_PI, 0.0, 2.0 * M_PI, true, true};
    auto eval = [R, r](double u, double v, int order) {
        Series2 th = Series2::variable_u(u, order);
        Series2 ph = Series2::variable_v(v, order);
        Series2 w = R + r * cos(th);
        return Vec3Series{w * cos(ph), w * sin(ph), r * sin(th)};
    };
    SurfacePatch p(dom, eval, 1.0);
    p.set_closed(true).set_kind("torus");
    return p;
}

SurfacePatch make_graph(std::function<Series2(const Series2&, const Series2&)> height,
                        const Rect& box, std::string kind) {
    auto eval = [height](double u, double v, int order) {
        Series2 x = Series2::variable_u(u, order);
        Series2 y = Series2::variable_v(v, order);
        return Vec3Series{x, y, height(x, y)};
    };
    SurfacePatch p(box, eval, 1.0);
    p.set_kind(std::move(kind));
    return p;
}

SurfacePatch make_graph(const Expression& height, const Rect& box) {
    return make_graph(
        [height](const Series2& x, const Series2& y) { return height.eval(x, y); }, box,
        "graph");
}

namespace {

// Second-order central-difference coefficients, offsets -2..2.
const std::array<std::array<double, 5>, 5> kCentral = {{
    {0, 0, 1, 0, 0},         // order 0
    {0, -0.5, 0, 0.5, 0},    // order 1
    {0, 1, -2, 1, 0},        // order 2
    {-0.5, 1, 0, -1, 0.5},   // order 3
    {1, -4, 6, -4, 1},       // order 4
}};

int stencil_reach(int order) { return order == 0 ? 0 : (order <= 2 ? 1 : 2); }

}  // namespace

Jet4 fd_jet(const std::function<Eigen::Vector3d(double, double)>& chart, const Rect& domain,
            double u, double v, int order) {
    if (order < 0 || order > 4) throw std::invalid_argument("fd_jet: order must be 0..4");
    if (!domain.contains(u, v)) throw DomainError("fd_jet: point outside domain");

    const double eps = std::numeric_limits<double>::epsilon();
    const double scale = domain.diameter();

    Jet4 jet;
    jet.position = chart(u, v);
    jet.partials[{0, 0}] = jet.position;

    for (int k = 1; k <= order; ++k) {
        const double h = std::pow(eps, 1.0 / (k + 2)) * scale;
        for (int i = 0; i <= k; ++i) {
            int j = k - i;
            int ru = stencil_reach(i), rv = stencil_reach(j);
            if (!domain.periodic_u &&
                (u - ru * h < domain.u0 || u + ru * h > domain.u1))
                throw DomainError("fd_jet: stencil leaves domain in u");
            if (!domain.periodic_v &&
                (v - rv * h < domain.v0 || v + rv * h > domain.v1))
                throw DomainError("fd_jet: stencil leaves domain in v");

            Eigen::Vector3d acc = Eigen::Vector3d::Zero();
            for (int mu = -ru; mu <= ru; ++mu) {
                double cu = kCentral[static_cast<size_t>(i)][static_cast<size_t>(mu + 2)];
                if (cu == 0.0) continue;
                for (int mv = -rv; mv <= rv; ++mv) {
                    double cv = kCentral[static_cast<size_t>(j)][static_cast<size_t>(mv + 2)];
                    if (cv == 0.0) continue;
                    acc += cu * cv * chart(u + mu * h, v + mv * h);
                }
            }
            jet.partials[{i, j}] = acc / std::pow(h, k);
        }
    }
    return jet;
}

SurfacePatch make_fd_patch(std::function<Eigen::Vector3d(double, double)> chart, Rect domain,
                           double orientation) {
    auto eval = [chart, domain](double u, double v, int order) {
        return fd_jet(chart, domain, u, v, std::min(order, 4)).to_series(order);
    };
    SurfacePatch p(domain, eval, orientation);
    p.set_max_jet_order(4).set_kind("fd_chart");
    return p;
}

}  // namespace relgeo
