#include "screenbem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <map>
#include <set>
#include <utility>

namespace screenbem {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

Polygon make_triangle(const Vec2& a, const Vec2& b, const Vec2& c)
{
    Polygon t;
    t.vertices = {a, b, c};
    if (cross2(b - a, c - a) < 0.0) std::swap(t.vertices[1], t.vertices[2]);
    return t;
}

Polygon make_rectangle(double x0, double y0, double x1, double y1)
{
    Polygon r;
    r.vertices = {Vec2(x0, y0), Vec2(x1, y0), Vec2(x1, y1), Vec2(x0, y1)};
    return r;
}

void require_lambda(double lambda)
{
    require(std::isfinite(lambda) && lambda > 0.0 && lambda < 1.0,
            "Cantor parameter lambda must lie in (0, 1)");
}

bool point_in_convex(const Polygon& poly, const Vec2& p, double tol)
{
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = poly.vertices[i];
        const Vec2& b = poly.vertices[(i + 1) % n];
        const Vec2 e = b - a;
        if (cross2(e, p - a) < -tol * e.norm()) return false;
    }
    return true;
}

// Separating-axis test for two closed convex polygons.
bool convex_polygons_meet(const Polygon& p, const Polygon& q, double tol)
{
    auto separated_along_edges = [tol](const Polygon& a, const Polygon& b) {
        const std::size_t n = a.vertices.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 e = a.vertices[(i + 1) % n] - a.vertices[i];
            const Vec2 normal(e.y(), -e.x());  // outward for CCW
            const double len = normal.norm();
            double max_a = -INFINITY;
            for (const auto& v : a.vertices) max_a = std::max(max_a, normal.dot(v));
            double min_b = INFINITY;
            for (const auto& v : b.vertices) min_b = std::min(min_b, normal.dot(v));
            if (min_b > max_a + tol * len) return true;
        }
        return false;
    };
    return !separated_along_edges(p, q) && !separated_along_edges(q, p);
}

double distance_point_box(const Vec2& c, double x0, double y0, double x1, double y1)
{
    const double dx = std::max({x0 - c.x(), 0.0, c.x() - x1});
    const double dy = std::max({y0 - c.y(), 0.0, c.y() - y1});
    return std::hypot(dx, dy);
}

double polygon_bbox_overlap(const Polygon& poly, double x0, double y0, double x1, double y1)
{
    double px0 = INFINITY, py0 = INFINITY, px1 = -INFINITY, py1 = -INFINITY;
    for (const auto& v : poly.vertices) {
        px0 = std::min(px0, v.x());
        py0 = std::min(py0, v.y());
        px1 = std::max(px1, v.x());
        py1 = std::max(py1, v.y());
    }
    return !(px1 < x0 || x1 < px0 || py1 < y0 || y1 < py0);
}

// Interior membership by probing a small neighbourhood of p.
bool in_interior(const ScreenRegion& region, const Vec2& p, double delta)
{
    if (!region.contains(p, 0.0)) return false;
    for (int a = 0; a < 8; ++a) {
        const double t = a * kPi / 4.0;
        const Vec2 q = p + delta * Vec2(std::cos(t), std::sin(t));
        if (!region.contains(q, 0.0)) return false;
    }
    return true;
}

std::vector<Interval> merged_components(std::vector<Interval> cells)
{
    std::sort(cells.begin(), cells.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });
    std::vector<Interval> out;
    for (const auto& c : cells) {
        if (!out.empty() && c.a <= out.back().b) {
            out.back().b = std::max(out.back().b, c.b);
        } else {
            out.push_back(c);
        }
    }
    return out;
}

}  // namespace

double Polygon::area() const
{
    double s = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        s += cross2(vertices[i], vertices[(i + 1) % vertices.size()]);
    }
    return 0.5 * std::abs(s);
}

double Polygon::diameter() const
{
    double d = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        for (std::size_t j = i + 1; j < vertices.size(); ++j) d = std::max(d, (vertices[i] - vertices[j]).norm());
    return d;
}

double ScreenRegion::measure() const
{
    double m = 0.0;
    if (dimension == 2) {
        for (const auto& c : intervals) m += c.length();
    } else {
        for (const auto& p : polygons) m += p.area();
    }
    return m;
}

double ScreenRegion::feature_size() const
{
    double f = 0.0;
    if (dimension == 2) {
        for (const auto& c : intervals) f = std::max(f, c.length());
    } else {
        for (const auto& p : polygons) f = std::max(f, p.diameter());
    }
    return f;
}

std::pair<Point, Point> ScreenRegion::bounding_box() const
{
    Point lo = Point::Constant(INFINITY);
    Point hi = Point::Constant(-INFINITY);
    if (dimension == 2) {
        for (const auto& c : intervals) {
            lo.x() = std::min(lo.x(), c.a);
            hi.x() = std::max(hi.x(), c.b);
        }
        lo.y() = hi.y() = 0.0;
    } else {
        for (const auto& p : polygons)
            for (const auto& v : p.vertices) {
                lo.x() = std::min(lo.x(), v.x());
                lo.y() = std::min(lo.y(), v.y());
                hi.x() = std::max(hi.x(), v.x());
                hi.y() = std::max(hi.y(), v.y());
            }
    }
    lo.z() = hi.z() = 0.0;
    return {lo, hi};
}

bool ScreenRegion::contains(const Vec2& p, double tol) const
{
    if (dimension == 2) {
        for (const auto& c : intervals)
            if (p.x() >= c.a - tol && p.x() <= c.b + tol) return true;
        return false;
    }
    for (const auto& poly : polygons) {
        if (!polygon_bbox_overlap(poly, p.x() - tol, p.y() - tol, p.x() + tol, p.y() + tol)) continue;
        if (point_in_convex(poly, p, tol)) return true;
    }
    return false;
}

void validate(const ScreenRegion& region)
{
    require(region.dimension == 2 || region.dimension == 3, "region dimension must be 2 or 3");
    if (region.dimension == 2) {
        for (const auto& c : region.intervals) {
            require(std::isfinite(c.a) && std::isfinite(c.b) && c.b > c.a,
                    "interval cells must have positive length");
        }
        return;
    }
    for (const auto& p : region.polygons) {
        require(p.vertices.size() >= 3, "polygon cells need at least three vertices");
        require(p.area() > 0.0, "polygon cells must have positive area");
    }
}

// ---------------------------------------------------------------------------

std::vector<Interval> cantor_prefractal(double lambda, int level)
{
    require_lambda(lambda);
    require(level >= 0, "Cantor level must be non-negative");
    const double alpha = 0.5 * (1.0 - lambda);
    std::vector<Interval> current{{0.0, 1.0}};
    for (int j = 0; j < level; ++j) {
        std::vector<Interval> next;
        next.reserve(2 * current.size());
        for (const auto& c : current) {
            const double len = alpha * c.length();
            next.push_back({c.a, c.a + len});
            next.push_back({c.b - len, c.b});
        }
        current = std::move(next);
    }
    return current;
}

std::vector<Polygon> cantor_dust_prefractal(double lambda, int level)
{
    const auto e = cantor_prefractal(lambda, level);
    std::vector<Polygon> squares;
    squares.reserve(e.size() * e.size());
    for (const auto& y : e)
        for (const auto& x : e) squares.push_back(make_rectangle(x.a, y.a, x.b, y.b));
    return squares;
}

std::vector<Polygon> sierpinski_prefractal(int level)
{
    require(level >= 1, "Sierpinski level must be at least 1");
    std::vector<std::array<Vec2, 3>> current{{Vec2(0.0, 0.0), Vec2(1.0, 0.0), Vec2(0.5, std::sqrt(3.0) / 2.0)}};
    for (int j = 1; j < level; ++j) {
        std::vector<std::array<Vec2, 3>> next;
        next.reserve(3 * current.size());
        for (const auto& t : current) {
            const Vec2 ab = 0.5 * (t[0] + t[1]);
            const Vec2 bc = 0.5 * (t[1] + t[2]);
            const Vec2 ca = 0.5 * (t[2] + t[0]);
            next.push_back({t[0], ab, ca});
            next.push_back({ab, t[1], bc});
            next.push_back({ca, bc, t[2]});
        }
        current = std::move(next);
    }
    std::vector<Polygon> out;
    out.reserve(current.size());
    for (const auto& t : current) out.push_back(make_triangle(t[0], t[1], t[2]));
    return out;
}

std::vector<Vec2> koch_polygon(int level)
{
    require(level >= 1, "Koch level must be at least 1");
    std::vector<Vec2> pts{Vec2(0.0, 0.0), Vec2(1.0, 0.0), Vec2(0.5, std::sqrt(3.0) / 2.0)};
    const double c = 0.5;
    const double s = std::sqrt(3.0) / 2.0;
    for (int j = 1; j < level; ++j) {
        std::vector<Vec2> next;
        next.reserve(4 * pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const Vec2& p = pts[i];
            const Vec2& q = pts[(i + 1) % pts.size()];
            const Vec2 d = (q - p) / 3.0;
            const Vec2 a = p + d;
            const Vec2 b = p + 2.0 * d;
            // Rotate d by -60 degrees: the outward side of a CCW boundary.
            const Vec2 apex = a + Vec2(c * d.x() + s * d.y(), -s * d.x() + c * d.y());
            next.push_back(p);
            next.push_back(a);
            next.push_back(apex);
            next.push_back(b);
        }
        pts = std::move(next);
    }
    return pts;
}

namespace {

bool point_in_polygon(const std::vector<Vec2>& poly, const Vec2& p)
{
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        if ((a.y() > p.y()) != (b.y() > p.y())) {
            const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
            if (p.x() < x) inside = !inside;
        }
    }
    return inside;
}

}  // namespace

ScreenRegion koch_prefractal(int level)
{
    const auto boundary = koch_polygon(level);
    const double spacing = std::pow(3.0, 1 - level);
    const double h = spacing * std::sqrt(3.0) / 2.0;
    auto lattice = [spacing, h](long i, long m) { return Vec2(i * spacing + m * 0.5 * spacing, m * h); };

    double ylo = INFINITY, yhi = -INFINITY, xlo = INFINITY, xhi = -INFINITY;
    for (const auto& v : boundary) {
        xlo = std::min(xlo, v.x());
        xhi = std::max(xhi, v.x());
        ylo = std::min(ylo, v.y());
        yhi = std::max(yhi, v.y());
    }
    const long m0 = static_cast<long>(std::floor(ylo / h)) - 1;
    const long m1 = static_cast<long>(std::ceil(yhi / h)) + 1;

    ScreenRegion region;
    region.dimension = 3;
    region.kind = RegionKind::Open;
    for (long m = m0; m <= m1; ++m) {
        const double shift = 0.5 * m;
        const long i0 = static_cast<long>(std::floor(xlo / spacing - shift)) - 2;
        const long i1 = static_cast<long>(std::ceil(xhi / spacing - shift)) + 2;
        for (long i = i0; i <= i1; ++i) {
            const Vec2 p00 = lattice(i, m);
            const Vec2 p10 = lattice(i + 1, m);
            const Vec2 p01 = lattice(i, m + 1);
            const Vec2 p11 = lattice(i + 1, m + 1);
            const Vec2 up_centroid = (p00 + p10 + p01) / 3.0;
            if (point_in_polygon(boundary, up_centroid)) region.polygons.push_back(make_triangle(p00, p10, p01));
            const Vec2 down_centroid = (p10 + p11 + p01) / 3.0;
            if (point_in_polygon(boundary, down_centroid)) region.polygons.push_back(make_triangle(p10, p11, p01));
        }
    }
    return region;
}

// ---------------------------------------------------------------------------

Vec2 dyadic_center(int dimension, int m)
{
    require(m >= 1, "dyadic enumeration index starts at 1");
    require(dimension == 2 || dimension == 3, "dimension must be 2 or 3");
    long remaining = m;
    for (int l = 1; l < 62; ++l) {
        const long n = 1L << l;
        if (dimension == 2) {
            const long count = n / 2;
            if (remaining <= count) return Vec2(static_cast<double>(2 * remaining - 1) / n, 0.0);
            remaining -= count;
            continue;
        }
        for (long a = 1; a < n; ++a) {
            for (long b = 1; b < n; ++b) {
                if (a % 2 == 0 && b % 2 == 0) continue;
                if (--remaining == 0) return Vec2(static_cast<double>(a) / n, static_cast<double>(b) / n);
            }
        }
    }
    throw InvalidInput("dyadic enumeration index too large");
}

double swiss_cheese_radius(const SwissCheeseParams& params, int m)
{
    require(m >= 1, "Swiss cheese ball index starts at 1");
    if (static_cast<std::size_t>(m) <= params.radii.size()) return params.radii[m - 1];
    if (params.dimension == 3) return 6.0 * params.epsilon / ((kPi * m) * (kPi * m));
    return 2.0 * std::exp(-kPi * kPi * m * m / (6.0 * params.epsilon));
}

Vec2 swiss_cheese_center(const SwissCheeseParams& params, int m)
{
    require(m >= 1, "Swiss cheese ball index starts at 1");
    if (static_cast<std::size_t>(m) <= params.centers.size()) return params.centers[m - 1];
    return dyadic_center(params.dimension, m);
}

ScreenRegion unit_screen(int dimension)
{
    require(dimension == 2 || dimension == 3, "dimension must be 2 or 3");
    ScreenRegion r;
    r.dimension = dimension;
    if (dimension == 2) {
        r.intervals.push_back({0.0, 1.0});
    } else {
        r.polygons.push_back(make_rectangle(0.0, 0.0, 1.0, 1.0));
    }
    return r;
}

ScreenRegion swiss_cheese_prefractal(int level, const SwissCheeseParams& params)
{
    require(level >= 0, "Swiss cheese level must be non-negative");
    require(params.dimension == 2 || params.dimension == 3, "dimension must be 2 or 3");
    require(params.epsilon > 0.0, "Swiss cheese epsilon must be positive");
    ScreenRegion region;
    region.dimension = params.dimension;
    region.kind = RegionKind::Closed;
    if (level == 0) {
        region = unit_screen(params.dimension);
        return region;
    }

    std::vector<Vec2> centers;
    std::vector<double> radii;
    for (int m = 1; m <= level; ++m) {
        centers.push_back(swiss_cheese_center(params, m));
        radii.push_back(swiss_cheese_radius(params, m));
    }
    const int grid = level + params.grid_offset;
    require(grid >= 0 && grid < 16, "Swiss cheese grid level out of range");
    const long n = 1L << grid;
    const double cell = 1.0 / static_cast<double>(n);

    auto meets_ball = [&](double x0, double y0, double x1, double y1) {
        for (std::size_t m = 0; m < centers.size(); ++m) {
            if (distance_point_box(centers[m], x0, y0, x1, y1) < radii[m]) return true;
        }
        return false;
    };

    if (params.dimension == 2) {
        for (long i = 0; i < n; ++i) {
            const double x0 = i * cell, x1 = (i + 1) * cell;
            if (!meets_ball(x0, 0.0, x1, 0.0)) region.intervals.push_back({x0, x1});
        }
    } else {
        for (long b = 0; b < n; ++b)
            for (long a = 0; a < n; ++a) {
                const double x0 = a * cell, x1 = (a + 1) * cell, y0 = b * cell, y1 = (b + 1) * cell;
                if (!meets_ball(x0, y0, x1, y1)) region.polygons.push_back(make_rectangle(x0, y0, x1, y1));
            }
    }
    if (region.empty()) throw InvalidInput("Swiss cheese radii remove the whole region");
    return region;
}

ScreenRegion grid_outer_approx(const ScreenRegion& region, int level)
{
    require(level >= 0 && level < 24, "grid level out of range");
    const double n = std::ldexp(1.0, level);
    const double cell = 1.0 / n;
    constexpr double tol = 1e-13;
    ScreenRegion out;
    out.dimension = region.dimension;
    out.kind = RegionKind::Closed;

    if (region.dimension == 2) {
        std::set<long> cells;
        for (const auto& c : region.intervals) {
            const long i0 = static_cast<long>(std::floor(c.a * n)) - 1;
            const long i1 = static_cast<long>(std::ceil(c.b * n)) + 1;
            for (long i = i0; i <= i1; ++i) {
                if ((i + 1) * cell >= c.a - tol && i * cell <= c.b + tol) cells.insert(i);
            }
        }
        for (long i : cells) out.intervals.push_back({i * cell, (i + 1) * cell});
        return out;
    }

    std::set<std::pair<long, long>> cells;
    for (const auto& poly : region.polygons) {
        double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
        for (const auto& v : poly.vertices) {
            x0 = std::min(x0, v.x());
            y0 = std::min(y0, v.y());
            x1 = std::max(x1, v.x());
            y1 = std::max(y1, v.y());
        }
        for (long b = static_cast<long>(std::floor(y0 * n)) - 1; b <= static_cast<long>(std::ceil(y1 * n)); ++b)
            for (long a = static_cast<long>(std::floor(x0 * n)) - 1; a <= static_cast<long>(std::ceil(x1 * n)); ++a) {
                const Polygon sq = make_rectangle(a * cell, b * cell, (a + 1) * cell, (b + 1) * cell);
                if (convex_polygons_meet(poly, sq, tol)) cells.insert({b, a});
            }
    }
    for (const auto& [b, a] : cells) out.polygons.push_back(make_rectangle(a * cell, b * cell, (a + 1) * cell, (b + 1) * cell));
    return out;
}

ScreenRegion grid_outer_approx_point(int dimension, const Vec2& point, int level)
{
    require(dimension == 2 || dimension == 3, "dimension must be 2 or 3");
    const double n = std::ldexp(1.0, level);
    const double cell = 1.0 / n;
    ScreenRegion out;
    out.dimension = dimension;
    out.kind = RegionKind::Closed;
    const long ia = static_cast<long>(std::floor(point.x() * n));
    const long ib = static_cast<long>(std::floor(point.y() * n));
    for (long i = ia - 1; i <= ia + 1; ++i) {
        if (!(i * cell <= point.x() && point.x() <= (i + 1) * cell)) continue;
        if (dimension == 2) {
            out.intervals.push_back({i * cell, (i + 1) * cell});
            continue;
        }
        for (long b = ib - 1; b <= ib + 1; ++b) {
            if (b * cell <= point.y() && point.y() <= (b + 1) * cell)
                out.polygons.push_back(make_rectangle(i * cell, b * cell, (i + 1) * cell, (b + 1) * cell));
        }
    }
    return out;
}

ScreenRegion grid_inner_approx(const ScreenRegion& region, int level)
{
    require(level >= 0 && level < 24, "grid level out of range");
    const double n = std::ldexp(1.0, level);
    const double cell = 1.0 / n;
    ScreenRegion out;
    out.dimension = region.dimension;
    out.kind = RegionKind::Open;
    if (region.empty()) return out;

    if (region.dimension == 2) {
        for (const auto& comp : merged_components(region.intervals)) {
            const long i0 = static_cast<long>(std::floor(comp.a * n));
            const long i1 = static_cast<long>(std::ceil(comp.b * n));
            for (long i = i0; i <= i1; ++i) {
                if (comp.a < i * cell && (i + 1) * cell < comp.b) out.intervals.push_back({i * cell, (i + 1) * cell});
            }
        }
        return out;
    }

    // Closed cell inside the open region, probed on a sample lattice. Exact
    // for unions of grid-aligned or convex cells whose features exceed the
    // sampling step cell / 8.
    const auto [lo, hi] = region.bounding_box();
    const double delta = 1e-9 * std::max(1.0, (hi - lo).norm());
    constexpr int samples = 8;
    for (long b = static_cast<long>(std::floor(lo.y() * n)); b < static_cast<long>(std::ceil(hi.y() * n)); ++b)
        for (long a = static_cast<long>(std::floor(lo.x() * n)); a < static_cast<long>(std::ceil(hi.x() * n)); ++a) {
            bool inside = true;
            for (int s = 0; s <= samples && inside; ++s)
                for (int t = 0; t <= samples && inside; ++t) {
                    const Vec2 p((a + static_cast<double>(s) / samples) * cell, (b + static_cast<double>(t) / samples) * cell);
                    inside = in_interior(region, p, delta);
                }
            if (inside) out.polygons.push_back(make_rectangle(a * cell, b * cell, (a + 1) * cell, (b + 1) * cell));
        }
    return out;
}

ScreenRegion solid_minus_cantor(int dimension, double lambda, int level)
{
    require(dimension == 2 || dimension == 3, "dimension must be 2 or 3");
    const auto e = cantor_prefractal(lambda, level);
    ScreenRegion region;
    region.dimension = dimension;
    region.kind = RegionKind::Open;
    if (dimension == 2) {
        for (std::size_t i = 0; i + 1 < e.size(); ++i) region.intervals.push_back({e[i].b, e[i + 1].a});
        return region;
    }
    std::vector<double> breaks;
    for (const auto& c : e) {
        breaks.push_back(c.a);
        breaks.push_back(c.b);
    }
    auto in_e = [&e](double x) {
        for (const auto& c : e)
            if (x > c.a && x < c.b) return true;
        return false;
    };
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b)
        for (std::size_t a = 0; a + 1 < breaks.size(); ++a) {
            const double cx = 0.5 * (breaks[a] + breaks[a + 1]);
            const double cy = 0.5 * (breaks[b] + breaks[b + 1]);
            if (in_e(cx) && in_e(cy)) continue;
            region.polygons.push_back(make_rectangle(breaks[a], breaks[b], breaks[a + 1], breaks[b + 1]));
        }
    return region;
}

ScreenRegion solid_minus_swiss_cheese(int level, const SwissCheeseParams& params)
{
    require(level >= 1, "level must be at least 1");
    const int dim = params.dimension;
    require(dim == 2 || dim == 3, "dimension must be 2 or 3");
    const int grid = level + params.grid_offset;
    require(grid >= 0 && grid < 16, "grid level out of range");
    const long n = 1L << grid;
    const double cell = 1.0 / static_cast<double>(n);

    std::vector<Vec2> centers;
    std::vector<double> radii;
    for (int m = 1; m <= level; ++m) {
        centers.push_back(swiss_cheese_center(params, m));
        radii.push_back(swiss_cheese_radius(params, m));
    }
    // A closed cell lies in an open ball iff all its corners do.
    auto inside_some_ball = [&](const std::vector<Vec2>& corners) {
        for (std::size_t m = 0; m < centers.size(); ++m) {
            bool all = true;
            for (const auto& c : corners) all = all && (c - centers[m]).norm() < radii[m];
            if (all) return true;
        }
        return false;
    };

    ScreenRegion region;
    region.dimension = dim;
    region.kind = RegionKind::Open;
    if (dim == 2) {
        for (long i = 1; i + 1 < n; ++i) {
            if (inside_some_ball({Vec2(i * cell, 0.0), Vec2((i + 1) * cell, 0.0)}))
                region.intervals.push_back({i * cell, (i + 1) * cell});
        }
    } else {
        for (long b = 1; b + 1 < n; ++b)
            for (long a = 1; a + 1 < n; ++a) {
                const double x0 = a * cell, x1 = (a + 1) * cell, y0 = b * cell, y1 = (b + 1) * cell;
                if (inside_some_ball({Vec2(x0, y0), Vec2(x1, y0), Vec2(x1, y1), Vec2(x0, y1)}))
                    region.polygons.push_back(make_rectangle(x0, y0, x1, y1));
            }
    }
    return region;
}

ScreenRegion irregular_circles(int level, int grid_offset)
{
    require(level >= 1, "level must be at least 1");
    const int grid = level + grid_offset;
    require(grid >= 0 && grid < 16, "grid level out of range");
    const long n = 1L << grid;
    const double cell = 1.0 / static_cast<double>(n);
    ScreenRegion region;
    region.dimension = 3;
    region.kind = RegionKind::Open;
    for (long b = -n / 2; b < n / 2; ++b)
        for (long a = 0; a < n; ++a) {
            const double x0 = a * cell, x1 = (a + 1) * cell, y0 = b * cell, y1 = (b + 1) * cell;
            for (int m = 1; m <= level; ++m) {
                const double s = (2.0 * m + 1.0) / (2.0 * m * (m + 1.0));
                const double r = 1.0 / (2.0 * m * (m + 1.0));
                const Vec2 c(s, 0.0);
                bool all = true;
                for (const auto& p : {Vec2(x0, y0), Vec2(x1, y0), Vec2(x1, y1), Vec2(x0, y1)})
                    all = all && (p - c).norm() < r;
                if (all) {
                    region.polygons.push_back(make_rectangle(x0, y0, x1, y1));
                    break;
                }
            }
        }
    return region;
}

// ---------------------------------------------------------------------------

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string PrefractalFamily::name() const
{
    return std::visit(overloaded{
                          [](const CantorFamily&) { return std::string("cantor"); },
                          [](const CantorDustFamily&) { return std::string("cantor_dust"); },
                          [](const SierpinskiFamily&) { return std::string("sierpinski"); },
                          [](const KochFamily&) { return std::string("koch"); },
                          [](const SwissCheeseFamily&) { return std::string("swiss_cheese"); },
                          [](const SolidMinusCantorFamily&) { return std::string("solid_minus_cantor"); },
                          [](const SolidMinusSwissCheeseFamily&) { return std::string("solid_minus_swiss_cheese"); },
                          [](const IrregularCirclesFamily&) { return std::string("irregular_circles"); },
                          [](const GridInnerFamily&) { return std::string("grid_inner"); },
                          [](const GridOuterFamily&) { return std::string("grid_outer"); },
                      },
                      variant);
}

int PrefractalFamily::dimension() const
{
    return std::visit(overloaded{
                          [](const CantorFamily&) { return 2; },
                          [](const CantorDustFamily&) { return 3; },
                          [](const SierpinskiFamily&) { return 3; },
                          [](const KochFamily&) { return 3; },
                          [](const SwissCheeseFamily& f) { return f.params.dimension; },
                          [](const SolidMinusCantorFamily& f) { return f.dimension; },
                          [](const SolidMinusSwissCheeseFamily& f) { return f.params.dimension; },
                          [](const IrregularCirclesFamily&) { return 3; },
                          [](const GridInnerFamily& f) { return f.base.dimension; },
                          [](const GridOuterFamily& f) { return f.base.dimension; },
                      },
                      variant);
}

RegionKind PrefractalFamily::kind() const
{
    return std::visit(overloaded{
                          [](const KochFamily&) { return RegionKind::Open; },
                          [](const SolidMinusCantorFamily&) { return RegionKind::Open; },
                          [](const SolidMinusSwissCheeseFamily&) { return RegionKind::Open; },
                          [](const IrregularCirclesFamily&) { return RegionKind::Open; },
                          [](const GridInnerFamily&) { return RegionKind::Open; },
                          [](const auto&) { return RegionKind::Closed; },
                      },
                      variant);
}

int PrefractalFamily::first_level() const
{
    return std::visit(overloaded{
                          [](const SierpinskiFamily&) { return 1; },
                          [](const KochFamily&) { return 1; },
                          [](const SolidMinusCantorFamily&) { return 1; },
                          [](const SolidMinusSwissCheeseFamily&) { return 1; },
                          [](const IrregularCirclesFamily&) { return 1; },
                          [](const auto&) { return 0; },
                      },
                      variant);
}

ScreenRegion PrefractalFamily::generate(int level) const
{
    require(level >= first_level(), name() + ": level below the first level of the family");
    ScreenRegion region = std::visit(
        overloaded{
            [level](const CantorFamily& f) {
                ScreenRegion r;
                r.dimension = 2;
                r.intervals = cantor_prefractal(f.lambda, level);
                return r;
            },
            [level](const CantorDustFamily& f) {
                ScreenRegion r;
                r.dimension = 3;
                r.polygons = cantor_dust_prefractal(f.lambda, level);
                return r;
            },
            [level](const SierpinskiFamily&) {
                ScreenRegion r;
                r.dimension = 3;
                r.polygons = sierpinski_prefractal(level);
                return r;
            },
            [level](const KochFamily&) { return koch_prefractal(level); },
            [level](const SwissCheeseFamily& f) { return swiss_cheese_prefractal(level, f.params); },
            [level](const SolidMinusCantorFamily& f) { return solid_minus_cantor(f.dimension, f.lambda, level); },
            [level](const SolidMinusSwissCheeseFamily& f) { return solid_minus_swiss_cheese(level, f.params); },
            [level](const IrregularCirclesFamily& f) { return irregular_circles(level, f.grid_offset); },
            [level](const GridInnerFamily& f) { return grid_inner_approx(f.base, level); },
            [level](const GridOuterFamily& f) { return grid_outer_approx(f.base, level); },
        },
        variant);
    region.kind = kind();
    return region;
}

// ---------------------------------------------------------------------------

double ScreenPanelMesh::panel_measure(std::size_t p) const
{
    const auto& v = panels[p];
    if (dimension == 2) return (vertices[v[1]] - vertices[v[0]]).norm();
    return 0.5 * (vertices[v[1]] - vertices[v[0]]).cross(vertices[v[2]] - vertices[v[0]]).norm();
}

double ScreenPanelMesh::panel_diameter(std::size_t p) const
{
    const auto& v = panels[p];
    if (dimension == 2) return (vertices[v[1]] - vertices[v[0]]).norm();
    return std::max({(vertices[v[1]] - vertices[v[0]]).norm(), (vertices[v[2]] - vertices[v[1]]).norm(),
                     (vertices[v[0]] - vertices[v[2]]).norm()});
}

Point ScreenPanelMesh::panel_centroid(std::size_t p) const
{
    const auto& v = panels[p];
    if (dimension == 2) return 0.5 * (vertices[v[0]] + vertices[v[1]]);
    return (vertices[v[0]] + vertices[v[1]] + vertices[v[2]]) / 3.0;
}

double ScreenPanelMesh::mesh_size() const
{
    double h = 0.0;
    for (std::size_t p = 0; p < panels.size(); ++p) h = std::max(h, panel_diameter(p));
    return h;
}

double ScreenPanelMesh::total_measure() const
{
    double m = 0.0;
    for (std::size_t p = 0; p < panels.size(); ++p) m += panel_measure(p);
    return m;
}

std::size_t ScreenPanelMesh::interior_vertex_count() const
{
    return static_cast<std::size_t>(std::count(boundary.begin(), boundary.end(), false));
}

namespace {

class VertexPool {
public:
    std::size_t insert(const Point& p)
    {
        const std::array<double, 3> key{p.x() + 0.0, p.y() + 0.0, p.z() + 0.0};  // folds -0.0
        const auto [it, fresh] = index_.try_emplace(key, points_.size());
        if (fresh) points_.push_back(p);
        return it->second;
    }
    std::vector<Point> take() { return std::move(points_); }

private:
    std::map<std::array<double, 3>, std::size_t> index_;
    std::vector<Point> points_;
};

}  // namespace

void flag_boundary(ScreenPanelMesh& m)
{
    m.boundary.assign(m.vertices.size(), false);
    if (m.dimension == 2) {
        std::vector<int> valence(m.vertices.size(), 0);
        for (const auto& p : m.panels) {
            ++valence[p[0]];
            ++valence[p[1]];
        }
        for (std::size_t v = 0; v < valence.size(); ++v) m.boundary[v] = valence[v] != 2;
        return;
    }
    std::map<std::pair<std::size_t, std::size_t>, int> edges;
    for (const auto& p : m.panels) {
        for (int e = 0; e < 3; ++e) {
            const std::size_t a = p[e], b = p[(e + 1) % 3];
            ++edges[{std::min(a, b), std::max(a, b)}];
        }
    }
    std::vector<int> touched(m.vertices.size(), 0);
    for (const auto& p : m.panels)
        for (int e = 0; e < 3; ++e) touched[p[e]] = 1;
    for (const auto& [edge, count] : edges) {
        if (count != 2) {
            m.boundary[edge.first] = true;
            m.boundary[edge.second] = true;
        }
    }
    for (std::size_t v = 0; v < touched.size(); ++v)
        if (!touched[v]) m.boundary[v] = true;
}

ScreenPanelMesh mesh(const ScreenRegion& region, double h)
{
    require(std::isfinite(h) && h > 0.0, "mesh size h must be positive");
    validate(region);
    ScreenPanelMesh out;
    out.dimension = region.dimension;
    VertexPool pool;
    const double slack = 1.0 + 1e-12;

    if (region.dimension == 2) {
        for (const auto& c : region.intervals) {
            const long pieces = std::max(1L, static_cast<long>(std::ceil(c.length() / (h * slack))));
            std::size_t prev = pool.insert(make_point(c.a, 0.0));
            for (long i = 1; i <= pieces; ++i) {
                const double x = i == pieces ? c.b : c.a + c.length() * static_cast<double>(i) / pieces;
                const std::size_t next = pool.insert(make_point(x, 0.0));
                out.panels.push_back({prev, next, 0});
                prev = next;
            }
        }
        out.vertices = pool.take();
        flag_boundary(out);
        return out;
    }

    using Tri = std::array<Vec2, 3>;
    std::vector<Tri> base;
    for (const auto& poly : region.polygons) {
        for (std::size_t i = 1; i + 1 < poly.vertices.size(); ++i)
            base.push_back({poly.vertices[0], poly.vertices[i], poly.vertices[i + 1]});
    }
    int levels = 0;
    for (const auto& t : base) {
        const double d = std::max({(t[1] - t[0]).norm(), (t[2] - t[1]).norm(), (t[0] - t[2]).norm()});
        int l = 0;
        while (d / std::ldexp(1.0, l) > h * slack) ++l;
        levels = std::max(levels, l);
    }
    require(levels <= 12, "mesh size too small for the region");

    for (const auto& t : base) {
        std::vector<Tri> current{t};
        for (int l = 0; l < levels; ++l) {
            std::vector<Tri> next;
            next.reserve(4 * current.size());
            for (const auto& s : current) {
                const Vec2 ab = 0.5 * (s[0] + s[1]);
                const Vec2 bc = 0.5 * (s[1] + s[2]);
                const Vec2 ca = 0.5 * (s[2] + s[0]);
                next.push_back({s[0], ab, ca});
                next.push_back({ab, s[1], bc});
                next.push_back({ca, bc, s[2]});
                next.push_back({ab, bc, ca});
            }
            current = std::move(next);
        }
        for (const auto& s : current) {
            std::array<std::size_t, 3> idx{};
            for (int a = 0; a < 3; ++a) idx[a] = pool.insert(make_point(s[a].x(), s[a].y(), 0.0));
            out.panels.push_back(idx);
        }
    }
    out.vertices = pool.take();
    flag_boundary(out);
    return out;
}

std::string mesh_hash(const ScreenPanelMesh& m)
{
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const void* data, std::size_t n) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ULL;
        }
    };
    const std::int64_t dim = m.dimension;
    mix(&dim, sizeof dim);
    for (const auto& v : m.vertices) {
        const double c[3] = {v.x() + 0.0, v.y() + 0.0, v.z() + 0.0};
        mix(c, sizeof c);
    }
    for (const auto& p : m.panels) {
        for (std::size_t a = 0; a < m.vertices_per_panel(); ++a) {
            const std::uint64_t i = p[a];
            mix(&i, sizeof i);
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace screenbem
