#include "screenbem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace screenbem {

namespace {

constexpr int kMaxGauss = 128;
constexpr double kSigma = 0.15;
constexpr int kSingularLevels = 16;

Rule1D compute_gauss(int n)
{
    Rule1D r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = z;
                p0 = 1.0;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n == 1 ? 1.0 : n * (z * p1 - p0) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        // map [-1, 1] -> [0, 1]
        r.x[i] = 0.5 * (1.0 - z);
        r.x[n - 1 - i] = 0.5 * (1.0 + z);
        r.w[i] = r.w[n - 1 - i] = 0.5 * w;
    }
    if (n == 1) {
        r.x[0] = 0.5;
        r.w[0] = 1.0;
    }
    return r;
}

struct GaussTable {
    std::vector<Rule1D> rules;
    GaussTable()
    {
        rules.resize(kMaxGauss + 1);
        for (int n = 1; n <= kMaxGauss; ++n) rules[n] = compute_gauss(n);
    }
};

double cross_z(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

std::array<double, 3> bary(int slot0, int slot1, int slot2, double a0, double a1, double a2)
{
    std::array<double, 3> s{0.0, 0.0, 0.0};
    s[slot0] = a0;
    s[slot1] = a1;
    s[slot2] = a2;
    return s;
}

// Closest point of panel p to x, returned with its barycentric coordinates.
struct Foot {
    Point c;
    std::array<double, 3> b;
};

Foot closest_on_segment(const Point& a, const Point& b, const Point& x, int ia, int ib)
{
    const Point e = b - a;
    const double t = std::clamp((x - a).dot(e) / e.squaredNorm(), 0.0, 1.0);
    Foot f;
    f.c = a + t * e;
    f.b = {0.0, 0.0, 0.0};
    f.b[ia] = 1.0 - t;
    f.b[ib] = t;
    return f;
}

Foot closest_on_panel(const ScreenPanelMesh& mesh, std::size_t p, const Point& x)
{
    const auto& v = mesh.panels[p];
    const Point& a = mesh.vertices[v[0]];
    const Point& b = mesh.vertices[v[1]];
    if (mesh.dimension == 2) return closest_on_segment(a, b, x, 0, 1);

    const Point& c = mesh.vertices[v[2]];
    Point xp = x;
    xp.z() = 0.0;
    const double area2 = cross_z(b - a, c - a);
    const double l0 = cross_z(b - xp, c - xp) / area2;
    const double l1 = cross_z(c - xp, a - xp) / area2;
    const double l2 = 1.0 - l0 - l1;
    if (l0 >= 0.0 && l1 >= 0.0 && l2 >= 0.0) return {xp, {l0, l1, l2}};
    Foot best = closest_on_segment(a, b, xp, 0, 1);
    for (const Foot& f : {closest_on_segment(b, c, xp, 1, 2), closest_on_segment(c, a, xp, 2, 0)}) {
        if ((f.c - xp).squaredNorm() < (best.c - xp).squaredNorm()) best = f;
    }
    return best;
}

int graded_levels(double distance, double size)
{
    if (distance <= 0.0) return kSingularLevels;
    const double ratio = distance / size;
    if (ratio >= 1.0) return 1;
    const int l = static_cast<int>(std::ceil(std::log(ratio) / std::log(kSigma))) + 1;
    return std::clamp(l, 1, 24);
}

Point lerp_panel(const ScreenPanelMesh& mesh, std::size_t p, const std::array<double, 3>& b)
{
    const auto& v = mesh.panels[p];
    Point y = b[0] * mesh.vertices[v[0]] + b[1] * mesh.vertices[v[1]];
    if (mesh.dimension == 3) y += b[2] * mesh.vertices[v[2]];
    return y;
}

double segment_gap(const ScreenPanelMesh& mesh, std::size_t p, std::size_t q, int& ip, int& iq)
{
    double best = INFINITY;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const double d = (mesh.vertices[mesh.panels[p][a]] - mesh.vertices[mesh.panels[q][b]]).norm();
            if (d < best) {
                best = d;
                ip = a;
                iq = b;
            }
        }
    return best;
}

double triangle_distance(const ScreenPanelMesh& mesh, std::size_t p, std::size_t q)
{
    double d = INFINITY;
    for (int a = 0; a < 3; ++a) {
        d = std::min(d, point_panel_distance(mesh, q, mesh.vertices[mesh.panels[p][a]]));
        d = std::min(d, point_panel_distance(mesh, p, mesh.vertices[mesh.panels[q][a]]));
    }
    return d;
}

int shared_vertices(const ScreenPanelMesh& mesh, std::size_t p, std::size_t q, int perm_p[3], int perm_q[3])
{
    const std::size_t n = mesh.vertices_per_panel();
    int common = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (mesh.panels[p][i] == mesh.panels[q][j]) {
                perm_p[common] = static_cast<int>(i);
                perm_q[common] = static_cast<int>(j);
                ++common;
                break;
            }
    auto complete = [n, common](int perm[3]) {
        int filled = common;
        for (int i = 0; i < static_cast<int>(n) && filled < static_cast<int>(n); ++i) {
            bool used = false;
            for (int k = 0; k < filled; ++k) used = used || perm[k] == i;
            if (!used) perm[filled++] = i;
        }
    };
    complete(perm_p);
    complete(perm_q);
    return common;
}

}  // namespace

void validate(const QuadratureSpec& spec)
{
    require(spec.regular >= 1 && spec.regular <= kMaxGauss, "regular quadrature order out of range");
    require(spec.near >= 1 && spec.near <= kMaxGauss, "near quadrature order out of range");
    require(spec.singular >= 1 && spec.singular <= kMaxGauss, "singular quadrature order out of range");
    require(spec.near_plane >= 1 && spec.near_plane <= kMaxGauss, "near-plane quadrature order out of range");
    require(spec.near_factor >= 0.0, "near factor must be non-negative");
}

const Rule1D& gauss_legendre(int n)
{
    static const GaussTable table;
    require(n >= 1 && n <= kMaxGauss, "Gauss-Legendre order must lie in [1, 128]");
    return table.rules[n];
}

Rule1D graded_rule(int order, int levels, double sigma)
{
    require(levels >= 1, "graded rule needs at least one level");
    const Rule1D& g = gauss_legendre(order);
    std::vector<double> breaks{0.0};
    for (int l = levels - 1; l >= 1; --l) breaks.push_back(std::pow(sigma, l));
    breaks.push_back(1.0);
    Rule1D r;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i], len = breaks[i + 1] - breaks[i];
        for (std::size_t k = 0; k < g.x.size(); ++k) {
            r.x.push_back(a + len * g.x[k]);
            r.w.push_back(len * g.w[k]);
        }
    }
    return r;
}

std::vector<TriangleNode> triangle_rule(int n)
{
    const Rule1D& g = gauss_legendre(n);
    std::vector<TriangleNode> nodes;
    nodes.reserve(g.x.size() * g.x.size());
    for (std::size_t i = 0; i < g.x.size(); ++i)
        for (std::size_t j = 0; j < g.x.size(); ++j) {
            const double xi = g.x[i];
            nodes.push_back({xi, (1.0 - xi) * g.x[j], (1.0 - xi) * g.w[i] * g.w[j]});
        }
    return nodes;
}

std::vector<ReferencePairNode> sauter_schwab_rule(PairKind kind, int n)
{
    require(kind == PairKind::Coincident || kind == PairKind::Edge || kind == PairKind::Vertex,
            "Sauter-Schwab rules exist for coincident, edge and vertex pairs only");
    const Rule1D& g = gauss_legendre(n);
    std::vector<ReferencePairNode> out;
    // Points are generated on {0 <= x2 <= x1 <= 1} and converted to
    // barycentric weights (x1 - x2, x2) of vertices 1 and 2.
    auto push = [&out](double x1, double x2, double y1, double y2, double w) {
        out.push_back({{x1 - x2, x2, 0.0}, {y1 - y2, y2, w}});
    };
    for (std::size_t a = 0; a < g.x.size(); ++a)
        for (std::size_t b = 0; b < g.x.size(); ++b)
            for (std::size_t c = 0; c < g.x.size(); ++c)
                for (std::size_t d = 0; d < g.x.size(); ++d) {
                    const double xi = g.x[a], e1 = g.x[b], e2 = g.x[c], e3 = g.x[d];
                    const double w0 = g.w[a] * g.w[b] * g.w[c] * g.w[d];
                    if (kind == PairKind::Coincident) {
                        const double w = w0 * xi * xi * xi * e1 * e1 * e2;
                        push(xi, xi * (1.0 - e1 + e1 * e2), xi * (1.0 - e1 * e2 * e3), xi * (1.0 - e1), w);
                        push(xi * (1.0 - e1 * e2 * e3), xi * (1.0 - e1), xi, xi * (1.0 - e1 + e1 * e2), w);
                        push(xi, xi * e1 * (1.0 - e2 + e2 * e3), xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2), w);
                        push(xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2), xi, xi * e1 * (1.0 - e2 + e2 * e3), w);
                        push(xi * (1.0 - e1 * e2 * e3), xi * e1 * (1.0 - e2 * e3), xi, xi * e1 * (1.0 - e2), w);
                        push(xi, xi * e1 * (1.0 - e2), xi * (1.0 - e1 * e2 * e3), xi * e1 * (1.0 - e2 * e3), w);
                    } else if (kind == PairKind::Edge) {
                        const double w = w0 * xi * xi * xi * e1 * e1 * e2;
                        push(xi, xi * e1 * e3, xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2), w0 * xi * xi * xi * e1 * e1);
                        push(xi, xi * e1, xi * (1.0 - e1 * e2 * e3), xi * e1 * e2 * (1.0 - e3), w);
                        push(xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2), xi, xi * e1 * e2 * e3, w);
                        push(xi * (1.0 - e1 * e2 * e3), xi * e1 * e2 * (1.0 - e3), xi, xi * e1, w);
                        push(xi * (1.0 - e1 * e2 * e3), xi * e1 * (1.0 - e2 * e3), xi, xi * e1 * e2, w);
                    } else {
                        const double w = w0 * xi * xi * xi * e2;
                        push(xi, xi * e1, xi * e2, xi * e2 * e3, w);
                        push(xi * e2, xi * e2 * e3, xi, xi * e1, w);
                    }
                }
    return out;
}

double point_panel_distance(const ScreenPanelMesh& mesh, std::size_t p, const Point& x)
{
    return (closest_on_panel(mesh, p, x).c - x).norm();
}

PairKind classify_pair(const ScreenPanelMesh& mesh, std::size_t p, std::size_t q, const QuadratureSpec& spec)
{
    int pp[3], pq[3];
    const int common = shared_vertices(mesh, p, q, pp, pq);
    const double size = std::max(mesh.panel_diameter(p), mesh.panel_diameter(q));
    if (mesh.dimension == 2) {
        if (common == 2) return PairKind::Coincident;
        if (common == 1) return PairKind::Vertex;
        int ip, iq;
        return segment_gap(mesh, p, q, ip, iq) < spec.near_factor * size ? PairKind::Near : PairKind::Regular;
    }
    if (common == 3) return PairKind::Coincident;
    if (common == 2) return PairKind::Edge;
    if (common == 1) return PairKind::Vertex;
    return triangle_distance(mesh, p, q) < spec.near_factor * size ? PairKind::Near : PairKind::Regular;
}

void pair_nodes(const ScreenPanelMesh& mesh, std::size_t p, std::size_t q, const QuadratureSpec& spec,
                std::vector<PairNode>& out)
{
    const PairKind kind = classify_pair(mesh, p, q, spec);
    const int order = kind == PairKind::Regular ? spec.regular : kind == PairKind::Near ? spec.near : spec.singular;
    pair_nodes(mesh, p, q, kind, order, out);
}

void pair_nodes(const ScreenPanelMesh& mesh, std::size_t p, std::size_t q, PairKind kind, int order,
                std::vector<PairNode>& out)
{
    out.clear();
    const auto& vp = mesh.panels[p];
    const auto& vq = mesh.panels[q];
    const double mp = mesh.panel_measure(p);
    const double mq = mesh.panel_measure(q);

    if (mesh.dimension == 2) {
        const Point& p0 = mesh.vertices[vp[0]];
        const Point& p1 = mesh.vertices[vp[1]];
        const Point& q0 = mesh.vertices[vq[0]];
        const Point& q1 = mesh.vertices[vq[1]];
        if (kind == PairKind::Regular) {
            const Rule1D& g = gauss_legendre(order);
            for (std::size_t i = 0; i < g.x.size(); ++i)
                for (std::size_t j = 0; j < g.x.size(); ++j) {
                    const double s = g.x[i], t = g.x[j];
                    out.push_back({p0 + s * (p1 - p0), q0 + t * (q1 - q0), mp * mq * g.w[i] * g.w[j],
                                   {1.0 - s, s, 0.0}, {1.0 - t, t, 0.0},
                                   (p0 - q0) + s * (p1 - p0) - t * (q1 - q0)});
                }
            return;
        }
        if (kind == PairKind::Coincident) {
            require(p == q || (vp[0] == vq[0] && vp[1] == vq[1]) || (vp[0] == vq[1] && vp[1] == vq[0]),
                    "coincident rule needs identical segments");
            const Rule1D u_rule = graded_rule(std::min(2 * order, kMaxGauss), kSingularLevels);
            const Rule1D& v_rule = gauss_legendre(order);
            // q parametrised in p's orientation
            const bool flipped = vp[0] != vq[0];
            for (std::size_t i = 0; i < u_rule.x.size(); ++i)
                for (std::size_t j = 0; j < v_rule.x.size(); ++j) {
                    const double u = u_rule.x[i], v = v_rule.x[j];
                    const double w = mp * mq * (1.0 - u) * u_rule.w[i] * v_rule.w[j];
                    const double base = (1.0 - u) * v;
                    for (int branch = 0; branch < 2; ++branch) {
                        const double s = branch == 0 ? base + u : base;
                        const double t = branch == 0 ? base : base + u;
                        const double tq = flipped ? 1.0 - t : t;
                        out.push_back({p0 + s * (p1 - p0), q0 + tq * (q1 - q0), w, {1.0 - s, s, 0.0},
                                       {1.0 - tq, tq, 0.0}, (branch == 0 ? u : -u) * (p1 - p0)});
                    }
                }
            return;
        }
        require(kind == PairKind::Vertex || kind == PairKind::Near, "unknown segment pair configuration");
        int ip = 0, iq = 0;
        const double gap = segment_gap(mesh, p, q, ip, iq);
        const Point& pn = mesh.vertices[vp[ip]];
        const Point& pf = mesh.vertices[vp[1 - ip]];
        const Point& qn = mesh.vertices[vq[iq]];
        const Point& qf = mesh.vertices[vq[1 - iq]];
        const int levels = kind == PairKind::Vertex ? kSingularLevels : graded_levels(gap, std::max(mp, mq));
        const Rule1D rho_rule = graded_rule(std::min(2 * order, kMaxGauss), levels);
        const Rule1D& w_rule = gauss_legendre(order);
        auto seg_bary = [](int near_slot, double s) {
            std::array<double, 3> b{0.0, 0.0, 0.0};
            b[near_slot] = 1.0 - s;
            b[1 - near_slot] = s;
            return b;
        };
        for (std::size_t i = 0; i < rho_rule.x.size(); ++i)
            for (std::size_t j = 0; j < w_rule.x.size(); ++j) {
                const double rho = rho_rule.x[i], z = w_rule.x[j];
                const double w = mp * mq * rho * rho_rule.w[i] * w_rule.w[j];
                for (int branch = 0; branch < 2; ++branch) {
                    const double s = branch == 0 ? rho : rho * z;
                    const double t = branch == 0 ? rho * z : rho;
                    out.push_back({pn + s * (pf - pn), qn + t * (qf - qn), w, seg_bary(ip, s), seg_bary(iq, t),
                                   (pn - qn) + s * (pf - pn) - t * (qf - qn)});
                }
            }
        return;
    }

    if (kind == PairKind::Regular || kind == PairKind::Near) {
        // Near pairs: both triangles split once (red refinement), each
        // sub-pair integrated with half the order.
        const int sub_order = kind == PairKind::Near ? std::max(1, (order + 1) / 2) : order;
        const auto rule = triangle_rule(sub_order);
        std::vector<std::array<std::array<double, 3>, 3>> subs;
        if (kind == PairKind::Near) {
            const std::array<double, 3> e0{1, 0, 0}, e1{0, 1, 0}, e2{0, 0, 1};
            const std::array<double, 3> m01{0.5, 0.5, 0}, m12{0, 0.5, 0.5}, m20{0.5, 0, 0.5};
            subs = {{e0, m01, m20}, {m01, e1, m12}, {m20, m12, e2}, {m01, m12, m20}};
        } else {
            subs = {{std::array<double, 3>{1, 0, 0}, std::array<double, 3>{0, 1, 0}, std::array<double, 3>{0, 0, 1}}};
        }
        const double scale = 1.0 / static_cast<double>(subs.size());
        std::vector<std::pair<std::array<double, 3>, double>> xs, ys;
        for (const auto& sub : subs)
            for (const auto& n : rule) {
                const double a0 = 1.0 - n.a1 - n.a2;
                std::array<double, 3> b{};
                for (int k = 0; k < 3; ++k) b[k] = a0 * sub[0][k] + n.a1 * sub[1][k] + n.a2 * sub[2][k];
                xs.push_back({b, 2.0 * n.w * scale});
            }
        ys = xs;
        for (const auto& [bx, wx] : xs) {
            const Point x = lerp_panel(mesh, p, bx);
            for (const auto& [by, wy] : ys) {
                const Point y = lerp_panel(mesh, q, by);
                out.push_back({x, y, mp * mq * wx * wy, bx, by, x - y});
            }
        }
        return;
    }

    int perm_p[3], perm_q[3];
    const int common = shared_vertices(mesh, p, q, perm_p, perm_q);
    const int expected = kind == PairKind::Coincident ? 3 : kind == PairKind::Edge ? 2 : 1;
    require(common == expected, "triangle pair does not match the requested singular configuration");
    if (kind == PairKind::Coincident) {
        for (int k = 0; k < 3; ++k) perm_p[k] = k;
        for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l)
                if (vq[l] == vp[k]) perm_q[k] = l;
    }
    const auto rule = sauter_schwab_rule(kind, order);
    const double jac = 4.0 * mp * mq;
    for (const auto& n : rule) {
        const auto bx = bary(perm_p[0], perm_p[1], perm_p[2], 1.0 - n.x.a1 - n.x.a2, n.x.a1, n.x.a2);
        const auto by = bary(perm_q[0], perm_q[1], perm_q[2], 1.0 - n.y.a1 - n.y.a2, n.y.a1, n.y.a2);
        // displacement measured from a shared vertex to limit cancellation
        const Point& c = mesh.vertices[vp[perm_p[0]]];
        Point d = Point::Zero();
        for (int a = 0; a < 3; ++a) d += bx[a] * (mesh.vertices[vp[a]] - c) - by[a] * (mesh.vertices[vq[a]] - c);
        out.push_back({lerp_panel(mesh, p, bx), lerp_panel(mesh, q, by), jac * n.y.w, bx, by, d});
    }
}

void panel_nodes(const ScreenPanelMesh& mesh, std::size_t p, int n, std::vector<PointNode>& out)
{
    out.clear();
    const double m = mesh.panel_measure(p);
    if (mesh.dimension == 2) {
        const Rule1D& g = gauss_legendre(n);
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            const std::array<double, 3> b{1.0 - g.x[i], g.x[i], 0.0};
            out.push_back({lerp_panel(mesh, p, b), m * g.w[i], b});
        }
        return;
    }
    for (const auto& t : triangle_rule(n)) {
        const std::array<double, 3> b{1.0 - t.a1 - t.a2, t.a1, t.a2};
        out.push_back({lerp_panel(mesh, p, b), 2.0 * m * t.w, b});
    }
}

void point_nodes(const ScreenPanelMesh& mesh, std::size_t p, const Point& x, const QuadratureSpec& spec,
                 std::vector<PointNode>& out)
{
    const Foot foot = closest_on_panel(mesh, p, x);
    const double dist = (foot.c - x).norm();
    const double size = mesh.panel_diameter(p);
    if (dist >= 3.0 * spec.near_factor * size) {
        panel_nodes(mesh, p, spec.regular, out);
        return;
    }
    out.clear();
    const int order = dist < 0.1 * size ? spec.near_plane : spec.near;
    const auto& v = mesh.panels[p];

    if (mesh.dimension == 2) {
        for (int end = 0; end < 2; ++end) {
            const Point& e = mesh.vertices[v[end]];
            const double len = (e - foot.c).norm();
            if (len <= 1e-14 * size) continue;
            const Rule1D r = graded_rule(order, graded_levels(dist, len));
            std::array<double, 3> target{0.0, 0.0, 0.0};
            target[end] = 1.0;
            for (std::size_t i = 0; i < r.x.size(); ++i) {
                const double t = r.x[i];
                std::array<double, 3> b{};
                for (int k = 0; k < 3; ++k) b[k] = (1.0 - t) * foot.b[k] + t * target[k];
                out.push_back({foot.c + t * (e - foot.c), len * r.w[i], b});
            }
        }
        return;
    }

    const Rule1D& w_rule = gauss_legendre(std::min(2 * order, kMaxGauss));
    const double panel_area = mesh.panel_measure(p);
    for (int edge = 0; edge < 3; ++edge) {
        const int i0 = edge, i1 = (edge + 1) % 3;
        const Point& a = mesh.vertices[v[i0]];
        const Point& b = mesh.vertices[v[i1]];
        const double sub_area = 0.5 * std::abs(cross_z(a - foot.c, b - foot.c));
        if (sub_area <= 1e-14 * panel_area) continue;
        const double reach = std::max((a - foot.c).norm(), (b - foot.c).norm());
        const Rule1D rho_rule = graded_rule(order, graded_levels(dist, reach));
        for (std::size_t i = 0; i < rho_rule.x.size(); ++i)
            for (std::size_t j = 0; j < w_rule.x.size(); ++j) {
                const double rho = rho_rule.x[i], z = w_rule.x[j];
                std::array<double, 3> bc{};
                for (int k = 0; k < 3; ++k) bc[k] = (1.0 - rho) * foot.b[k];
                bc[i0] += rho * (1.0 - z);
                bc[i1] += rho * z;
                const Point y = foot.c + rho * ((1.0 - z) * (a - foot.c) + z * (b - foot.c));
                out.push_back({y, 2.0 * sub_area * rho * rho_rule.w[i] * w_rule.w[j], bc});
            }
    }
}

}  // namespace screenbem
