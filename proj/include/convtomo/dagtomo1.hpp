#pragma once

#include <optional>
#include <unordered_set>
#include <vector>

#include "convtomo/lattice.hpp"

namespace convtomo {

/// Cells within vertical distance v_i - 1 of the triangle with vertices
/// (0,0), (m-1,0), (m-1,m-1). Every normalized solution lies inside.
struct Region {
    coord_t m = 0;
    XRay v;
    std::vector<coord_t> lo, hi;
    coord_t k = 0;

    bool contains(Point p) const {
        if (p.x < 0 || p.x >= m) return false;
        auto i = static_cast<std::size_t>(p.x);
        return p.y >= lo[i] && p.y <= hi[i];
    }
};

inline void require_positive(const XRay& v) {
    if (v.size() == 0) throw Error(ErrorKind::Unsupported, "empty X-ray");
    for (auto c : v.counts)
        if (c <= 0) throw Error(ErrorKind::Unsupported, "X-ray coordinates must be positive");
}

inline Region build_region(const XRay& v) {
    require_positive(v);
    Region r;
    r.m = static_cast<coord_t>(v.size());
    r.v = v;
    for (coord_t i = 0; i < r.m; ++i) {
        coord_t slack = v[static_cast<std::size_t>(i)] - 1;
        r.lo.push_back(-slack);
        r.hi.push_back(i + slack);
        r.k += i + 1 + 2 * slack;
    }
    return r;
}

/// A lower hull edge and an upper hull edge whose column ranges overlap.
struct Quad {
    Point l1, l2, u1, u2;

    coord_t a() const { return std::max(l1.x, u1.x); }
    coord_t b() const { return std::min(l2.x, u2.x); }

    friend bool operator==(const Quad&, const Quad&) = default;
    friend auto operator<=>(const Quad&, const Quad&) = default;
};

struct QuadHash {
    std::size_t operator()(const Quad& q) const noexcept {
        std::size_t h = 0;
        for (coord_t c : {q.l1.x, q.l1.y, q.l2.x, q.l2.y, q.u1.x, q.u1.y, q.u2.x, q.u2.y})
            h = h * 1000003u ^ std::hash<coord_t>{}(c);
        return h;
    }
};

/// Vertices in the region, edges going rightwards, and exactly v_i lattice
/// points between the edges on every shared column.
inline bool quad_valid(const Quad& q, const XRay& v, const Region& r) {
    for (Point p : {q.l1, q.l2, q.u1, q.u2})
        if (!r.contains(p)) return false;
    if (q.l1.x >= q.l2.x || q.u1.x >= q.u2.x) return false;
    if (q.a() > q.b()) return false;
    for (coord_t i = q.a(); i <= q.b(); ++i) {
        coord_t bottom = y_at(q.l1, q.l2, i).ceil();
        coord_t top = y_at(q.u1, q.u2, i).floor();
        if (top - bottom + 1 != v[static_cast<std::size_t>(i)]) return false;
    }
    return true;
}

namespace detail {

/// Region points strictly right of column x.
inline std::vector<Point> region_points_after(const Region& r, coord_t x) {
    std::vector<Point> out;
    for (coord_t i = x + 1; i < r.m; ++i)
        for (coord_t y = r.lo[static_cast<std::size_t>(i)]; y <= r.hi[static_cast<std::size_t>(i)]; ++y)
            out.push_back({i, y});
    return out;
}

}  // namespace detail

namespace detail {

inline bool rless(Rational a, Rational b) { return a.num * b.den < b.num * a.den; }

/// Slope range for an edge leaving `from`. The lower chain keeps (lo, hi],
/// the upper chain [lo, hi); absent bounds are unbounded.
struct SlopeRange {
    std::optional<Rational> lo, hi;

    void raise(Rational r) {
        if (!lo || rless(*lo, r)) lo = r;
    }
    void cap(Rational r) {
        if (!hi || rless(r, *hi)) hi = r;
    }
    bool empty() const { return lo && hi && !rless(*lo, *hi); }
};

/// End points p of a new chain edge from `from` (x > from.x) such that on
/// every column up to other.b.x the edges bound exactly v_i points. `prev`
/// enforces the strictly convex turn at `from`.
inline std::vector<Point> edge_candidates(Point from, std::optional<Point> prev, bool lower, Point other_a,
                                          Point other_b, const XRay& v, const Region& r) {
    std::vector<Point> out;
    SlopeRange range;
    if (prev) {
        Rational slope{from.y - prev->y, from.x - prev->x};
        if (lower) range.raise(slope);  // strict left turn: steeper than before
        else range.cap(slope);          // strict right turn: flatter than before
    }
    for (coord_t x = from.x + 1; x < r.m; ++x) {
        const coord_t s = x - from.x;
        if (x <= other_b.x) {
            const coord_t need = v[static_cast<std::size_t>(x)];
            if (lower) {
                coord_t t = y_at(other_a, other_b, x).floor() - need + 1;  // ceil(lower) must equal t
                range.raise({t - 1 - from.y, s});
                range.cap({t - from.y, s});
            } else {
                coord_t u = y_at(other_a, other_b, x).ceil() + need - 1;  // floor(upper) must equal u
                range.raise({u - from.y, s});
                range.cap({u + 1 - from.y, s});
            }
            if (range.empty()) break;
        }
        coord_t ymin = r.lo[static_cast<std::size_t>(x)], ymax = r.hi[static_cast<std::size_t>(x)];
        // p.y = from.y + s * slope
        if (lower) {
            if (range.lo) ymin = std::max(ymin, from.y + floor_div(s * range.lo->num, range.lo->den) + 1);
            if (range.hi) ymax = std::min(ymax, from.y + floor_div(s * range.hi->num, range.hi->den));
        } else {
            if (range.lo) ymin = std::max(ymin, from.y + ceil_div(s * range.lo->num, range.lo->den));
            if (range.hi) ymax = std::min(ymax, from.y + ceil_div(s * range.hi->num, range.hi->den) - 1);
        }
        for (coord_t y = ymin; y <= ymax; ++y) out.push_back({x, y});
    }
    return out;
}

}  // namespace detail

inline std::vector<Quad> left_quads(const XRay& v, const Region& r) {
    std::vector<Quad> out;
    const Point l1{0, 0}, u1{0, v[0] - 1};
    for (coord_t x = 1; x < r.m; ++x)
        for (coord_t y = r.lo[static_cast<std::size_t>(x)]; y <= r.hi[static_cast<std::size_t>(x)]; ++y) {
            const Point l2{x, y};
            for (Point u2 : detail::edge_candidates(u1, std::nullopt, false, l1, l2, v, r))
                out.push_back({l1, l2, u1, u2});
        }
    std::sort(out.begin(), out.end());
    return out;
}

/// Both edges end on the last column, bottom in [0, m-2], spanning v_{m-1} points.
inline bool is_right_quad(const Quad& q, const XRay& v) {
    const auto m = static_cast<coord_t>(v.size());
    return q.l2.x == m - 1 && q.u2.x == m - 1 && q.l2.y >= 0 && q.l2.y <= m - 2 &&
           q.u2.y == q.l2.y + v.counts.back() - 1;
}

/// Quads reached by extending whichever chain ends first (either on a tie)
/// with a strictly convex turn: left on the lower chain, right on the upper.
inline std::vector<Quad> quad_successors(const Quad& q, const XRay& v, const Region& r) {
    std::vector<Quad> out;
    if (q.l2.x <= q.u2.x)
        for (Point p : detail::edge_candidates(q.l2, q.l1, true, q.u1, q.u2, v, r))
            out.push_back({q.l2, p, q.u1, q.u2});
    if (q.u2.x <= q.l2.x)
        for (Point p : detail::edge_candidates(q.u2, q.u1, false, q.l1, q.l2, v, r))
            out.push_back({q.l1, q.l2, q.u2, p});
    std::sort(out.begin(), out.end());
    return out;
}

/// Reference successor generator: filters every region point with
/// quad_valid. Quadratically slower; kept to cross-check the fast one.
inline std::vector<Quad> quad_successors_naive(const Quad& q, const XRay& v, const Region& r) {
    std::vector<Quad> out;
    for (coord_t x = 0; x < r.m; ++x)
        for (coord_t y = r.lo[static_cast<std::size_t>(x)]; y <= r.hi[static_cast<std::size_t>(x)]; ++y) {
            const Point p{x, y};
            if (q.l2.x <= q.u2.x && p.x > q.l2.x && cross(q.l2 - q.l1, p - q.l2) > 0) {
                Quad n{q.l2, p, q.u1, q.u2};
                if (quad_valid(n, v, r)) out.push_back(n);
            }
            if (q.u2.x <= q.l2.x && p.x > q.u2.x && cross(q.u2 - q.u1, p - q.u2) < 0) {
                Quad n{q.l1, q.l2, q.u2, p};
                if (quad_valid(n, v, r)) out.push_back(n);
            }
        }
    std::sort(out.begin(), out.end());
    return out;
}

struct Dt1Stats {
    std::size_t expanded = 0;
    std::size_t visited = 0;
};

/// Digital convex set with vertical X-ray v, normalized so its lowest point in
/// column 0 is the origin and, for m >= 2, its lowest point in the last column
/// has height in [0, m-2]. nullopt when none exists.
inline std::optional<LatticeSet> reconstruct1(const XRay& v, Dt1Stats* stats = nullptr) {
    const Region r = build_region(v);
    if (r.m == 1) {
        std::vector<Point> col;
        for (coord_t y = 0; y < v[0]; ++y) col.push_back({0, y});
        return LatticeSet(std::move(col));
    }
    // Depth first, longest edges first; a quad is expanded at most once, so a
    // failed subtree is never revisited.
    std::unordered_set<Quad, QuadHash> seen;
    struct Frame {
        Quad q;
        std::vector<Quad> next;
        std::size_t i = 0;
    };
    auto by_reach = [](std::vector<Quad> qs) {
        std::stable_sort(qs.begin(), qs.end(), [](const Quad& a, const Quad& b) {
            return std::max(a.l2.x, a.u2.x) + std::min(a.l2.x, a.u2.x) > std::max(b.l2.x, b.u2.x) + std::min(b.l2.x, b.u2.x);
        });
        return qs;
    };
    std::vector<Frame> stack;
    auto push = [&](const Quad& q) {
        seen.insert(q);
        if (stats) ++stats->expanded;
        stack.push_back({q, is_right_quad(q, v) ? std::vector<Quad>{} : by_reach(quad_successors(q, v, r))});
    };
    for (const Quad& start : by_reach(left_quads(v, r))) {
        if (seen.contains(start)) continue;
        push(start);
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (is_right_quad(f.q, v)) {
                std::vector<Point> verts;
                for (const Frame& g : stack)
                    for (Point p : {g.q.l1, g.q.l2, g.q.u1, g.q.u2}) verts.push_back(p);
                LatticeSet s = lattice_points_of_hull(convex_hull(std::span<const Point>(verts)));
                if (stats) stats->visited = seen.size();
                if (vertical_xray(s).counts == v.counts && s.contains({0, 0}) && s.bbox()->min_x == 0)
                    return s;
                throw Error(ErrorKind::MalformedResidual, "quad path does not assemble to a solution");
            }
            if (f.i == f.next.size()) {
                stack.pop_back();
                continue;
            }
            const Quad n = f.next[f.i++];
            if (!seen.contains(n)) push(n);
        }
    }
    if (stats) stats->visited = seen.size();
    return std::nullopt;
}

}  // namespace convtomo
