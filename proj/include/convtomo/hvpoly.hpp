#pragma once

#include <map>
#include <optional>
#include <vector>

#include "convtomo/filling.hpp"
#include "convtomo/two_sat.hpp"

namespace convtomo {

enum class Side { North, South, East, West };
enum class Parity : std::uint8_t { Square, Diamond };

/// Constant instance on which filling stalls yet aggregation is unsatisfiable.
struct BadGuy {
    static XRay h() { return horizontal({2, 4, 6, 7, 9, 8, 9, 9, 9, 7, 7, 8, 6, 5, 3, 1}); }
    static XRay v() { return vertical({1, 2, 7, 7, 10, 9, 11, 11, 9, 9, 9, 6, 6, 2, 1}); }
    // Starts of the south, north, west and east feet.
    static FeetPlacement placement() { return make_placement(h(), v(), 9, 4, 11, 4); }
};

/// Point at the other end of p's run window along the given side: a south
/// point (i,j) maps to (i, j+v_i), a west point (i,j) to (i+h_j, j).
/// nullopt when that point falls outside the grid.
inline std::optional<Point> correspondent(Point p, Side side, const XRay& h, const XRay& v) {
    const auto m = static_cast<coord_t>(v.size());
    const auto n = static_cast<coord_t>(h.size());
    if (p.x < 0 || p.y < 0 || p.x >= m || p.y >= n) return std::nullopt;
    Point q = p;
    switch (side) {
        case Side::South: q.y += v[static_cast<std::size_t>(p.x)]; break;
        case Side::North: q.y -= v[static_cast<std::size_t>(p.x)]; break;
        case Side::West: q.x += h[static_cast<std::size_t>(p.y)]; break;
        case Side::East: q.x -= h[static_cast<std::size_t>(p.y)]; break;
    }
    if (q.x < 0 || q.y < 0 || q.x >= m || q.y >= n) return std::nullopt;
    return q;
}

struct SwitchingComponent {
    std::vector<Point> cycle;
    std::vector<Parity> parity;

    std::size_t size() const { return cycle.size(); }
};

namespace detail {

struct Sides {
    Side horizontal;
    Side vertical;
};

inline std::map<Point, Sides> sides_of(const Borders& b) {
    std::map<Point, Sides> out;
    for (Point p : b.nw) out[p] = {Side::West, Side::North};
    for (Point p : b.ne) out[p] = {Side::East, Side::North};
    for (Point p : b.se) out[p] = {Side::East, Side::South};
    for (Point p : b.sw) out[p] = {Side::West, Side::South};
    return out;
}

}  // namespace detail

/// Cycles of the correspondence graph. Every undetermined point must have an
/// undetermined horizontal and vertical correspondent.
inline std::vector<SwitchingComponent> build_switching_components(const Partition& p, const XRay& h,
                                                                  const XRay& v) {
    const auto sides = detail::sides_of(partition_borders(p));
    auto partner = [&](Point q, bool horiz) {
        const auto& s = sides.at(q);
        auto c = correspondent(q, horiz ? s.horizontal : s.vertical, h, v);
        if (!c || !sides.contains(*c))
            throw Error(ErrorKind::MalformedResidual, "undetermined point (" + std::to_string(q.x) + "," +
                                                          std::to_string(q.y) + ") lacks a correspondent");
        return *c;
    };
    // Symmetry check first, so the walk below cannot wander.
    for (const auto& [q, s] : sides)
        for (bool horiz : {true, false})
            if (partner(partner(q, horiz), horiz) != q)
                throw Error(ErrorKind::MalformedResidual, "correspondence is not symmetric");

    std::vector<SwitchingComponent> comps;
    std::map<Point, bool> seen;
    for (const auto& [start, s] : sides) {
        if (seen[start]) continue;
        SwitchingComponent c;
        Point cur = start;
        bool horiz = true;
        do {
            seen[cur] = true;
            c.cycle.push_back(cur);
            c.parity.push_back(c.cycle.size() % 2 == 1 ? Parity::Square : Parity::Diamond);
            cur = partner(cur, horiz);
            horiz = !horiz;
        } while (cur != start || !horiz);
        if (c.cycle.size() % 2 != 0)
            throw Error(ErrorKind::MalformedResidual, "odd switching component");
        comps.push_back(std::move(c));
    }
    return comps;
}

/// Variable x_q says q joins the kernel. Correspondents are exclusive and
/// exhaustive; along a line, inclusion is monotone toward the kernel.
inline Cnf2 build_aggregation_cnf(const Partition& p, const std::vector<SwitchingComponent>& comps,
                                  const XRay& h, const XRay& v) {
    std::map<Point, std::uint32_t> var;
    for (const auto& c : comps)
        for (Point q : c.cycle) var.emplace(q, static_cast<std::uint32_t>(var.size()));
    const auto sides = detail::sides_of(partition_borders(p));

    Cnf2 f;
    f.num_vars = static_cast<std::uint32_t>(var.size());
    for (const auto& c : comps) {
        for (std::size_t k = 0; k < c.size(); ++k) {
            Point a = c.cycle[k], b = c.cycle[(k + 1) % c.size()];
            f.add(pos(var.at(a)), pos(var.at(b)));
            f.add(neg(var.at(a)), neg(var.at(b)));
        }
    }
    for (const auto& [q, s] : sides) {
        const std::uint32_t xq = var.at(q);
        for (const auto& [r, t] : sides) {
            if (r == q) continue;
            // r lies strictly between q and the kernel on q's row or column.
            bool row_between = r.y == q.y && t.horizontal == s.horizontal &&
                               (s.horizontal == Side::West ? r.x > q.x : r.x < q.x);
            bool col_between = r.x == q.x && t.vertical == s.vertical &&
                               (s.vertical == Side::South ? r.y > q.y : r.y < q.y);
            if (row_between || col_between) f.add_implication(pos(xq), pos(var.at(r)));
        }
    }
    (void)h;
    (void)v;
    return f;
}

/// Kernel plus the undetermined points set true by the assignment.
inline LatticeSet assemble(const Partition& p, const std::vector<SwitchingComponent>& comps,
                           const std::vector<bool>& assignment) {
    std::vector<Point> pts = p.kernel().points();
    std::uint32_t k = 0;
    for (const auto& c : comps)
        for (Point q : c.cycle)
            if (assignment[k++]) pts.push_back(q);
    return LatticeSet(std::move(pts));
}

enum class PlacementVerdict { InitConflict, Contradiction, Complete, Solved, Unsat, Malformed, Invalid };

struct PlacementResult {
    PlacementVerdict verdict = PlacementVerdict::Contradiction;
    std::optional<LatticeSet> solution;
};

inline bool valid_polyomino(const LatticeSet& s, const XRay& h, const XRay& v) {
    if (s.empty()) return false;
    for (Point q : s)
        if (q.x >= static_cast<coord_t>(v.size()) || q.y >= static_cast<coord_t>(h.size())) return false;
    auto [sh, sv] = compute_xrays(s, static_cast<coord_t>(v.size()), static_cast<coord_t>(h.size()));
    return sh.counts == h.counts && sv.counts == v.counts && is_hv_convex_polyomino(s);
}

/// Filling followed by 2-SAT aggregation for one feet placement. `seed`
/// holds deductions valid for every solution and is merged in first.
inline PlacementResult solve_placement(const XRay& h, const XRay& v, const FeetPlacement& fp,
                                       const Partition* seed = nullptr) {
    const auto m = static_cast<coord_t>(v.size());
    const auto n = static_cast<coord_t>(h.size());
    auto init = init_partition(m, n, fp);
    if (!init) return {PlacementVerdict::InitConflict, {}};
    if (seed && !overlay(*init, *seed)) return {PlacementVerdict::InitConflict, {}};
    auto outcome = run_filling(std::move(*init), h, v, FillMode::HVPolyomino);
    if (std::holds_alternative<Contradiction>(outcome)) return {PlacementVerdict::Contradiction, {}};
    if (auto* c = std::get_if<Complete>(&outcome)) return {PlacementVerdict::Complete, c->solution};
    const auto& res = std::get<Residual>(outcome);
    std::vector<SwitchingComponent> comps;
    try {
        comps = build_switching_components(res.partition, h, v);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::MalformedResidual) throw;
        return {PlacementVerdict::Malformed, {}};
    }
    auto a = solve_2sat(build_aggregation_cnf(res.partition, comps, h, v));
    if (!a) return {PlacementVerdict::Unsat, {}};
    LatticeSet s = assemble(res.partition, comps, *a);
    if (!valid_polyomino(s, h, v)) return {PlacementVerdict::Invalid, {}};
    return {PlacementVerdict::Solved, std::move(s)};
}

namespace detail {

struct Trimmed {
    XRay h, v;
    coord_t dx = 0, dy = 0;
};

/// Drops leading and trailing zero lines; interior zeros are unsupported.
inline Trimmed trim_zero_lines(const XRay& h, const XRay& v) {
    auto trim = [](const XRay& r, coord_t& offset) {
        std::size_t a = 0, b = r.size();
        while (a < b && r[a] == 0) ++a;
        while (b > a && r[b - 1] == 0) --b;
        for (std::size_t k = a; k < b; ++k)
            if (r[k] <= 0)
                throw Error(ErrorKind::Unsupported, "X-rays with zero lines inside the grid are not supported");
        offset = static_cast<coord_t>(a);
        XRay out = r;
        out.counts.assign(r.counts.begin() + static_cast<std::ptrdiff_t>(a),
                          r.counts.begin() + static_cast<std::ptrdiff_t>(b));
        return out;
    };
    Trimmed t;
    t.h = trim(h, t.dy);
    t.v = trim(v, t.dx);
    return t;
}

}  // namespace detail

/// All feet placements in lexicographic (south, north, west, east) order.
inline std::vector<FeetPlacement> enumerate_placements(const XRay& h, const XRay& v) {
    const auto m = static_cast<coord_t>(v.size());
    const auto n = static_cast<coord_t>(h.size());
    std::vector<FeetPlacement> out;
    for (coord_t s = 0; s + h.counts.front() <= m; ++s)
        for (coord_t no = 0; no + h.counts.back() <= m; ++no)
            for (coord_t w = 0; w + v.counts.front() <= n; ++w)
                for (coord_t e = 0; e + v.counts.back() <= n; ++e)
                    out.push_back(make_placement(h, v, s, no, w, e));
    return out;
}

/// HV-convex polyomino with X-rays (h, v), or nullopt.
inline std::optional<LatticeSet> reconstruct_hv_polyomino(const XRay& h, const XRay& v) {
    auto t = detail::trim_zero_lines(h, v);
    if (t.h.size() == 0 || t.v.size() == 0 || t.h.total() != t.v.total()) return std::nullopt;
    const auto m = static_cast<coord_t>(t.v.size());
    const auto n = static_cast<coord_t>(t.h.size());
    for (auto c : t.h.counts)
        if (c > m) return std::nullopt;
    for (auto c : t.v.counts)
        if (c > n) return std::nullopt;
    // Placement-free deductions prune and seed every placement.
    Partition seed(m, n);
    if (!propagate(seed, t.h, t.v, FillMode::HVPolyomino)) return std::nullopt;
    for (const auto& fp : enumerate_placements(t.h, t.v)) {
        auto r = solve_placement(t.h, t.v, fp, &seed);
        if (r.solution) return r.solution->translated(t.dx, t.dy);
    }
    return std::nullopt;
}

}  // namespace convtomo
