#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "convtomo/lattice.hpp"

namespace convtomo::oracle {

struct GridSpec {
    coord_t m = 1;
    coord_t n = 1;
    coord_t cap = 25;  // largest m*n accepted for exhaustive enumeration
};

inline void require_small(const GridSpec& g) {
    if (g.m < 1 || g.n < 1 || g.m * g.n > g.cap)
        throw Error(ErrorKind::Unsupported, "grid too large for exhaustive enumeration");
}

/// Visits every non-empty digital convex subset of the grid, column by
/// column; a column is empty or one run. Prefixes of digital convex sets are
/// digital convex (intersection with a half plane), which prunes the search.
inline void for_each_digital_convex(const GridSpec& g, const std::function<void(const LatticeSet&)>& visit) {
    require_small(g);
    std::vector<Point> pts;
    auto rec = [&](auto&& self, coord_t x) -> void {
        if (x == g.m) {
            if (!pts.empty()) visit(LatticeSet(pts));
            return;
        }
        self(self, x + 1);
        for (coord_t lo = 0; lo < g.n; ++lo) {
            for (coord_t hi = lo; hi < g.n; ++hi) {
                const std::size_t mark = pts.size();
                for (coord_t y = lo; y <= hi; ++y) pts.push_back({x, y});
                if (is_digital_convex(LatticeSet(pts))) self(self, x + 1);
                pts.resize(mark);
            }
        }
    };
    rec(rec, 0);
}

/// All non-empty digital convex subsets in canonical (sorted point list) order.
inline std::vector<LatticeSet> enumerate_digital_convex(const GridSpec& g) {
    std::vector<LatticeSet> out;
    for_each_digital_convex(g, [&](const LatticeSet& s) { out.push_back(s); });
    std::sort(out.begin(), out.end(),
              [](const LatticeSet& a, const LatticeSet& b) { return a.points() < b.points(); });
    return out;
}

/// Naive strategy: filter every subset of the grid (m*n <= 16).
inline std::vector<LatticeSet> enumerate_digital_convex_naive(const GridSpec& g) {
    if (g.m * g.n > 16) throw Error(ErrorKind::Unsupported, "naive enumeration limited to 16 cells");
    std::vector<LatticeSet> out;
    const coord_t cells = g.m * g.n;
    for (std::uint32_t mask = 1; mask < (1u << cells); ++mask) {
        std::vector<Point> pts;
        for (coord_t c = 0; c < cells; ++c)
            if (mask & (1u << c)) pts.push_back({c % g.m, c / g.m});
        LatticeSet s(std::move(pts));
        if (is_digital_convex(s)) out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(),
              [](const LatticeSet& a, const LatticeSet& b) { return a.points() < b.points(); });
    return out;
}

/// Digital convex set with vertical X-ray v, searched with its lowest point of
/// column 0 at the origin and, after a vertical shear, its lowest point of
/// the last column at height [0, m-2].
inline std::optional<LatticeSet> oracle_dt1_witness(const XRay& v) {
    const auto m = static_cast<coord_t>(v.size());
    if (m == 0) return std::nullopt;
    for (auto c : v.counts)
        if (c <= 0) return std::nullopt;
    const coord_t total = v.total();
    std::vector<Point> pts;
    std::optional<LatticeSet> found;
    auto rec = [&](auto&& self, coord_t x) -> void {
        if (found) return;
        if (x == m) {
            found = LatticeSet(pts);
            return;
        }
        const coord_t len = v[static_cast<std::size_t>(x)];
        coord_t from = -total - x, to = total + x;
        if (x == 0) from = to = 0;
        else if (x == m - 1) {
            from = 0;
            to = m - 2;
        }
        for (coord_t lo = from; lo <= to && !found; ++lo) {
            const std::size_t mark = pts.size();
            for (coord_t y = lo; y < lo + len; ++y) pts.push_back({x, y});
            if (is_digital_convex(LatticeSet(pts))) self(self, x + 1);
            pts.resize(mark);
        }
    };
    rec(rec, 0);
    return found;
}

inline bool oracle_dt1(const XRay& v) { return oracle_dt1_witness(v).has_value(); }

/// First digital convex (and fat, when requested) set in the rectangle with
/// X-rays (h, v), in canonical order.
inline std::optional<LatticeSet> oracle_dt2(const XRay& h, const XRay& v, bool fat_only) {
    const auto m = static_cast<coord_t>(v.size());
    const auto n = static_cast<coord_t>(h.size());
    require_small({m, n});
    if (h.total() != v.total()) return std::nullopt;
    std::vector<coord_t> rows(static_cast<std::size_t>(n), 0);
    std::vector<Point> pts;
    std::optional<LatticeSet> found;
    auto rec = [&](auto&& self, coord_t x) -> void {
        if (found) return;
        if (x == m) {
            for (coord_t j = 0; j < n; ++j)
                if (rows[static_cast<std::size_t>(j)] != h[static_cast<std::size_t>(j)]) return;
            LatticeSet s(pts);
            if (s.empty()) return;
            if (fat_only && !classify_fatness(feet(s)).fat()) return;
            found = std::move(s);
            return;
        }
        const coord_t len = v[static_cast<std::size_t>(x)];
        if (len == 0) {
            self(self, x + 1);
            return;
        }
        for (coord_t lo = 0; lo + len <= n && !found; ++lo) {
            bool fits = true;
            for (coord_t y = lo; y < lo + len; ++y)
                fits = fits && rows[static_cast<std::size_t>(y)] < h[static_cast<std::size_t>(y)];
            if (!fits) continue;
            const std::size_t mark = pts.size();
            for (coord_t y = lo; y < lo + len; ++y) {
                pts.push_back({x, y});
                ++rows[static_cast<std::size_t>(y)];
            }
            if (is_digital_convex(LatticeSet(pts))) self(self, x + 1);
            for (coord_t y = lo; y < lo + len; ++y) --rows[static_cast<std::size_t>(y)];
            pts.resize(mark);
        }
    };
    rec(rec, 0);
    return found;
}

/// HV-convex polyomino with X-rays (h, v): row j occupies [l_j, l_j + h_j).
/// Depth-first over rows, pruning on column sums, column convexity and the
/// overlap of consecutive rows.
inline std::optional<LatticeSet> oracle_hv_polyomino(const XRay& h, const XRay& v) {
    const auto m = static_cast<coord_t>(v.size());
    const auto n = static_cast<coord_t>(h.size());
    if (m > 20 || n > 20) throw Error(ErrorKind::Unsupported, "polyomino oracle limited to 20x20");
    if (h.total() != v.total() || h.total() == 0) return std::nullopt;
    coord_t first = 0, last = n - 1;
    while (h[static_cast<std::size_t>(first)] == 0) ++first;
    while (h[static_cast<std::size_t>(last)] == 0) --last;
    for (coord_t j = first; j <= last; ++j)
        if (h[static_cast<std::size_t>(j)] == 0) return std::nullopt;

    enum : std::uint8_t { Unused, Open, Closed };
    std::vector<coord_t> col(static_cast<std::size_t>(m), 0);
    std::vector<std::uint8_t> state(static_cast<std::size_t>(m), Unused);
    std::vector<coord_t> left(static_cast<std::size_t>(n), 0);
    std::optional<LatticeSet> found;

    auto rec = [&](auto&& self, coord_t j) -> void {
        if (found) return;
        if (j > last) {
            for (coord_t i = 0; i < m; ++i)
                if (col[static_cast<std::size_t>(i)] != v[static_cast<std::size_t>(i)]) return;
            std::vector<Point> pts;
            for (coord_t r = first; r <= last; ++r)
                for (coord_t x = left[static_cast<std::size_t>(r)]; x < left[static_cast<std::size_t>(r)] + h[static_cast<std::size_t>(r)]; ++x)
                    pts.push_back({x, r});
            found = LatticeSet(std::move(pts));
            return;
        }
        const coord_t len = h[static_cast<std::size_t>(j)];
        for (coord_t l = 0; l + len <= m && !found; ++l) {
            if (j > first) {
                coord_t pl = left[static_cast<std::size_t>(j - 1)], pr = pl + h[static_cast<std::size_t>(j - 1)] - 1;
                if (l > pr || l + len - 1 < pl) continue;
            }
            bool ok = true;
            for (coord_t x = l; x < l + len && ok; ++x)
                ok = state[static_cast<std::size_t>(x)] != Closed && col[static_cast<std::size_t>(x)] < v[static_cast<std::size_t>(x)];
            if (!ok) continue;
            // Columns that were open and are not continued get closed; they
            // must already be complete.
            auto saved = state;
            for (coord_t x = 0; x < m && ok; ++x) {
                bool in_row = x >= l && x < l + len;
                auto& st = state[static_cast<std::size_t>(x)];
                if (in_row) st = Open;
                else if (st == Open) {
                    st = Closed;
                    ok = col[static_cast<std::size_t>(x)] == v[static_cast<std::size_t>(x)];
                }
            }
            if (ok) {
                for (coord_t x = l; x < l + len; ++x) ++col[static_cast<std::size_t>(x)];
                left[static_cast<std::size_t>(j)] = l;
                self(self, j + 1);
                for (coord_t x = l; x < l + len; ++x) --col[static_cast<std::size_t>(x)];
            }
            state = std::move(saved);
        }
    };
    rec(rec, first);
    return found;
}

/// Naive strategy for the polyomino oracle: all subsets (m*n <= 16).
inline std::optional<LatticeSet> oracle_hv_polyomino_naive(const XRay& h, const XRay& v) {
    const auto m = static_cast<coord_t>(v.size());
    const auto n = static_cast<coord_t>(h.size());
    if (m * n > 16) throw Error(ErrorKind::Unsupported, "naive enumeration limited to 16 cells");
    std::optional<LatticeSet> best;
    for (std::uint32_t mask = 1; mask < (1u << (m * n)); ++mask) {
        std::vector<Point> pts;
        for (coord_t c = 0; c < m * n; ++c)
            if (mask & (1u << c)) pts.push_back({c % m, c / m});
        LatticeSet s(std::move(pts));
        auto [sh, sv] = compute_xrays(s, m, n);
        if (sh.counts != h.counts || sv.counts != v.counts) continue;
        if (!is_hv_convex_polyomino(s)) continue;
        if (!best || s.points() < best->points()) best = std::move(s);
    }
    return best;
}

}  // namespace convtomo::oracle
