#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "convtomo/lattice.hpp"

namespace convtomo {

enum class Cell : std::uint8_t { Undetermined, Kernel, Out };

enum class FillMode { DigitalConvex, HVPolyomino };

enum class Step { Unchanged, Changed, Contradiction };

inline Step merge(Step a, Step b) {
    if (a == Step::Contradiction || b == Step::Contradiction) return Step::Contradiction;
    if (a == Step::Changed || b == Step::Changed) return Step::Changed;
    return Step::Unchanged;
}

/// Chosen positions of the four feet. South/north runs lie on rows 0 and n-1
/// and start at the given column; west/east runs lie on columns 0 and m-1 and
/// start at the given row.
struct FeetPlacement {
    coord_t south_start = 0, south_len = 1;
    coord_t north_start = 0, north_len = 1;
    coord_t west_start = 0, west_len = 1;
    coord_t east_start = 0, east_len = 1;

    coord_t south_end() const { return south_start + south_len - 1; }
    coord_t north_end() const { return north_start + north_len - 1; }
    coord_t west_end() const { return west_start + west_len - 1; }
    coord_t east_end() const { return east_start + east_len - 1; }

    Fatness fatness() const {
        return classify_fatness(south_start, south_end(), north_start, north_end(), west_start,
                                west_end(), east_start, east_end());
    }

    friend bool operator==(const FeetPlacement&, const FeetPlacement&) = default;
    friend auto operator<=>(const FeetPlacement&, const FeetPlacement&) = default;
};

inline FeetPlacement make_placement(const XRay& h, const XRay& v, coord_t south, coord_t north,
                                    coord_t west, coord_t east) {
    return {south, h.counts.front(), north, h.counts.back(), west, v.counts.front(), east, v.counts.back()};
}

inline bool placement_fits(const FeetPlacement& fp, coord_t m, coord_t n) {
    return fp.south_start >= 0 && fp.south_end() < m && fp.north_start >= 0 && fp.north_end() < m &&
           fp.west_start >= 0 && fp.west_end() < n && fp.east_start >= 0 && fp.east_end() < n;
}

/// The four grid corners are claimed consistently by the two feet meeting there.
inline bool corners_consistent(const FeetPlacement& fp, coord_t m, coord_t n) {
    auto has = [](coord_t start, coord_t len, coord_t at) { return at >= start && at < start + len; };
    return has(fp.south_start, fp.south_len, 0) == has(fp.west_start, fp.west_len, 0) &&
           has(fp.south_start, fp.south_len, m - 1) == has(fp.east_start, fp.east_len, 0) &&
           has(fp.north_start, fp.north_len, 0) == has(fp.west_start, fp.west_len, n - 1) &&
           has(fp.north_start, fp.north_len, m - 1) == has(fp.east_start, fp.east_len, n - 1);
}

/// Kernel / Out / Undetermined partition of the m x n grid, with per-line
/// tallies and the convex hull of the kernel.
class Partition {
  public:
    Partition(coord_t m, coord_t n)
        : m_(m), n_(n), cells_(static_cast<std::size_t>(m * n), Cell::Undetermined),
          row_kernel_(static_cast<std::size_t>(n), 0), row_undet_(static_cast<std::size_t>(n), m),
          col_kernel_(static_cast<std::size_t>(m), 0), col_undet_(static_cast<std::size_t>(m), n) {}

    coord_t width() const noexcept { return m_; }
    coord_t height() const noexcept { return n_; }
    bool in_grid(Point p) const { return p.x >= 0 && p.y >= 0 && p.x < m_ && p.y < n_; }

    Cell at(coord_t x, coord_t y) const { return cells_[index(x, y)]; }
    Cell at(Point p) const { return at(p.x, p.y); }

    /// Returns false (and records the contradiction) when p is already Out.
    bool mark_kernel(Point p) { return mark(p, Cell::Kernel); }
    /// Returns false (and records the contradiction) when p is already Kernel.
    bool mark_out(Point p) { return mark(p, Cell::Out); }

    bool contradicted() const noexcept { return contradicted_; }
    void set_contradicted() noexcept { contradicted_ = true; }

    coord_t row_kernel(coord_t j) const { return row_kernel_[static_cast<std::size_t>(j)]; }
    coord_t row_undetermined(coord_t j) const { return row_undet_[static_cast<std::size_t>(j)]; }
    coord_t col_kernel(coord_t i) const { return col_kernel_[static_cast<std::size_t>(i)]; }
    coord_t col_undetermined(coord_t i) const { return col_undet_[static_cast<std::size_t>(i)]; }

    std::size_t undetermined_count() const {
        std::size_t c = 0;
        for (auto u : row_undet_) c += static_cast<std::size_t>(u);
        return c;
    }

    /// Convex hull vertices of the kernel (ccw). Updated from the previous
    /// hull and the points inserted since, not from the whole kernel.
    const std::vector<Point>& kernel_hull() const {
        if (!pending_.empty()) {
            pending_.insert(pending_.end(), hull_.begin(), hull_.end());
            hull_ = convex_hull(std::span<const Point>(pending_));
            pending_.clear();
        }
        return hull_;
    }

    LatticeSet collect(Cell c) const {
        std::vector<Point> out;
        for (coord_t x = 0; x < m_; ++x)
            for (coord_t y = 0; y < n_; ++y)
                if (at(x, y) == c) out.push_back({x, y});
        return LatticeSet(std::move(out));
    }
    LatticeSet kernel() const { return collect(Cell::Kernel); }
    LatticeSet out() const { return collect(Cell::Out); }
    LatticeSet undetermined() const { return collect(Cell::Undetermined); }

    friend bool operator==(const Partition& a, const Partition& b) {
        return a.m_ == b.m_ && a.n_ == b.n_ && a.cells_ == b.cells_ && a.contradicted_ == b.contradicted_;
    }

  private:
    std::size_t index(coord_t x, coord_t y) const { return static_cast<std::size_t>(y * m_ + x); }

    bool mark(Point p, Cell c) {
        Cell& cur = cells_[index(p.x, p.y)];
        if (cur == c) return true;
        if (cur != Cell::Undetermined) {
            contradicted_ = true;
            return false;
        }
        cur = c;
        --row_undet_[static_cast<std::size_t>(p.y)];
        --col_undet_[static_cast<std::size_t>(p.x)];
        if (c == Cell::Kernel) {
            ++row_kernel_[static_cast<std::size_t>(p.y)];
            ++col_kernel_[static_cast<std::size_t>(p.x)];
            pending_.push_back(p);
        }
        return true;
    }

    coord_t m_, n_;
    std::vector<Cell> cells_;
    std::vector<coord_t> row_kernel_, row_undet_, col_kernel_, col_undet_;
    bool contradicted_ = false;
    mutable std::vector<Point> hull_;
    mutable std::vector<Point> pending_;
};

/// Kernel = the four foot runs; every other cell on the grid boundary is Out.
/// nullopt when the runs disagree on a shared boundary cell.
inline std::optional<Partition> init_partition(coord_t m, coord_t n, const FeetPlacement& fp) {
    if (!placement_fits(fp, m, n) || !corners_consistent(fp, m, n)) return std::nullopt;
    Partition p(m, n);
    for (coord_t x = 0; x < m; ++x) {
        for (coord_t y = 0; y < n; ++y) {
            bool on_boundary = false, inside = false, outside = false;
            auto vote = [&](bool on_line, coord_t along, coord_t start, coord_t len) {
                if (!on_line) return;
                on_boundary = true;
                (along >= start && along < start + len ? inside : outside) = true;
            };
            vote(y == 0, x, fp.south_start, fp.south_len);
            vote(y == n - 1, x, fp.north_start, fp.north_len);
            vote(x == 0, y, fp.west_start, fp.west_len);
            vote(x == m - 1, y, fp.east_start, fp.east_len);
            if (!on_boundary) continue;
            if (inside && outside) return std::nullopt;
            if (inside) p.mark_kernel({x, y});
            else p.mark_out({x, y});
        }
    }
    return p;
}

namespace detail {

/// Feasible run starts on one line: window [s, s+count) holds no Out cell and
/// covers every kernel cell of the line.
inline std::vector<bool> feasible_starts(const std::vector<Cell>& line, coord_t count) {
    const auto len = static_cast<coord_t>(line.size());
    std::vector<bool> ok(line.size() + 1, false);
    if (count < 0 || count > len) return ok;
    coord_t kmin = len, kmax = -1;
    std::vector<coord_t> outs(line.size() + 1, 0);
    for (coord_t i = 0; i < len; ++i) {
        outs[static_cast<std::size_t>(i + 1)] = outs[static_cast<std::size_t>(i)] + (line[static_cast<std::size_t>(i)] == Cell::Out);
        if (line[static_cast<std::size_t>(i)] == Cell::Kernel) {
            kmin = std::min(kmin, i);
            kmax = std::max(kmax, i);
        }
    }
    if (count == 0) {
        ok[0] = kmax < 0;
        return ok;
    }
    for (coord_t s = 0; s + count <= len; ++s) {
        if (outs[static_cast<std::size_t>(s + count)] - outs[static_cast<std::size_t>(s)] != 0) continue;
        if (kmax >= 0 && (s > kmin || s + count - 1 < kmax)) continue;
        ok[static_cast<std::size_t>(s)] = true;
    }
    return ok;
}

struct LineView {
    Partition& p;
    bool is_row;
    coord_t index;

    coord_t length() const { return is_row ? p.width() : p.height(); }
    Point point(coord_t k) const { return is_row ? Point{k, index} : Point{index, k}; }
    std::vector<Cell> cells() const {
        std::vector<Cell> c(static_cast<std::size_t>(length()));
        for (coord_t k = 0; k < length(); ++k) c[static_cast<std::size_t>(k)] = p.at(point(k));
        return c;
    }
};

/// Applies the consequences of a set of feasible starts to one line:
/// cells in every window join the kernel, cells in no window go Out.
inline Step commit_windows(LineView line, const std::vector<bool>& starts, coord_t count) {
    const coord_t len = line.length();
    std::vector<coord_t> cover(static_cast<std::size_t>(len + 1), 0);
    coord_t nstarts = 0;
    for (coord_t s = 0; s <= len; ++s) {
        if (!starts[static_cast<std::size_t>(s)]) continue;
        ++nstarts;
        if (count == 0) continue;
        ++cover[static_cast<std::size_t>(s)];
        --cover[static_cast<std::size_t>(s + count)];
    }
    if (nstarts == 0) {
        line.p.set_contradicted();
        return Step::Contradiction;
    }
    Step r = Step::Unchanged;
    coord_t run = 0;
    for (coord_t k = 0; k < len; ++k) {
        run += cover[static_cast<std::size_t>(k)];
        Point q = line.point(k);
        Cell c = line.p.at(q);
        if (run == nstarts && c != Cell::Kernel) {
            if (!line.p.mark_kernel(q)) return Step::Contradiction;
            r = Step::Changed;
        } else if (run == 0 && c != Cell::Out) {
            if (!line.p.mark_out(q)) return Step::Contradiction;
            r = Step::Changed;
        }
    }
    return r;
}

inline std::vector<bool> line_starts(Partition& p, bool is_row, coord_t idx, coord_t count) {
    return feasible_starts(LineView{p, is_row, idx}.cells(), count);
}

}  // namespace detail

/// Row/column filling: each line of an HV-convex solution is one run of the
/// prescribed length that avoids Out and covers the line's kernel. On a line
/// with kernel [b..c] inside the window ]a..d[ this grows the kernel to
/// [min(b, d-h) .. max(c, a+h)] and excludes x <= max(a, c-h) and
/// x >= min(b+h, d); kernel overflow or too few candidates is a contradiction.
inline Step line_fill(Partition& p, const XRay& h, const XRay& v) {
    if (p.contradicted()) return Step::Contradiction;
    Step r = Step::Unchanged;
    for (coord_t j = 0; j < p.height(); ++j) {
        coord_t c = h[static_cast<std::size_t>(j)];
        if (p.row_undetermined(j) == 0 && p.row_kernel(j) == c) continue;
        auto starts = detail::line_starts(p, true, j, c);
        r = merge(r, detail::commit_windows({p, true, j}, starts, c));
        if (r == Step::Contradiction) return r;
    }
    for (coord_t i = 0; i < p.width(); ++i) {
        coord_t c = v[static_cast<std::size_t>(i)];
        if (p.col_undetermined(i) == 0 && p.col_kernel(i) == c) continue;
        auto starts = detail::line_starts(p, false, i, c);
        r = merge(r, detail::commit_windows({p, false, i}, starts, c));
        if (r == Step::Contradiction) return r;
    }
    return r;
}

/// 4-connectivity of an HV-convex set with non-empty lines means the runs of
/// consecutive rows (and columns) overlap. Prunes run starts that cannot
/// overlap any feasible run of a neighbouring line.
inline Step connectivity_fill(Partition& p, const XRay& h, const XRay& v) {
    if (p.contradicted()) return Step::Contradiction;
    Step r = Step::Unchanged;
    auto sweep = [&](bool is_row, coord_t lines, const XRay& counts) {
        std::vector<std::vector<bool>> starts(static_cast<std::size_t>(lines));
        for (coord_t k = 0; k < lines; ++k)
            starts[static_cast<std::size_t>(k)] = detail::line_starts(p, is_row, k, counts[static_cast<std::size_t>(k)]);
        // Bounds propagation forward then backward until stable.
        auto prune = [&](coord_t from, coord_t to) {
            const auto& fs = starts[static_cast<std::size_t>(from)];
            auto& ts = starts[static_cast<std::size_t>(to)];
            coord_t fc = counts[static_cast<std::size_t>(from)], tc = counts[static_cast<std::size_t>(to)];
            bool changed = false;
            for (std::size_t s2 = 0; s2 < ts.size(); ++s2) {
                if (!ts[s2]) continue;
                bool overlaps = false;
                for (std::size_t s1 = 0; s1 < fs.size() && !overlaps; ++s1)
                    overlaps = fs[s1] && static_cast<coord_t>(s2) <= static_cast<coord_t>(s1) + fc - 1 &&
                               static_cast<coord_t>(s1) <= static_cast<coord_t>(s2) + tc - 1;
                if (!overlaps) {
                    ts[s2] = false;
                    changed = true;
                }
            }
            return changed;
        };
        bool again = true;
        while (again) {
            again = false;
            for (coord_t k = 0; k + 1 < lines; ++k) again = prune(k, k + 1) || again;
            for (coord_t k = lines - 1; k > 0; --k) again = prune(k, k - 1) || again;
        }
        for (coord_t k = 0; k < lines && r != Step::Contradiction; ++k)
            r = merge(r, detail::commit_windows({p, is_row, k}, starts[static_cast<std::size_t>(k)],
                                                counts[static_cast<std::size_t>(k)]));
    };
    sweep(true, p.height(), h);
    if (r != Step::Contradiction) sweep(false, p.width(), v);
    return r;
}

/// Kernel <- integer hull of the kernel.
inline Step convex_fill_kernel(Partition& p) {
    if (p.contradicted()) return Step::Contradiction;
    const auto hull = p.kernel_hull();
    if (hull.size() <= 1) return Step::Unchanged;
    Step r = Step::Unchanged;
    coord_t min_x = hull[0].x, max_x = hull[0].x;
    for (auto q : hull) {
        min_x = std::min(min_x, q.x);
        max_x = std::max(max_x, q.x);
    }
    for (coord_t x = min_x; x <= max_x; ++x) {
        auto [lo, hi] = hull_column_span(hull, x);
        for (coord_t y = lo; y <= hi; ++y) {
            Cell c = p.at(x, y);
            if (c == Cell::Kernel) continue;
            if (!p.mark_kernel({x, y})) return Step::Contradiction;
            r = Step::Changed;
        }
    }
    return r;
}

namespace detail {

/// Cone of directions w such that an excluded point x lies in
/// conv(kernel + {x + w}); built from the kernel hull vertices as seen from x.
struct ShadowCone {
    Point apex;
    Point first;  // extreme direction, every generator is ccw of it
    Point last;   // extreme direction, every generator is cw of it

    bool contains(Point y) const {
        Point w = y - apex;
        if (w.x == 0 && w.y == 0) return true;
        if (cross(first, w) < 0 || cross(w, last) < 0) return false;
        auto dot = [](Point a, Point b) { return a.x * b.x + a.y * b.y; };
        return dot(w, first) > 0 || dot(w, last) > 0;
    }
};

/// nullopt when x lies in the kernel hull (the caller reports a contradiction).
inline std::optional<ShadowCone> shadow_cone(Point x, const std::vector<Point>& hull) {
    std::vector<Point> dirs;
    dirs.reserve(hull.size());
    for (auto k : hull) dirs.push_back(x - k);
    // x is outside the closed hull iff all directions lie in an open half plane.
    Point first = dirs[0], last = dirs[0];
    for (auto d : dirs) {
        if (cross(first, d) < 0) first = d;
        if (cross(d, last) < 0) last = d;
    }
    for (auto d : dirs) {
        if (cross(first, d) < 0 || cross(d, last) < 0) return std::nullopt;
    }
    auto dot = [](Point a, Point b) { return a.x * b.x + a.y * b.y; };
    if (cross(first, last) == 0 && dot(first, last) < 0) return std::nullopt;
    if (cross(first, last) < 0) return std::nullopt;
    if (hull.size() >= 3) {
        // Inside-or-on test for a proper polygon.
        bool inside = true;
        for (std::size_t i = 0; i < hull.size() && inside; ++i)
            inside = orient(hull[i], hull[(i + 1) % hull.size()], x) >= 0;
        if (inside) return std::nullopt;
    } else if (hull.size() == 2) {
        if (orient(hull[0], hull[1], x) == 0 && dot(hull[0] - x, hull[1] - x) <= 0) return std::nullopt;
    } else if (hull[0] == x) {
        return std::nullopt;
    }
    return ShadowCone{x, first, last};
}

}  // namespace detail

/// Excludes every undetermined y such that some Out point lies in
/// conv(Kernel + {y}).
inline Step convex_fill_out(Partition& p) {
    if (p.contradicted()) return Step::Contradiction;
    const auto hull = p.kernel_hull();
    if (hull.empty()) return Step::Unchanged;
    std::vector<Point> undet;
    for (coord_t x = 0; x < p.width(); ++x)
        for (coord_t y = 0; y < p.height(); ++y)
            if (p.at(x, y) == Cell::Undetermined) undet.push_back({x, y});
    if (undet.empty()) return Step::Unchanged;
    std::vector<bool> excluded(undet.size(), false);
    for (coord_t x = 0; x < p.width(); ++x) {
        for (coord_t y = 0; y < p.height(); ++y) {
            if (p.at(x, y) != Cell::Out) continue;
            auto cone = detail::shadow_cone({x, y}, hull);
            if (!cone) {
                p.set_contradicted();
                return Step::Contradiction;
            }
            for (std::size_t k = 0; k < undet.size(); ++k)
                if (!excluded[k] && cone->contains(undet[k])) excluded[k] = true;
        }
    }
    Step r = Step::Unchanged;
    for (std::size_t k = 0; k < undet.size(); ++k) {
        if (!excluded[k]) continue;
        p.mark_out(undet[k]);
        r = Step::Changed;
    }
    return r;
}

/// Undetermined points split by the corner of the kernel they face.
struct Borders {
    LatticeSet nw, ne, se, sw;

    bool empty() const { return nw.empty() && ne.empty() && se.empty() && sw.empty(); }
};

/// Corner of an undetermined point: left/right of the kernel on its row and
/// below/above it on its column. Lines without kernel cells fall back to the
/// real intersection with the kernel hull.
inline Borders partition_borders(const Partition& p) {
    const auto& hull = p.kernel_hull();
    std::vector<Point> nw, ne, se, sw;
    auto row_extent = [&](coord_t j) -> std::optional<std::pair<Rational, Rational>> {
        // Real x-extent of the hull on row j.
        std::optional<Rational> lo, hi;
        auto less = [](Rational a, Rational b) { return a.num * b.den < b.num * a.den; };
        auto take = [&](Rational r) {
            if (!lo || less(r, *lo)) lo = r;
            if (!hi || less(*hi, r)) hi = r;
        };
        for (std::size_t i = 0; i < hull.size(); ++i) {
            Point a = hull[i], b = hull[(i + 1) % hull.size()];
            if (j < std::min(a.y, b.y) || j > std::max(a.y, b.y)) continue;
            if (a.y == b.y) {
                take({a.x, 1});
                take({b.x, 1});
            } else {
                take(x_at(a, b, j));
            }
        }
        if (!lo) return std::nullopt;
        return std::pair{*lo, *hi};
    };
    auto col_extent = [&](coord_t i) -> std::optional<std::pair<Rational, Rational>> {
        std::optional<Rational> lo, hi;
        auto less = [](Rational a, Rational b) { return a.num * b.den < b.num * a.den; };
        auto take = [&](Rational r) {
            if (!lo || less(r, *lo)) lo = r;
            if (!hi || less(*hi, r)) hi = r;
        };
        for (std::size_t k = 0; k < hull.size(); ++k) {
            Point a = hull[k], b = hull[(k + 1) % hull.size()];
            if (i < std::min(a.x, b.x) || i > std::max(a.x, b.x)) continue;
            if (a.x == b.x) {
                take({a.y, 1});
                take({b.y, 1});
            } else {
                take(y_at(a, b, i));
            }
        }
        if (!lo) return std::nullopt;
        return std::pair{*lo, *hi};
    };
    // -1: before the kernel on this line, +1: after, 0: unresolved.
    auto side = [](coord_t pos, std::optional<coord_t> kmin, std::optional<coord_t> kmax,
                   std::optional<std::pair<Rational, Rational>> ext) -> int {
        if (kmin && pos < *kmin) return -1;
        if (kmax && pos > *kmax) return 1;
        if (kmin) return 0;
        if (!ext) return 0;
        if (pos * ext->first.den < ext->first.num) return -1;
        if (pos * ext->second.den > ext->second.num) return 1;
        return 0;
    };
    for (coord_t x = 0; x < p.width(); ++x) {
        for (coord_t y = 0; y < p.height(); ++y) {
            if (p.at(x, y) != Cell::Undetermined) continue;
            std::optional<coord_t> rmin, rmax, cmin, cmax;
            for (coord_t k = 0; k < p.width(); ++k)
                if (p.at(k, y) == Cell::Kernel) {
                    if (!rmin) rmin = k;
                    rmax = k;
                }
            for (coord_t k = 0; k < p.height(); ++k)
                if (p.at(x, k) == Cell::Kernel) {
                    if (!cmin) cmin = k;
                    cmax = k;
                }
            int hs = side(x, rmin, rmax, rmin ? std::nullopt : row_extent(y));
            int vs = side(y, cmin, cmax, cmin ? std::nullopt : col_extent(x));
            if (hs == 0 || vs == 0)
                throw Error(ErrorKind::MalformedResidual,
                            "undetermined point (" + std::to_string(x) + "," + std::to_string(y) +
                                ") has no unique corner");
            Point q{x, y};
            if (hs < 0 && vs > 0) nw.push_back(q);
            else if (hs > 0 && vs > 0) ne.push_back(q);
            else if (hs > 0 && vs < 0) se.push_back(q);
            else sw.push_back(q);
        }
    }
    return {LatticeSet(nw), LatticeSet(ne), LatticeSet(se), LatticeSet(sw)};
}

struct Contradiction {};
struct Complete {
    LatticeSet solution;
};
struct Residual {
    Partition partition;
    Borders borders;
};

using FillingOutcome = std::variant<Contradiction, Complete, Residual>;

inline void require_positive_interior(const XRay& h, const XRay& v) {
    for (const XRay* r : {&h, &v})
        for (auto c : r->counts)
            if (c <= 0)
                throw Error(ErrorKind::Unsupported,
                            "X-rays with zero lines inside the grid are not supported");
}

/// Runs the filling operations to their common fixpoint. Convexity operations
/// apply in DigitalConvex mode, run-overlap pruning in HVPolyomino mode.
/// Fixpoint of the filling operations; false on contradiction.
inline bool propagate(Partition& p, const XRay& h, const XRay& v, FillMode mode) {
    if (h.total() != v.total()) return false;
    for (;;) {
        Step s = line_fill(p, h, v);
        if (mode == FillMode::HVPolyomino) {
            s = merge(s, connectivity_fill(p, h, v));
        } else {
            s = merge(s, convex_fill_kernel(p));
            if (s != Step::Contradiction) s = merge(s, convex_fill_out(p));
        }
        if (s == Step::Contradiction || p.contradicted()) return false;
        if (s == Step::Unchanged) return true;
    }
}

/// Copies every determined cell of `from` into `into`; false on conflict.
inline bool overlay(Partition& into, const Partition& from) {
    for (coord_t x = 0; x < from.width(); ++x)
        for (coord_t y = 0; y < from.height(); ++y) {
            Cell c = from.at(x, y);
            if (c == Cell::Kernel) into.mark_kernel({x, y});
            else if (c == Cell::Out) into.mark_out({x, y});
        }
    return !into.contradicted();
}

inline FillingOutcome run_filling(Partition p, const XRay& h, const XRay& v, FillMode mode) {
    require_positive_interior(h, v);
    if (!propagate(p, h, v, mode)) return Contradiction{};
    if (p.undetermined_count() == 0) {
        LatticeSet k = p.kernel();
        auto [kh, kv] = compute_xrays(k, p.width(), p.height());
        if (kh.counts != h.counts || kv.counts != v.counts) return Contradiction{};
        if (mode == FillMode::DigitalConvex && !is_digital_convex(k)) return Contradiction{};
        if (mode == FillMode::HVPolyomino && !is_hv_convex_polyomino(k)) return Contradiction{};
        return Complete{std::move(k)};
    }
    Borders b = partition_borders(p);
    return Residual{std::move(p), std::move(b)};
}

}  // namespace convtomo
