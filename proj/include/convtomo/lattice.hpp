#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace convtomo {

using coord_t = std::int64_t;

enum class ErrorKind {
    OutOfGrid,
    EmptySet,
    NonContiguousFoot,
    Unsupported,
    MalformedResidual,
    Parse,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

struct Point {
    coord_t x = 0;
    coord_t y = 0;

    friend constexpr bool operator==(const Point&, const Point&) = default;
    friend constexpr auto operator<=>(const Point&, const Point&) = default;
};

constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }

// Exact orientation predicates. Coordinates stay far below 2^31 in practice,
// so the products fit in 64 bits.
constexpr coord_t cross(Point u, Point v) { return u.x * v.y - u.y * v.x; }
constexpr coord_t orient(Point a, Point b, Point c) { return cross(b - a, c - a); }

constexpr coord_t floor_div(coord_t a, coord_t b) {
    if (b < 0) {
        a = -a;
        b = -b;
    }
    coord_t q = a / b;
    if ((a % b != 0) && (a < 0)) --q;
    return q;
}
constexpr coord_t ceil_div(coord_t a, coord_t b) { return -floor_div(-a, b); }

/// y on the line through a and b at abscissa x, as num/den with den > 0.
/// Requires a.x != b.x.
struct Rational {
    coord_t num;
    coord_t den;
    coord_t floor() const { return floor_div(num, den); }
    coord_t ceil() const { return ceil_div(num, den); }
};

inline Rational y_at(Point a, Point b, coord_t x) {
    coord_t den = b.x - a.x;
    coord_t num = a.y * den + (b.y - a.y) * (x - a.x);
    if (den < 0) return {-num, -den};
    return {num, den};
}

inline Rational x_at(Point a, Point b, coord_t y) {
    coord_t den = b.y - a.y;
    coord_t num = a.x * den + (b.x - a.x) * (y - a.y);
    if (den < 0) return {-num, -den};
    return {num, den};
}

struct BBox {
    coord_t min_x, max_x, min_y, max_y;
    friend bool operator==(const BBox&, const BBox&) = default;
};

/// Finite lattice set, kept sorted by (x, y) without duplicates.
class LatticeSet {
  public:
    LatticeSet() = default;
    LatticeSet(std::initializer_list<Point> pts) : pts_(pts) { normalize(); }
    explicit LatticeSet(std::vector<Point> pts) : pts_(std::move(pts)) { normalize(); }

    const std::vector<Point>& points() const noexcept { return pts_; }
    std::size_t size() const noexcept { return pts_.size(); }
    bool empty() const noexcept { return pts_.empty(); }
    auto begin() const noexcept { return pts_.begin(); }
    auto end() const noexcept { return pts_.end(); }

    bool contains(Point p) const { return std::binary_search(pts_.begin(), pts_.end(), p); }

    std::optional<BBox> bbox() const {
        if (pts_.empty()) return std::nullopt;
        BBox b{pts_.front().x, pts_.back().x, pts_.front().y, pts_.front().y};
        for (const auto& p : pts_) {
            b.min_y = std::min(b.min_y, p.y);
            b.max_y = std::max(b.max_y, p.y);
        }
        return b;
    }

    bool is_subset_of(const LatticeSet& o) const {
        return std::includes(o.pts_.begin(), o.pts_.end(), pts_.begin(), pts_.end());
    }

    LatticeSet translated(coord_t dx, coord_t dy) const {
        std::vector<Point> out;
        out.reserve(pts_.size());
        for (auto p : pts_) out.push_back({p.x + dx, p.y + dy});
        return LatticeSet(std::move(out));
    }

    friend bool operator==(const LatticeSet&, const LatticeSet&) = default;

  private:
    void normalize() {
        std::sort(pts_.begin(), pts_.end());
        pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
    }

    std::vector<Point> pts_;
};

enum class Axis { Horizontal, Vertical };

/// Per-line point counts. Horizontal X-rays are indexed by row, vertical by column.
struct XRay {
    Axis axis = Axis::Horizontal;
    std::vector<coord_t> counts;

    std::size_t size() const noexcept { return counts.size(); }
    coord_t operator[](std::size_t i) const { return counts[i]; }
    coord_t total() const {
        coord_t s = 0;
        for (auto c : counts) s += c;
        return s;
    }
    friend bool operator==(const XRay&, const XRay&) = default;
};

inline XRay horizontal(std::vector<coord_t> c) { return {Axis::Horizontal, std::move(c)}; }
inline XRay vertical(std::vector<coord_t> c) { return {Axis::Vertical, std::move(c)}; }

struct XRayPair {
    XRay h;
    XRay v;
};

inline XRayPair compute_xrays(const LatticeSet& s, coord_t m, coord_t n) {
    XRayPair r{horizontal(std::vector<coord_t>(static_cast<std::size_t>(n), 0)),
               vertical(std::vector<coord_t>(static_cast<std::size_t>(m), 0))};
    for (auto p : s) {
        if (p.x < 0 || p.x >= m || p.y < 0 || p.y >= n)
            throw Error(ErrorKind::OutOfGrid, "point (" + std::to_string(p.x) + "," +
                                                  std::to_string(p.y) + ") outside the grid");
        ++r.h.counts[static_cast<std::size_t>(p.y)];
        ++r.v.counts[static_cast<std::size_t>(p.x)];
    }
    return r;
}

/// Vertical X-ray over the columns of the set's own bounding box.
inline XRay vertical_xray(const LatticeSet& s) {
    auto b = s.bbox();
    if (!b) return vertical({});
    XRay v = vertical(std::vector<coord_t>(static_cast<std::size_t>(b->max_x - b->min_x + 1), 0));
    for (auto p : s) ++v.counts[static_cast<std::size_t>(p.x - b->min_x)];
    return v;
}

/// Vertices of the convex hull in counter-clockwise order, starting from the
/// lowest point of the leftmost column. Collinear points are dropped; a
/// degenerate hull yields one or two vertices.
inline std::vector<Point> convex_hull(std::span<const Point> pts) {
    std::vector<Point> p(pts.begin(), pts.end());
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() <= 2) return p;
    std::vector<Point> h(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && orient(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && orient(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    h.resize(k - 1);
    if (h.size() == 2 && h[0] == h[1]) h.resize(1);
    return h;
}

inline std::vector<Point> convex_hull(const LatticeSet& s) { return convex_hull(std::span(s.points())); }

/// Integer interval [lo, hi] of lattice points of the hull polygon on column x.
/// Empty when lo > hi.
inline std::pair<coord_t, coord_t> hull_column_span(const std::vector<Point>& hull, coord_t x) {
    coord_t lo = std::numeric_limits<coord_t>::max();
    coord_t hi = std::numeric_limits<coord_t>::min();
    const std::size_t k = hull.size();
    if (k == 1) {
        if (hull[0].x == x) return {hull[0].y, hull[0].y};
        return {1, 0};
    }
    for (std::size_t i = 0; i < k; ++i) {
        Point a = hull[i];
        Point b = hull[(i + 1) % k];
        if (x < std::min(a.x, b.x) || x > std::max(a.x, b.x)) continue;
        if (a.x == b.x) {
            lo = std::min({lo, a.y, b.y});
            hi = std::max({hi, a.y, b.y});
        } else {
            Rational y = y_at(a, b, x);
            lo = std::min(lo, y.ceil());
            hi = std::max(hi, y.floor());
        }
    }
    if (lo > hi) return {1, 0};
    return {lo, hi};
}

/// Lattice points of the polygon with the given convex hull vertices.
inline LatticeSet lattice_points_of_hull(const std::vector<Point>& hull) {
    if (hull.empty()) return {};
    coord_t min_x = hull[0].x, max_x = hull[0].x;
    for (auto p : hull) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
    }
    std::vector<Point> out;
    for (coord_t x = min_x; x <= max_x; ++x) {
        auto [lo, hi] = hull_column_span(hull, x);
        for (coord_t y = lo; y <= hi; ++y) out.push_back({x, y});
    }
    return LatticeSet(std::move(out));
}

inline LatticeSet integer_hull(const LatticeSet& s) { return lattice_points_of_hull(convex_hull(s)); }

inline bool is_digital_convex(const LatticeSet& s) { return integer_hull(s).size() == s.size(); }

struct SetFlags {
    bool h_convex = false;
    bool v_convex = false;
    bool hv_convex = false;
    bool polyomino = false;
    bool digital_convex = false;
};

namespace detail {

// True when every line (grouped by `key`) is an unbroken run in `along`.
template <class Key, class Along>
bool lines_are_runs(const LatticeSet& s, Key key, Along along) {
    std::vector<std::pair<coord_t, coord_t>> kv;
    kv.reserve(s.size());
    for (auto p : s) kv.emplace_back(key(p), along(p));
    std::sort(kv.begin(), kv.end());
    for (std::size_t i = 1; i < kv.size(); ++i)
        if (kv[i].first == kv[i - 1].first && kv[i].second != kv[i - 1].second + 1) return false;
    return true;
}

}  // namespace detail

inline bool is_h_convex(const LatticeSet& s) {
    return detail::lines_are_runs(s, [](Point p) { return p.y; }, [](Point p) { return p.x; });
}
inline bool is_v_convex(const LatticeSet& s) {
    return detail::lines_are_runs(s, [](Point p) { return p.x; }, [](Point p) { return p.y; });
}

inline bool is_4_connected(const LatticeSet& s) {
    if (s.empty()) return true;
    const auto& pts = s.points();
    std::vector<bool> seen(pts.size(), false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t reached = 1;
    auto index_of = [&](Point p) -> std::optional<std::size_t> {
        auto it = std::lower_bound(pts.begin(), pts.end(), p);
        if (it == pts.end() || *it != p) return std::nullopt;
        return static_cast<std::size_t>(it - pts.begin());
    };
    while (!stack.empty()) {
        Point p = pts[stack.back()];
        stack.pop_back();
        for (Point d : {Point{1, 0}, Point{-1, 0}, Point{0, 1}, Point{0, -1}}) {
            if (auto j = index_of(p + d); j && !seen[*j]) {
                seen[*j] = true;
                ++reached;
                stack.push_back(*j);
            }
        }
    }
    return reached == pts.size();
}

inline SetFlags classify_set(const LatticeSet& s) {
    if (s.empty()) throw Error(ErrorKind::EmptySet, "classify_set on an empty set");
    SetFlags f;
    f.h_convex = is_h_convex(s);
    f.v_convex = is_v_convex(s);
    f.hv_convex = f.h_convex && f.v_convex;
    f.polyomino = is_4_connected(s);
    f.digital_convex = is_digital_convex(s);
    return f;
}

inline bool is_hv_convex_polyomino(const LatticeSet& s) {
    return !s.empty() && is_h_convex(s) && is_v_convex(s) && is_4_connected(s);
}

/// Extremal runs of a set. Each foot is stored by its line and inclusive range.
struct Feet {
    LatticeSet south, west, north, east;

    coord_t south_lo() const { return south.points().front().x; }
    coord_t south_hi() const { return south.points().back().x; }
    coord_t north_lo() const { return north.points().front().x; }
    coord_t north_hi() const { return north.points().back().x; }
    coord_t west_lo() const { return west.points().front().y; }
    coord_t west_hi() const { return west.points().back().y; }
    coord_t east_lo() const { return east.points().front().y; }
    coord_t east_hi() const { return east.points().back().y; }
};

inline Feet feet(const LatticeSet& s) {
    auto b = s.bbox();
    if (!b) throw Error(ErrorKind::EmptySet, "feet of an empty set");
    std::vector<Point> south, west, north, east;
    for (auto p : s) {
        if (p.y == b->min_y) south.push_back(p);
        if (p.y == b->max_y) north.push_back(p);
        if (p.x == b->min_x) west.push_back(p);
        if (p.x == b->max_x) east.push_back(p);
    }
    Feet f{LatticeSet(south), LatticeSet(west), LatticeSet(north), LatticeSet(east)};
    auto contiguous = [](const LatticeSet& run, bool along_x) {
        const auto& p = run.points();
        for (std::size_t i = 1; i < p.size(); ++i) {
            coord_t prev = along_x ? p[i - 1].x : p[i - 1].y;
            coord_t cur = along_x ? p[i].x : p[i].y;
            if (cur != prev + 1) return false;
        }
        return true;
    };
    if (!contiguous(f.south, true) || !contiguous(f.north, true) || !contiguous(f.west, false) ||
        !contiguous(f.east, false))
        throw Error(ErrorKind::NonContiguousFoot, "an extremal run of the set is not contiguous");
    return f;
}

enum class FatKind { Fat, Thin };

/// Which strict system the witness satisfies: Rising means south feet left of
/// the witness column and west feet below the witness row; Falling is the
/// fully reversed system.
enum class ThinOrientation { Rising, Falling };

struct Fatness {
    FatKind kind = FatKind::Fat;
    std::optional<Point> witness;
    std::optional<ThinOrientation> orientation;

    bool fat() const { return kind == FatKind::Fat; }
};

/// Fatness from foot extents only; foot comparisons are quantified over every
/// point of each foot.
inline Fatness classify_fatness(coord_t south_lo, coord_t south_hi, coord_t north_lo, coord_t north_hi,
                                coord_t west_lo, coord_t west_hi, coord_t east_lo, coord_t east_hi) {
    Fatness r;
    if (south_hi + 1 < north_lo && west_hi + 1 < east_lo) {
        r.kind = FatKind::Thin;
        r.witness = Point{south_hi + 1, west_hi + 1};
        r.orientation = ThinOrientation::Rising;
    } else if (north_hi + 1 < south_lo && east_hi + 1 < west_lo) {
        r.kind = FatKind::Thin;
        r.witness = Point{north_hi + 1, east_hi + 1};
        r.orientation = ThinOrientation::Falling;
    }
    return r;
}

inline Fatness classify_fatness(const Feet& f) {
    return classify_fatness(f.south_lo(), f.south_hi(), f.north_lo(), f.north_hi(), f.west_lo(),
                            f.west_hi(), f.east_lo(), f.east_hi());
}

inline LatticeSet apply_shear(const LatticeSet& s, coord_t k) {
    std::vector<Point> out;
    out.reserve(s.size());
    for (auto p : s) out.push_back({p.x, p.y - k * p.x});
    return LatticeSet(std::move(out));
}

}  // namespace convtomo
