#pragma once

#include <array>
#include <atomic>
#include <map>
#include <optional>
#include <thread>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "convtomo/filling.hpp"

namespace convtomo {

/// Placements of the four feet whose configuration is fat, in lexicographic
/// (south, north, west, east) order.
inline std::vector<FeetPlacement> enumerate_feet_placements(const XRay& h, const XRay& v) {
    const auto m = static_cast<coord_t>(v.size());
    const auto n = static_cast<coord_t>(h.size());
    std::vector<FeetPlacement> out;
    if (m == 0 || n == 0) return out;
    for (coord_t s = 0; s + h.counts.front() <= m; ++s)
        for (coord_t no = 0; no + h.counts.back() <= m; ++no)
            for (coord_t w = 0; w + v.counts.front() <= n; ++w)
                for (coord_t e = 0; e + v.counts.back() <= n; ++e) {
                    auto fp = make_placement(h, v, s, no, w, e);
                    if (fp.fatness().fat()) out.push_back(fp);
                }
    return out;
}

/// Fully determined row band around the West/East feet and column band
/// around the South/North feet.
struct Strips {
    coord_t row_lo = 0, row_hi = -1;
    coord_t col_lo = 0, col_hi = -1;

    bool in_hstrip(coord_t y) const { return y >= row_lo && y <= row_hi; }
    bool in_vstrip(coord_t x) const { return x >= col_lo && x <= col_hi; }
};

inline Strips compute_strips(const Partition& p, const FeetPlacement& fp) {
    auto grow = [](coord_t lo, coord_t hi, coord_t limit, auto determined) -> std::pair<coord_t, coord_t> {
        for (coord_t k = lo; k <= hi; ++k)
            if (!determined(k)) throw Error(ErrorKind::MalformedResidual, "foot line holds an undetermined cell");
        while (lo > 0 && determined(lo - 1)) --lo;
        while (hi + 1 < limit && determined(hi + 1)) ++hi;
        return {lo, hi};
    };
    Strips st;
    std::tie(st.row_lo, st.row_hi) =
        grow(std::min(fp.west_start, fp.east_start), std::max(fp.west_end(), fp.east_end()), p.height(),
             [&](coord_t j) { return p.row_undetermined(j) == 0; });
    std::tie(st.col_lo, st.col_hi) =
        grow(std::min(fp.south_start, fp.north_start), std::max(fp.south_end(), fp.north_end()), p.width(),
             [&](coord_t i) { return p.col_undetermined(i) == 0; });
    return st;
}

/// Hull chains between consecutive feet. NW and SE are walked clockwise,
/// NE and SW counterclockwise, each from its West/East foot endpoint.
enum class Chain : std::uint8_t { NW, NE, SE, SW };
inline constexpr std::array<Chain, 4> all_chains{Chain::NW, Chain::NE, Chain::SE, Chain::SW};

struct ChainGeometry {
    Point start, end;
    int sx = 1, sy = 1;  // direction of travel along x and y
    bool ccw = true;     // interior lies left of each directed edge
};

inline ChainGeometry chain_geometry(Chain c, const FeetPlacement& fp, coord_t m, coord_t n) {
    switch (c) {
        case Chain::NW: return {{0, fp.west_end()}, {fp.north_start, n - 1}, 1, 1, false};
        case Chain::NE: return {{m - 1, fp.east_end()}, {fp.north_end(), n - 1}, -1, 1, true};
        case Chain::SE: return {{m - 1, fp.east_start}, {fp.south_end(), 0}, -1, -1, false};
        case Chain::SW: return {{0, fp.west_start}, {fp.south_start, 0}, 1, -1, true};
    }
    return {};
}

/// Candidate chain vertices per corner: undetermined points and kernel hull
/// vertices inside the chain's bounding box, in travel order.
struct PotentialVertices {
    std::array<std::vector<Point>, 4> lists;

    const std::vector<Point>& operator[](Chain c) const { return lists[static_cast<std::size_t>(c)]; }
};

inline PotentialVertices potential_vertices(const Partition& p, const FeetPlacement& fp) {
    const auto& hull = p.kernel_hull();
    PotentialVertices pv;
    for (Chain c : all_chains) {
        auto g = chain_geometry(c, fp, p.width(), p.height());
        coord_t x0 = std::min(g.start.x, g.end.x), x1 = std::max(g.start.x, g.end.x);
        coord_t y0 = std::min(g.start.y, g.end.y), y1 = std::max(g.start.y, g.end.y);
        std::vector<Point> pts{g.start, g.end};
        for (coord_t x = x0; x <= x1; ++x)
            for (coord_t y = y0; y <= y1; ++y)
                if (p.at(x, y) == Cell::Undetermined) pts.push_back({x, y});
        for (Point q : hull)
            if (q.x >= x0 && q.x <= x1 && q.y >= y0 && q.y <= y1) pts.push_back(q);
        std::sort(pts.begin(), pts.end(), [&](Point a, Point b) {
            return std::pair(g.sx * a.x, g.sy * a.y) < std::pair(g.sx * b.x, g.sy * b.y);
        });
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        pv.lists[static_cast<std::size_t>(c)] = std::move(pts);
    }
    return pv;
}

struct Segment {
    Point a, b;

    bool degenerate() const { return a == b; }
    friend bool operator==(const Segment&, const Segment&) = default;
    friend auto operator<=>(const Segment&, const Segment&) = default;
};

/// Current segment of each chain.
struct Octagon {
    std::array<Segment, 4> seg;

    const Segment& operator[](Chain c) const { return seg[static_cast<std::size_t>(c)]; }
    Segment& operator[](Chain c) { return seg[static_cast<std::size_t>(c)]; }
    friend bool operator==(const Octagon&, const Octagon&) = default;
    friend auto operator<=>(const Octagon&, const Octagon&) = default;
};

struct OctagonHash {
    std::size_t operator()(const Octagon& o) const noexcept {
        std::size_t h = 0;
        for (const auto& s : o.seg)
            for (coord_t c : {s.a.x, s.a.y, s.b.x, s.b.y}) h = h * 1000003u ^ std::hash<coord_t>{}(c);
        return h;
    }
};

struct StartEnd {
    bool start = false;
    bool end = false;
};

/// Everything the octagon search consults, precomputed once per residual.
class OctagonContext {
  public:
    enum class Bound : std::int8_t { Foot = -1, NW = 0, NE = 1, SE = 2, SW = 3 };

    OctagonContext(const Partition& p, const XRay& h, const XRay& v, const FeetPlacement& fp)
        : p_(p), h_(h), v_(v), fp_(fp), m_(p.width()), n_(p.height()), pv_(potential_vertices(p, fp)) {
        for (Chain c : all_chains) geo_[idx(c)] = chain_geometry(c, fp, m_, n_);
        hull_ = p.kernel_hull();
        row_kmin_.assign(static_cast<std::size_t>(n_), m_);
        row_kmax_.assign(static_cast<std::size_t>(n_), -1);
        col_kmin_.assign(static_cast<std::size_t>(m_), n_);
        col_kmax_.assign(static_cast<std::size_t>(m_), -1);
        for (coord_t x = 0; x < m_; ++x)
            for (coord_t y = 0; y < n_; ++y)
                if (p.at(x, y) == Cell::Kernel) {
                    auto& rl = row_kmin_[static_cast<std::size_t>(y)];
                    auto& rh = row_kmax_[static_cast<std::size_t>(y)];
                    auto& cl = col_kmin_[static_cast<std::size_t>(x)];
                    auto& ch = col_kmax_[static_cast<std::size_t>(x)];
                    rl = std::min(rl, x);
                    rh = std::max(rh, x);
                    cl = std::min(cl, y);
                    ch = std::max(ch, y);
                }
    }

    const PotentialVertices& potential() const { return pv_; }
    const ChainGeometry& geometry(Chain c) const { return geo_[idx(c)]; }

    Octagon root() const {
        Octagon o;
        for (Chain c : all_chains) o[c] = {geo_[idx(c)].start, geo_[idx(c)].start};
        return o;
    }

    StartEnd classify(const Octagon& o) const {
        StartEnd se{true, true};
        for (Chain c : all_chains) {
            const auto& g = geo_[idx(c)];
            se.start = se.start && o[c].a == g.start;
            se.end = se.end && o[c].b == g.end;
        }
        return se;
    }

    /// Rows whose ends both come from feet are fixed by the placement alone.
    bool feet_lines_consistent() const {
        for (coord_t j = 0; j < n_; ++j)
            if (row_bound(j, false) == Bound::Foot && row_bound(j, true) == Bound::Foot && h_[u(j)] != m_) return false;
        for (coord_t i = 0; i < m_; ++i)
            if (col_bound(i, false) == Bound::Foot && col_bound(i, true) == Bound::Foot && v_[u(i)] != n_) return false;
        return true;
    }

    /// Octagon obtained by moving chain c's front vertex to q, or nullopt when
    /// a check fails.
    std::optional<Octagon> advance(const Octagon& o, Chain c, Point q) const {
        const auto& g = geo_[idx(c)];
        const Segment old = o[c];
        const Point b = old.b;
        if (g.sx * (q.x - b.x) <= 0 || g.sy * (q.y - b.y) <= 0) return std::nullopt;
        if (!old.degenerate()) {
            coord_t turn = cross(b - old.a, q - b);
            if (g.ccw ? turn <= 0 : turn >= 0) return std::nullopt;
        }
        // Support line keeps the whole kernel on the inner closed side.
        for (Point k : hull_) {
            coord_t side = orient(b, q, k);
            if (g.ccw ? side < 0 : side > 0) return std::nullopt;
        }
        Octagon next = o;
        next[c] = {b, q};
        // Lines leaving coverage must already be reached by their partner.
        if (!old.degenerate()) {
            for (bool rows : {true, false}) {
                coord_t from = rows ? old.a.y : old.a.x, to = rows ? b.y : b.x;
                for (coord_t l : line_range(from, to, rows ? g.sy : g.sx, false)) {
                    if (!owns(c, rows, l)) continue;
                    auto partner = partner_of(c, rows, l);
                    if (!partner || determined(rows, l)) continue;
                    if (!reached(o, *partner, rows, l)) return std::nullopt;
                }
            }
        }
        // The line through b was settled with the previous segment.
        for (bool rows : {true, false}) {
            const int dir = rows ? g.sy : g.sx;
            coord_t from = (rows ? b.y : b.x) + (old.degenerate() ? 0 : dir), to = rows ? q.y : q.x;
            for (coord_t l : line_range(from, to, dir, true)) {
                if (!owns(c, rows, l)) continue;
                if (!one_sided(next, c, rows, l)) return std::nullopt;
                if (determined(rows, l)) continue;
                auto partner = partner_of(c, rows, l);
                if (!partner) {
                    if (!two_sided(next, rows, l)) return std::nullopt;
                    continue;
                }
                if (passed(next, *partner, rows, l)) return std::nullopt;
                if (covers(next, *partner, rows, l) && !two_sided(next, rows, l)) return std::nullopt;
            }
        }
        return next;
    }

    std::vector<Octagon> successors(const Octagon& o) const {
        std::vector<Octagon> out;
        for (Chain c : all_chains) {
            if (o[c].b == geo_[idx(c)].end) continue;
            for (Point q : pv_[c])
                if (auto n = advance(o, c, q)) out.push_back(*n);
        }
        return out;
    }

    bool valid_solution(const LatticeSet& s) const {
        auto [sh, sv] = compute_xrays(s, m_, n_);
        if (sh.counts != h_.counts || sv.counts != v_.counts || !is_digital_convex(s)) return false;
        auto f = feet(s);
        FeetPlacement got{f.south_lo(), f.south_hi() - f.south_lo() + 1, f.north_lo(), f.north_hi() - f.north_lo() + 1,
                          f.west_lo(),  f.west_hi() - f.west_lo() + 1,   f.east_lo(),  f.east_hi() - f.east_lo() + 1};
        return got == fp_ && classify_fatness(f).fat();
    }

    const std::vector<Point>& kernel_hull() const { return hull_; }

  private:
    static std::size_t idx(Chain c) { return static_cast<std::size_t>(c); }
    static std::size_t u(coord_t k) { return static_cast<std::size_t>(k); }

    /// Boundary chain on the left (or right) end of row j.
    Bound row_bound(coord_t j, bool right) const {
        if (!right) return j > fp_.west_end() ? Bound::NW : j < fp_.west_start ? Bound::SW : Bound::Foot;
        return j > fp_.east_end() ? Bound::NE : j < fp_.east_start ? Bound::SE : Bound::Foot;
    }
    /// Boundary chain at the bottom (or top) end of column i.
    Bound col_bound(coord_t i, bool top) const {
        if (!top) return i < fp_.south_start ? Bound::SW : i > fp_.south_end() ? Bound::SE : Bound::Foot;
        return i < fp_.north_start ? Bound::NW : i > fp_.north_end() ? Bound::NE : Bound::Foot;
    }

    bool owns(Chain c, bool rows, coord_t l) const {
        auto b = static_cast<Bound>(idx(c));
        return rows ? (row_bound(l, false) == b || row_bound(l, true) == b)
                    : (col_bound(l, false) == b || col_bound(l, true) == b);
    }

    /// The other boundary chain of a line owned by c; nullopt for a foot.
    std::optional<Chain> partner_of(Chain c, bool rows, coord_t l) const {
        auto self = static_cast<Bound>(idx(c));
        Bound lo = rows ? row_bound(l, false) : col_bound(l, false);
        Bound hi = rows ? row_bound(l, true) : col_bound(l, true);
        Bound other = lo == self ? hi : lo;
        if (other == Bound::Foot) return std::nullopt;
        return static_cast<Chain>(static_cast<std::uint8_t>(other));
    }

    bool determined(bool rows, coord_t l) const {
        return rows ? p_.row_undetermined(l) == 0 : p_.col_undetermined(l) == 0;
    }

    /// Lines between from and to in travel direction; `closed` includes `to`.
    static std::vector<coord_t> line_range(coord_t from, coord_t to, int dir, bool closed) {
        std::vector<coord_t> out;
        for (coord_t l = from; dir > 0 ? (closed ? l <= to : l < to) : (closed ? l >= to : l > to); l += dir)
            out.push_back(l);
        return out;
    }

    coord_t progress(Chain c, bool rows, coord_t l) const {
        const auto& g = geo_[idx(c)];
        return (rows ? g.sy : g.sx) * l;
    }
    coord_t progress(Chain c, bool rows, Point p) const { return progress(c, rows, rows ? p.y : p.x); }

    bool reached(const Octagon& o, Chain c, bool rows, coord_t l) const {
        return !o[c].degenerate() && progress(c, rows, l) <= progress(c, rows, o[c].b);
    }
    bool passed(const Octagon& o, Chain c, bool rows, coord_t l) const {
        return progress(c, rows, l) < progress(c, rows, o[c].a);
    }
    bool covers(const Octagon& o, Chain c, bool rows, coord_t l) const {
        return !o[c].degenerate() && !passed(o, c, rows, l) && reached(o, c, rows, l);
    }

    /// Exact boundary of line l on the given end, from a foot or from the
    /// current segment of the bounding chain.
    Rational boundary(const Octagon& o, bool rows, coord_t l, bool high) const {
        Bound b = rows ? row_bound(l, high) : col_bound(l, high);
        if (b == Bound::Foot) return {high ? (rows ? m_ - 1 : n_ - 1) : 0, 1};
        const Segment& s = o[static_cast<Chain>(static_cast<std::uint8_t>(b))];
        return rows ? x_at(s.a, s.b, l) : y_at(s.a, s.b, l);
    }

    Cell cell(bool rows, coord_t l, coord_t k) const { return rows ? p_.at(k, l) : p_.at(l, k); }
    coord_t kmin(bool rows, coord_t l) const { return rows ? row_kmin_[u(l)] : col_kmin_[u(l)]; }
    coord_t kmax(bool rows, coord_t l) const { return rows ? row_kmax_[u(l)] : col_kmax_[u(l)]; }

    /// Kernel stays inside the boundary set by chain c; on a determined line
    /// the boundary lands exactly on the kernel run.
    bool one_sided(const Octagon& o, Chain c, bool rows, coord_t l) const {
        auto self = static_cast<Bound>(idx(c));
        const bool high = (rows ? row_bound(l, true) : col_bound(l, true)) == self;
        Rational r = boundary(o, rows, l, high);
        const bool has_kernel = kmax(rows, l) >= 0;
        if (high) {
            coord_t hi = r.floor();
            if (has_kernel && kmax(rows, l) > hi) return false;
            if (determined(rows, l)) return has_kernel && kmax(rows, l) == hi;
        } else {
            coord_t lo = r.ceil();
            if (has_kernel && kmin(rows, l) < lo) return false;
            if (determined(rows, l)) return has_kernel && kmin(rows, l) == lo;
        }
        return true;
    }

    /// Run between the two boundaries has the prescribed length, avoids Out
    /// cells and covers the kernel of the line.
    bool two_sided(const Octagon& o, bool rows, coord_t l) const {
        coord_t lo = boundary(o, rows, l, false).ceil();
        coord_t hi = boundary(o, rows, l, true).floor();
        const coord_t want = rows ? h_[u(l)] : v_[u(l)];
        if (hi - lo + 1 != want) return false;
        if (kmax(rows, l) >= 0 && (kmin(rows, l) < lo || kmax(rows, l) > hi)) return false;
        for (coord_t k = lo; k <= hi; ++k)
            if (cell(rows, l, k) == Cell::Out) return false;
        return true;
    }

    const Partition& p_;
    const XRay& h_;
    const XRay& v_;
    FeetPlacement fp_;
    coord_t m_, n_;
    PotentialVertices pv_;
    std::array<ChainGeometry, 4> geo_;
    std::vector<Point> hull_;
    std::vector<coord_t> row_kmin_, row_kmax_, col_kmin_, col_kmax_;
};

inline StartEnd start_end_class(const Octagon& q, const OctagonContext& ctx) { return ctx.classify(q); }

struct Dt2Stats {
    std::size_t octagons = 0;
    std::size_t failed_assemblies = 0;
};

/// Depth-first search from the root octagon to an End octagon. The answer is
/// the integer hull of the kernel and every vertex on the path.
inline std::optional<LatticeSet> aggregate_search(const Partition& p, const XRay& h, const XRay& v,
                                                  const FeetPlacement& fp, Dt2Stats* stats = nullptr) {
    OctagonContext ctx(p, h, v, fp);
    if (!ctx.feet_lines_consistent()) return std::nullopt;
    std::unordered_map<Octagon, Octagon, OctagonHash> pred;
    const Octagon root = ctx.root();
    pred.emplace(root, root);
    std::vector<Octagon> stack{root};
    while (!stack.empty()) {
        Octagon o = stack.back();
        stack.pop_back();
        if (ctx.classify(o).end) {
            std::vector<Point> verts = ctx.kernel_hull();
            for (Octagon c = o;; c = pred.at(c)) {
                for (const auto& s : c.seg) {
                    verts.push_back(s.a);
                    verts.push_back(s.b);
                }
                if (c == root) break;
            }
            LatticeSet s = lattice_points_of_hull(convex_hull(std::span<const Point>(verts)));
            if (ctx.valid_solution(s)) {
                if (stats) stats->octagons = pred.size();
                return s;
            }
            if (stats) ++stats->failed_assemblies;
            continue;
        }
        auto next = ctx.successors(o);
        // Reverse so the first successor in chain order is expanded first.
        for (auto it = next.rbegin(); it != next.rend(); ++it) {
            if (pred.contains(*it)) continue;
            pred.emplace(*it, o);
            stack.push_back(*it);
        }
    }
    if (stats) stats->octagons = pred.size();
    return std::nullopt;
}

struct Dt2Options {
    unsigned jobs = 1;
};

namespace detail {

inline std::optional<LatticeSet> solve_fat_placement(const XRay& h, const XRay& v, const FeetPlacement& fp,
                                                     const Partition& seed) {
    auto init = init_partition(seed.width(), seed.height(), fp);
    if (!init || !overlay(*init, seed)) return std::nullopt;
    if (!propagate(*init, h, v, FillMode::DigitalConvex)) return std::nullopt;
    OctagonContext check(*init, h, v, fp);
    if (init->undetermined_count() == 0) {
        LatticeSet k = init->kernel();
        if (check.valid_solution(k)) return k;
        return std::nullopt;
    }
    return aggregate_search(*init, h, v, fp);
}

}  // namespace detail

/// Fat digital convex set with X-rays (h, v), or nullopt. With several jobs
/// the placements are shared among threads; the answer is still the one of
/// the lexicographically first successful placement.
inline std::optional<LatticeSet> reconstruct2(const XRay& h, const XRay& v, Dt2Options opt = {}) {
    XRay th = h, tv = v;
    coord_t dx = 0, dy = 0;
    {
        auto trim = [](XRay& r, coord_t& off) {
            std::size_t a = 0, b = r.size();
            while (a < b && r[a] == 0) ++a;
            while (b > a && r[b - 1] == 0) --b;
            for (std::size_t k = a; k < b; ++k)
                if (r[k] <= 0)
                    throw Error(ErrorKind::Unsupported, "X-rays with zero lines inside the grid are not supported");
            off = static_cast<coord_t>(a);
            r.counts = std::vector<coord_t>(r.counts.begin() + static_cast<std::ptrdiff_t>(a),
                                            r.counts.begin() + static_cast<std::ptrdiff_t>(b));
        };
        trim(th, dy);
        trim(tv, dx);
    }
    if (th.size() == 0 || tv.size() == 0 || th.total() != tv.total()) return std::nullopt;
    const auto m = static_cast<coord_t>(tv.size());
    const auto n = static_cast<coord_t>(th.size());
    for (auto c : th.counts)
        if (c > m) return std::nullopt;
    for (auto c : tv.counts)
        if (c > n) return std::nullopt;

    Partition seed(m, n);
    if (!propagate(seed, th, tv, FillMode::DigitalConvex)) return std::nullopt;
    const auto placements = enumerate_feet_placements(th, tv);

    std::optional<LatticeSet> best;
    if (opt.jobs <= 1 || placements.size() < 2) {
        for (const auto& fp : placements)
            if ((best = detail::solve_fat_placement(th, tv, fp, seed))) break;
    } else {
        // Workers claim placements in order; once a success is known, later
        // placements are skipped but earlier ones still finish.
        std::atomic<std::size_t> next{0}, first_success{placements.size()};
        std::vector<std::optional<LatticeSet>> results(placements.size());
        auto work = [&] {
            for (;;) {
                std::size_t k = next.fetch_add(1);
                if (k >= placements.size() || k > first_success.load()) return;
                results[k] = detail::solve_fat_placement(th, tv, placements[k], seed);
                if (results[k]) {
                    std::size_t cur = first_success.load();
                    while (k < cur && !first_success.compare_exchange_weak(cur, k)) {
                    }
                }
            }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < opt.jobs; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
        for (auto& r : results)
            if (r) {
                best = std::move(r);
                break;
            }
    }
    if (!best) return std::nullopt;
    return best->translated(dx, dy);
}

}  // namespace convtomo
