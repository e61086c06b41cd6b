// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "convtomo/convtomo.hpp"

using namespace convtomo;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

int failures = 0;

void report(int id, bool ok, const std::string& detail, double secs) {
    std::printf("criterion %2d: %s  %s  [%.2f s]\n", id, ok ? "PASS" : "FAIL", detail.c_str(), secs);
    std::fflush(stdout);
    if (!ok) ++failures;
}

/// Runs body(k) for k in [0, n) on all hardware threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < n;) body(k);
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
}

/// Calls f on every vector of length len with entries in [1, cap] and sum <= max_sum.
void for_each_vector(coord_t len, coord_t cap, coord_t max_sum, const std::function<void(const std::vector<coord_t>&)>& f) {
    std::vector<coord_t> c;
    auto rec = [&](auto&& self, coord_t sum) -> void {
        if (static_cast<coord_t>(c.size()) == len) {
            f(c);
            return;
        }
        for (coord_t x = 1; x <= cap && sum + x <= max_sum; ++x) {
            c.push_back(x);
            self(self, sum + x);
            c.pop_back();
        }
    };
    rec(rec, 0);
}

bool positive(const XRay& r) {
    return std::all_of(r.counts.begin(), r.counts.end(), [](coord_t c) { return c > 0; });
}

FeetPlacement placement_of(const LatticeSet& s) {
    auto f = feet(s);
    return {f.south_lo(), f.south_hi() - f.south_lo() + 1, f.north_lo(), f.north_hi() - f.north_lo() + 1,
            f.west_lo(),  f.west_hi() - f.west_lo() + 1,   f.east_lo(),  f.east_hi() - f.east_lo() + 1};
}

struct Framed {
    LatticeSet s;
    coord_t m, n;
    XRay h, v;
};

/// The set moved to the origin of its bounding box, with its X-rays there.
Framed frame(const LatticeSet& s0) {
    auto b = *s0.bbox();
    Framed f{s0.translated(-b.min_x, -b.min_y), b.max_x - b.min_x + 1, b.max_y - b.min_y + 1, {}, {}};
    auto xr = compute_xrays(f.s, f.m, f.n);
    f.h = xr.h;
    f.v = xr.v;
    return f;
}

bool valid_dc_witness(const LatticeSet& s, const XRay& v) {
    return !s.empty() && is_digital_convex(s) && vertical_xray(s).counts == v.counts;
}

bool valid_fat_witness(const LatticeSet& s, const XRay& h, const XRay& v) {
    if (s.empty() || !is_digital_convex(s) || !classify_fatness(feet(s)).fat()) return false;
    for (Point p : s)
        if (p.x < 0 || p.y < 0 || p.x >= static_cast<coord_t>(v.size()) || p.y >= static_cast<coord_t>(h.size()))
            return false;
    auto [sh, sv] = compute_xrays(s, static_cast<coord_t>(v.size()), static_cast<coord_t>(h.size()));
    return sh.counts == h.counts && sv.counts == v.counts;
}

// 1 and 2 share the bad-guy run.
void criteria_1_2() {
    auto t0 = Clock::now();
    const auto h = BadGuy::h(), v = BadGuy::v();
    auto init = init_partition(15, 16, BadGuy::placement());
    bool residual = false, unsat = false;
    std::size_t undetermined = 0, comps = 0, clauses = 0;
    if (init) {
        auto out = run_filling(*init, h, v, FillMode::HVPolyomino);
        if (auto* r = std::get_if<Residual>(&out)) {
            residual = true;
            undetermined = r->partition.undetermined_count();
            auto cs = build_switching_components(r->partition, h, v);
            comps = cs.size();
            auto cnf = build_aggregation_cnf(r->partition, cs, h, v);
            clauses = cnf.clauses.size();
            unsat = !solve_2sat(cnf);
        }
    }
    const double secs = seconds_since(t0);
    std::ostringstream d;
    d << "bad guy: filling " << (residual ? "residual" : "not residual") << " with " << undetermined
      << " undetermined, " << comps << " switching component(s), " << clauses << " clauses, "
      << (unsat ? "UNSAT" : "SAT");
    report(1, residual && undetermined > 0 && comps == 1 && unsat && secs < 1.0, d.str(), secs);

    auto verdict = solve_placement(h, v, BadGuy::placement()).verdict;
    std::ostringstream d2;
    d2 << "(filling, aggregation) = (" << (residual ? "Residual" : "other") << ", " << (unsat ? "UNSAT" : "SAT")
       << "); placement verdict " << (verdict == PlacementVerdict::Unsat ? "Unsat" : "other");
    report(2, residual && unsat && verdict == PlacementVerdict::Unsat, d2.str(), seconds_since(t0));
}

void criterion_3() {
    auto t0 = Clock::now();
    std::size_t cases = 0, yes = 0, mismatches = 0, bad_witness = 0;
    auto check = [&](const XRay& v) {
        ++cases;
        auto r = reconstruct1(v);
        if (r.has_value() != oracle::oracle_dt1(v)) ++mismatches;
        if (r) {
            ++yes;
            if (!valid_dc_witness(*r, v)) ++bad_witness;
        }
    };
    for (coord_t m = 1; m <= 4; ++m)
        for_each_vector(m, 8, 8, [&](const std::vector<coord_t>& c) { check(vertical(c)); });
    std::mt19937_64 rng(20240601);
    for (int k = 0; k < 200; ++k) {
        const coord_t m = std::uniform_int_distribution<coord_t>(1, 5)(rng);
        const coord_t sum = std::uniform_int_distribution<coord_t>(m, 10)(rng);
        // Random composition of sum into m positive parts.
        std::vector<coord_t> c(static_cast<std::size_t>(m), 1);
        for (coord_t extra = sum - m; extra > 0; --extra) ++c[rng() % c.size()];
        check(vertical(c));
    }
    std::ostringstream d;
    d << cases << " vectors (" << yes << " solvable), " << mismatches << " mismatches, " << bad_witness
      << " invalid witnesses";
    const double secs = seconds_since(t0);
    report(3, mismatches == 0 && bad_witness == 0 && secs < 300, d.str(), secs);
}

void criterion_4() {
    auto t0 = Clock::now();
    std::set<std::vector<coord_t>> seen;
    oracle::for_each_digital_convex({5, 5}, [&](const LatticeSet& s) {
        auto v = vertical_xray(s);
        if (positive(v)) seen.insert(v.counts);
    });
    std::size_t failed = 0;
    for (const auto& c : seen) {
        auto r = reconstruct1(vertical(c));
        if (!r || !valid_dc_witness(*r, vertical(c))) ++failed;
    }
    std::ostringstream d;
    d << seen.size() << " distinct vertical X-rays of 5x5 digital convex sets, " << failed << " failed";
    const double secs = seconds_since(t0);
    report(4, failed == 0 && secs < 600, d.str(), secs);
}

void criterion_5() {
    auto t0 = Clock::now();
    // Every set of a smaller grid appears translated inside 5x5.
    std::set<std::pair<std::vector<coord_t>, std::vector<coord_t>>> pairs;
    std::size_t fat_sets = 0, interior_zero = 0;
    oracle::for_each_digital_convex({5, 5}, [&](const LatticeSet& s) {
        if (!classify_fatness(feet(s)).fat()) return;
        ++fat_sets;
        auto f = frame(s);
        if (!positive(f.h) || !positive(f.v)) {
            ++interior_zero;
            return;
        }
        pairs.insert({f.h.counts, f.v.counts});
    });
    std::vector<std::pair<std::vector<coord_t>, std::vector<coord_t>>> work(pairs.begin(), pairs.end());
    std::atomic<std::size_t> incomplete{0};
    parallel_for(work.size(), [&](std::size_t k) {
        auto h = horizontal(work[k].first), v = vertical(work[k].second);
        auto r = reconstruct2(h, v);
        if (!r || !valid_fat_witness(*r, h, v)) ++incomplete;
    });

    // Soundness over every positive pair on grids up to 4x4 with equal sums <= 8.
    std::vector<std::pair<std::vector<coord_t>, std::vector<coord_t>>> sound;
    for (coord_t m = 1; m <= 4; ++m)
        for (coord_t n = 1; n <= 4; ++n)
            for_each_vector(n, m, 8, [&](const std::vector<coord_t>& h) {
                for_each_vector(m, n, 8, [&](const std::vector<coord_t>& v) {
                    if (horizontal(h).total() == vertical(v).total()) sound.push_back({h, v});
                });
            });
    std::atomic<std::size_t> unsound{0}, negatives{0}, missed{0};
    parallel_for(sound.size(), [&](std::size_t k) {
        auto h = horizontal(sound[k].first), v = vertical(sound[k].second);
        auto r = reconstruct2(h, v);
        if (oracle::oracle_dt2(h, v, true)) {
            if (!r) ++missed;
            return;
        }
        ++negatives;
        if (r) ++unsound;
    });
    std::ostringstream d;
    d << fat_sets << " fat sets, " << work.size() << " distinct positive X-ray pairs, " << incomplete
      << " incomplete; " << interior_zero << " sets with empty interior lines skipped (unsupported input); soundness: "
      << sound.size() << " pairs, " << negatives << " without fat solution, " << unsound << " wrongly solved, "
      << missed << " missed";
    const double secs = seconds_since(t0);
    report(5, incomplete == 0 && unsound == 0 && missed == 0 && secs < 900, d.str(), secs);
}

/// Random hv-convex polyomino: left ends fall then rise, right ends rise then
/// fall, consecutive rows overlap.
std::optional<LatticeSet> random_polyomino(std::mt19937_64& rng, coord_t m, coord_t n) {
    auto uni = [&](coord_t a, coord_t b) { return std::uniform_int_distribution<coord_t>(a, b)(rng); };
    const coord_t jl = uni(0, n - 1), jr = uni(0, n - 1);
    std::vector<coord_t> l(static_cast<std::size_t>(n)), r(static_cast<std::size_t>(n));
    l[0] = uni(0, m - 1);
    r[0] = uni(l[0], m - 1);
    for (coord_t j = 1; j < n; ++j) {
        auto u = static_cast<std::size_t>(j);
        l[u] = j <= jl ? l[u - 1] - uni(0, 2) : l[u - 1] + uni(0, 2);
        r[u] = j <= jr ? r[u - 1] + uni(0, 2) : r[u - 1] - uni(0, 2);
        l[u] = std::max<coord_t>(l[u], 0);
        r[u] = std::min<coord_t>(r[u], m - 1);
        if (l[u] > r[u] || l[u] > r[u - 1] || l[u - 1] > r[u]) return std::nullopt;
    }
    std::vector<Point> pts;
    for (coord_t j = 0; j < n; ++j)
        for (coord_t x = l[static_cast<std::size_t>(j)]; x <= r[static_cast<std::size_t>(j)]; ++x) pts.push_back({x, j});
    LatticeSet s(std::move(pts));
    if (!is_hv_convex_polyomino(s)) return std::nullopt;
    return s;
}

void criterion_6() {
    auto t0 = Clock::now();
    struct Job {
        coord_t m, n;
        std::vector<coord_t> h;
    };
    std::vector<Job> jobs;
    for (coord_t m = 1; m <= 6; ++m)
        for (coord_t n = 1; n <= 6; ++n)
            for_each_vector(n, m, 12, [&](const std::vector<coord_t>& h) { jobs.push_back({m, n, h}); });
    std::atomic<std::size_t> cases{0}, yes{0}, mismatches{0}, bad{0};
    parallel_for(jobs.size(), [&](std::size_t k) {
        const auto& j = jobs[k];
        auto h = horizontal(j.h);
        const coord_t total = h.total();
        for_each_vector(j.m, j.n, total, [&](const std::vector<coord_t>& vc) {
            auto v = vertical(vc);
            if (v.total() != total) return;
            ++cases;
            auto r = reconstruct_hv_polyomino(h, v);
            if (r.has_value() != oracle::oracle_hv_polyomino(h, v).has_value()) ++mismatches;
            if (r) {
                ++yes;
                if (!valid_polyomino(*r, h, v)) ++bad;
            }
        });
    });

    std::mt19937_64 rng(7);
    std::size_t random_cases = 0, random_yes = 0, random_mismatch = 0;
    while (random_cases < 100) {
        const coord_t m = std::uniform_int_distribution<coord_t>(7, 10)(rng);
        const coord_t n = std::uniform_int_distribution<coord_t>(7, 10)(rng);
        auto s = random_polyomino(rng, m, n);
        if (!s) continue;
        auto f = frame(*s);
        XRay h = f.h, v = f.v;
        if (random_cases % 2 == 1 && h.size() >= 2) {
            // Shift one point between two rows to probe negative answers.
            std::size_t a = rng() % h.size(), b = rng() % h.size();
            if (a == b || h.counts[a] <= 1 || h.counts[b] >= static_cast<coord_t>(v.size())) continue;
            --h.counts[a];
            ++h.counts[b];
        }
        ++random_cases;
        auto r = reconstruct_hv_polyomino(h, v);
        if (r.has_value() != oracle::oracle_hv_polyomino(h, v).has_value()) ++random_mismatch;
        if (r) {
            ++random_yes;
            if (!valid_polyomino(*r, h, v)) ++bad;
        }
    }
    std::ostringstream d;
    d << cases << " exhaustive pairs (" << yes << " solvable), " << mismatches << " mismatches; " << random_cases
      << " random pairs up to 10x10 (" << random_yes << " solvable), " << random_mismatch << " mismatches; " << bad
      << " invalid witnesses";
    report(6, mismatches == 0 && random_mismatch == 0 && bad == 0, d.str(), seconds_since(t0));
}

void criterion_7() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(99);
    std::size_t disagree = 0, sat = 0;
    for (int t = 0; t < 1000; ++t) {
        Cnf2 f;
        f.num_vars = static_cast<std::uint32_t>(1 + rng() % 20);
        const auto nclauses = rng() % 61;
        for (std::size_t c = 0; c < nclauses; ++c) {
            Literal a{static_cast<std::uint32_t>(rng() % f.num_vars), (rng() & 1) != 0};
            Literal b{static_cast<std::uint32_t>(rng() % f.num_vars), (rng() & 1) != 0};
            f.add(a, b);
        }
        // Truth table over bitmasks; a clause is violated when both literals are false.
        bool truth = false;
        for (std::uint32_t mask = 0; mask < (1u << f.num_vars) && !truth; ++mask) {
            truth = true;
            for (const auto& [a, b] : f.clauses) {
                bool va = ((mask >> a.var) & 1u) == (a.positive ? 1u : 0u);
                bool vb = ((mask >> b.var) & 1u) == (b.positive ? 1u : 0u);
                if (!va && !vb) {
                    truth = false;
                    break;
                }
            }
        }
        auto r = solve_2sat(f);
        if (r.has_value() != truth || (r && !satisfies(f, *r))) ++disagree;
        sat += truth;
    }
    std::ostringstream d;
    d << "1000 formulas (" << sat << " satisfiable), " << disagree << " disagreements";
    report(7, disagree == 0, d.str(), seconds_since(t0));
}

/// Least squares slope of log(time) against log(size).
double loglog_slope(const std::vector<double>& size, const std::vector<double>& time) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = static_cast<double>(size.size());
    for (std::size_t i = 0; i < size.size(); ++i) {
        double x = std::log(size[i]), y = std::log(std::max(time[i], 1e-6));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

/// Integer hull of random points in an m x n box touching all four sides.
std::optional<Framed> random_convex(std::mt19937_64& rng, coord_t m, coord_t n, bool need_fat) {
    auto uni = [&](coord_t a, coord_t b) { return std::uniform_int_distribution<coord_t>(a, b)(rng); };
    std::vector<Point> pts{{0, uni(0, n - 1)}, {m - 1, uni(0, n - 1)}, {uni(0, m - 1), 0}, {uni(0, m - 1), n - 1}};
    for (int k = 0; k < 6; ++k) pts.push_back({uni(0, m - 1), uni(0, n - 1)});
    auto f = frame(integer_hull(LatticeSet(pts)));
    if (f.m != m || f.n != n || !positive(f.h) || !positive(f.v)) return std::nullopt;
    if (need_fat && !classify_fatness(feet(f.s)).fat()) return std::nullopt;
    return f;
}

void criterion_8() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(8);
    double worst = 0;
    bool all_solved = true;
    auto sample = [&](coord_t size, bool dt2) {
        const int trials = 4;
        double total = 0;
        for (int done = 0; done < trials;) {
            auto f = random_convex(rng, size, size, dt2);
            if (!f) continue;
            auto t = Clock::now();
            bool ok = dt2 ? reconstruct2(f->h, f->v).has_value() : reconstruct1(f->v).has_value();
            double secs = seconds_since(t);
            all_solved = all_solved && ok;
            worst = std::max(worst, secs);
            total += secs;
            ++done;
        }
        return total / trials;
    };
    std::vector<double> s1{10, 20, 40}, t1, s2{8, 12, 16}, t2;
    for (double m : s1) t1.push_back(sample(static_cast<coord_t>(m), false));
    for (double m : s2) t2.push_back(sample(static_cast<coord_t>(m), true));
    const double k1 = loglog_slope(s1, t1), k2 = loglog_slope(s2, t2);
    std::ostringstream d;
    d.setf(std::ios::fixed);
    d.precision(4);
    d << "reconstruct1 mean s at m=10/20/40: " << t1[0] << "/" << t1[1] << "/" << t1[2] << " slope ";
    d.precision(2);
    d << k1 << " (<= 12); reconstruct2 mean s at 8/12/16: ";
    d.precision(4);
    d << t2[0] << "/" << t2[1] << "/" << t2[2] << " slope ";
    d.precision(2);
    d << k2 << " (<= 14); slowest run " << worst << " s";
    report(8, k1 <= 12 && k2 <= 14 && worst < 600 && all_solved, d.str(), seconds_since(t0));
}

/// Hv-convex polyominoes inside an m x n grid, built column by column.
void for_each_hv_polyomino(coord_t m, coord_t n, const std::function<void(const LatticeSet&)>& visit) {
    std::vector<Point> pts;
    auto rec = [&](auto&& self, coord_t x, bool started, bool ended) -> void {
        if (x == m) {
            if (started) {
                LatticeSet s(pts);
                if (is_hv_convex_polyomino(s)) visit(s);
            }
            return;
        }
        if (!started || !ended) self(self, x + 1, started, started);
        if (ended) return;
        for (coord_t lo = 0; lo < n; ++lo)
            for (coord_t hi = lo; hi < n; ++hi) {
                const std::size_t mark = pts.size();
                for (coord_t y = lo; y <= hi; ++y) pts.push_back({x, y});
                self(self, x + 1, true, false);
                pts.resize(mark);
            }
    };
    rec(rec, 0, false, false);
}

void criterion_9() {
    auto t0 = Clock::now();
    std::size_t checked = 0, violations = 0;
    auto check = [&](const LatticeSet& s0, FillMode mode) {
        auto f = frame(s0);
        if (!positive(f.h) || !positive(f.v)) return;
        ++checked;
        auto p = init_partition(f.m, f.n, placement_of(f.s));
        Partition blank(f.m, f.n);
        for (Partition* q : {p ? &*p : nullptr, &blank}) {
            if (!q || !propagate(*q, f.h, f.v, mode)) {
                ++violations;
                continue;
            }
            if (!q->kernel().is_subset_of(f.s)) ++violations;
            for (Point o : q->out())
                if (f.s.contains(o)) ++violations;
        }
    };
    std::size_t dc = 0, hv = 0;
    oracle::for_each_digital_convex({5, 5}, [&](const LatticeSet& s) {
        ++dc;
        check(s, FillMode::DigitalConvex);
    });
    for_each_hv_polyomino(5, 5, [&](const LatticeSet& s) {
        ++hv;
        check(s, FillMode::HVPolyomino);
    });
    std::ostringstream d;
    d << dc << " digital convex and " << hv << " hv-convex polyomino sets on 5x5, " << checked
      << " with non-empty lines checked (own placement and blank seed), " << violations << " violations";
    report(9, violations == 0 && checked > 0, d.str(), seconds_since(t0));
}

void criterion_10() {
    auto t0 = Clock::now();
    auto a = oracle::enumerate_digital_convex({2, 2}).size();
    auto b = oracle::enumerate_digital_convex({1, 3}).size();
    auto na = oracle::enumerate_digital_convex_naive({2, 2}).size();
    auto nb = oracle::enumerate_digital_convex_naive({1, 3}).size();
    std::ostringstream d;
    d << "2x2: " << a << " (naive " << na << "), 1x3: " << b << " (naive " << nb << ")";
    report(10, a == 15 && b == 6 && na == 15 && nb == 6, d.str(), seconds_since(t0));
}

}  // namespace

int main() {
    const std::pair<const char*, void (*)()> steps[] = {
        {"1-2", criteria_1_2}, {"3", criterion_3}, {"4", criterion_4}, {"5", criterion_5}, {"6", criterion_6},
        {"7", criterion_7},    {"8", criterion_8}, {"9", criterion_9}, {"10", criterion_10},
    };
    for (const auto& [name, fn] : steps) {
        try {
            fn();
        } catch (const std::exception& e) {
            std::printf("criterion %s: FAIL  exception: %s\n", name, e.what());
            ++failures;
        }
    }
    std::printf("%d criterion failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
