#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "convtomo/convtomo.hpp"

namespace ct = convtomo;

namespace {

enum Exit { Yes = 0, No = 1, Fail = 2 };

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ct::Error(ct::ErrorKind::Parse, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ct::io::SetFile load_set(const std::string& path) {
    try {
        return ct::io::parse_set(read_file(path));
    } catch (const ct::Error& e) {
        throw ct::Error(e.kind(), path + ": " + e.what());
    }
}

/// X-rays from --h/--v strings, optionally overridden by an instance file.
struct XRayArgs {
    std::string h, v, file;

    std::optional<ct::XRay> get_h() const { return load().h; }
    std::optional<ct::XRay> get_v() const { return load().v; }

    ct::io::Instance load() const {
        ct::io::Instance in;
        if (!file.empty()) {
            try {
                in = ct::io::parse_instance(read_file(file));
            } catch (const ct::Error& e) {
                throw ct::Error(e.kind(), file + ": " + e.what());
            }
        }
        auto flag = [](const std::string& s, const char* name) {
            try {
                return ct::io::parse_counts(s);
            } catch (const ct::Error& e) {
                throw ct::Error(e.kind(), std::string("--") + name + ": " + e.what());
            }
        };
        if (!h.empty()) in.h = ct::horizontal(flag(h, "h"));
        if (!v.empty()) in.v = ct::vertical(flag(v, "v"));
        return in;
    }

    void attach(CLI::App* app, bool need_h) {
        if (need_h) app->add_option("--h", h, "row counts, bottom row first");
        app->add_option("--v", v, "column counts, left column first");
        app->add_option("instance", file, "file with 'h: ...' and 'v: ...' lines");
    }
};

ct::XRay require(const std::optional<ct::XRay>& r, const char* name) {
    if (!r) throw ct::Error(ct::ErrorKind::Parse, std::string("missing --") + name);
    return *r;
}

int print_solution(const std::optional<ct::LatticeSet>& s, ct::coord_t m, ct::coord_t n) {
    if (!s) {
        std::cout << "NO\n";
        return No;
    }
    std::cout << (m > 0 ? ct::io::format_grid(*s, m, n) : ct::io::format_grid(*s));
    return Yes;
}

void print_flags(const ct::LatticeSet& s) {
    auto f = ct::classify_set(s);
    auto yn = [](bool b) { return b ? "yes" : "no"; };
    std::cout << "points: " << s.size() << '\n'
              << "h-convex: " << yn(f.h_convex) << '\n'
              << "v-convex: " << yn(f.v_convex) << '\n'
              << "hv-convex: " << yn(f.hv_convex) << '\n'
              << "polyomino: " << yn(f.polyomino) << '\n'
              << "digital convex: " << yn(f.digital_convex) << '\n';
    if (!f.hv_convex) {
        std::cout << "fatness: n/a (feet need hv-convexity)\n";
        return;
    }
    auto fat = ct::classify_fatness(ct::feet(s));
    if (fat.fat()) {
        std::cout << "fatness: fat\n";
    } else {
        std::cout << "fatness: thin\n"
                  << "witness: (" << fat.witness->x << "," << fat.witness->y << ") "
                  << (*fat.orientation == ct::ThinOrientation::Rising ? "rising" : "falling") << '\n';
    }
}

/// Layers selectable for rendering, checked against what the object carries.
struct Layers {
    std::vector<std::string> names;

    bool has(const std::string& n) const { return std::find(names.begin(), names.end(), n) != names.end(); }

    void check(std::initializer_list<const char*> available) const {
        for (const auto& n : names) {
            bool ok = false;
            for (const char* a : available) ok = ok || n == a;
            if (!ok) throw ct::Error(ct::ErrorKind::Parse, "layer '" + n + "' is not available for this object");
        }
    }
};

struct Trace {
    ct::Partition partition{1, 1};
    std::vector<ct::SwitchingComponent> components;
};

ct::io::SvgScene trace_scene(const Trace& t, const Layers& layers, int cell) {
    ct::io::SvgScene sc;
    sc.m = t.partition.width();
    sc.n = t.partition.height();
    sc.cell = cell;
    if (layers.has("kernel")) sc.kernel = t.partition.kernel();
    if (layers.has("out")) sc.out = t.partition.out();
    if (layers.has("undetermined")) sc.undetermined = t.partition.undetermined();
    if (layers.has("correspondences"))
        for (const auto& c : t.components)
            for (std::size_t k = 0; k < c.size(); ++k) sc.correspondences.push_back({c.cycle[k], c.cycle[(k + 1) % c.size()]});
    if (layers.has("hull")) sc.hull = t.partition.kernel_hull();
    return sc;
}

/// Filling on one placement; components are built when a residual remains.
std::optional<Trace> run_trace(const ct::XRay& h, const ct::XRay& v, const ct::FeetPlacement& fp, ct::FillMode mode,
                               std::ostream& log) {
    auto init = ct::init_partition(static_cast<ct::coord_t>(v.size()), static_cast<ct::coord_t>(h.size()), fp);
    if (!init) {
        log << "filling: feet placement conflicts with the grid\n";
        return std::nullopt;
    }
    Trace t{*init, {}};
    auto outcome = ct::run_filling(*init, h, v, mode);
    if (std::holds_alternative<ct::Contradiction>(outcome)) {
        log << "filling: contradiction\n";
        return std::nullopt;
    }
    if (auto* c = std::get_if<ct::Complete>(&outcome)) {
        log << "filling: complete (" << c->solution.size() << " points)\n";
        auto m = t.partition.width(), n = t.partition.height();
        t.partition = ct::Partition(m, n);
        for (ct::coord_t x = 0; x < m; ++x)
            for (ct::coord_t y = 0; y < n; ++y)
                c->solution.contains({x, y}) ? t.partition.mark_kernel({x, y}) : t.partition.mark_out({x, y});
        return t;
    }
    auto& r = std::get<ct::Residual>(outcome);
    t.partition = r.partition;
    log << "filling: residual (kernel " << r.partition.kernel().size() << ", out " << r.partition.out().size()
        << ", undetermined " << r.partition.undetermined_count() << ")\n";
    if (mode == ct::FillMode::HVPolyomino) t.components = ct::build_switching_components(r.partition, h, v);
    return t;
}

std::string placement_text(const ct::FeetPlacement& fp) {
    std::ostringstream os;
    os << "south " << fp.south_start << ".." << fp.south_end() << ", north " << fp.north_start << ".."
       << fp.north_end() << ", west " << fp.west_start << ".." << fp.west_end() << ", east " << fp.east_start
       << ".." << fp.east_end();
    return os.str();
}

int cmd_badguy(const std::string& svg_path) {
    const auto h = ct::BadGuy::h(), v = ct::BadGuy::v();
    const auto fp = ct::BadGuy::placement();
    std::cout << "h: " << ct::io::format_counts(h) << '\n' << "v: " << ct::io::format_counts(v) << '\n';
    std::cout << "placement: " << placement_text(fp) << '\n';
    auto t = run_trace(h, v, fp, ct::FillMode::HVPolyomino, std::cout);
    if (!t) return Fail;
    std::cout << ct::io::format_partition(t->partition);
    std::cout << "switching components: " << t->components.size() << '\n';
    for (std::size_t k = 0; k < t->components.size(); ++k) std::cout << "  component " << k << ": " << t->components[k].size() << " points\n";
    auto cnf = ct::build_aggregation_cnf(t->partition, t->components, h, v);
    std::cout << "clauses: " << cnf.clauses.size() << '\n';
    std::cout << "aggregation: " << (ct::solve_2sat(cnf) ? "SAT" : "UNSAT") << '\n';
    auto full = ct::reconstruct_hv_polyomino(h, v);
    std::cout << "all placements: " << (full ? "solution found" : "no solution") << '\n';
    if (!svg_path.empty()) {
        Layers all{{"kernel", "out", "undetermined", "correspondences"}};
        std::ofstream(svg_path) << ct::io::render_svg(trace_scene(*t, all, 24));
    }
    return Yes;
}

struct RenderArgs {
    std::string file, format = "ascii", out, h, v, placement, mode = "hv";
    std::vector<std::string> layers;
    int cell = 24;
    bool badguy = false;
};

int cmd_render(const RenderArgs& a) {
    if (a.format != "ascii" && a.format != "svg") throw ct::Error(ct::ErrorKind::Parse, "format must be ascii or svg");
    std::string text;
    if (!a.file.empty()) {
        auto f = load_set(a.file);
        Layers layers{a.layers.empty() ? std::vector<std::string>{"points"} : a.layers};
        layers.check({"points", "hull"});
        if (a.format == "ascii") {
            text = ct::io::format_grid(f.set, f.width, f.height);
        } else {
            ct::io::SvgScene sc;
            sc.m = f.width;
            sc.n = f.height;
            sc.cell = a.cell;
            if (layers.has("points")) sc.points = f.set;
            if (layers.has("hull")) sc.hull = ct::convex_hull(f.set);
            text = ct::io::render_svg(sc);
        }
    } else {
        ct::XRay h = ct::BadGuy::h(), v = ct::BadGuy::v();
        ct::FeetPlacement fp = ct::BadGuy::placement();
        ct::FillMode mode = ct::FillMode::HVPolyomino;
        if (!a.badguy) {
            if (a.h.empty() || a.v.empty() || a.placement.empty())
                throw ct::Error(ct::ErrorKind::Parse, "render needs a set file, --badguy, or --h/--v/--placement");
            h = ct::horizontal(ct::io::parse_counts(a.h));
            v = ct::vertical(ct::io::parse_counts(a.v));
            auto s = ct::io::parse_counts(a.placement);
            if (s.size() != 4) throw ct::Error(ct::ErrorKind::Parse, "--placement takes 'south north west east'");
            fp = ct::make_placement(h, v, s[0], s[1], s[2], s[3]);
            if (a.mode == "dc") mode = ct::FillMode::DigitalConvex;
            else if (a.mode != "hv") throw ct::Error(ct::ErrorKind::Parse, "--mode must be hv or dc");
        }
        std::ostringstream log;
        auto t = run_trace(h, v, fp, mode, log);
        std::cerr << log.str();
        if (!t) return No;
        Layers layers{a.layers.empty() ? std::vector<std::string>{"kernel", "out", "undetermined", "correspondences"}
                                       : a.layers};
        layers.check({"kernel", "out", "undetermined", "correspondences", "hull"});
        text = a.format == "ascii" ? ct::io::format_partition(t->partition) : ct::io::render_svg(trace_scene(*t, layers, a.cell));
    }
    if (a.out.empty()) std::cout << text;
    else std::ofstream(a.out) << text;
    return Yes;
}

/// Random small instances checked against the brute-force oracles.
int cmd_fuzz(std::uint64_t seed, int count, unsigned jobs) {
    std::mt19937_64 rng(seed);
    auto uni = [&](ct::coord_t lo, ct::coord_t hi) { return std::uniform_int_distribution<ct::coord_t>(lo, hi)(rng); };
    int mismatches = 0;
    for (int k = 0; k < count; ++k) {
        const ct::coord_t m = uni(1, 5), n = uni(1, 5);
        std::vector<ct::Point> pts;
        for (ct::coord_t x = 0; x < m; ++x)
            for (ct::coord_t y = 0; y < n; ++y)
                if (uni(0, 2) > 0) pts.push_back({x, y});
        ct::LatticeSet s(pts);
        if (s.empty()) continue;
        // The hull of a random set is a digital convex target; the raw set
        // keeps negative instances in the mix.
        for (const auto& target : {s, ct::integer_hull(s)}) {
            auto [h, v] = ct::compute_xrays(target, m, n);
            auto report = [&](const char* what, bool got, bool want) {
                if (got == want) return;
                ++mismatches;
                std::cout << "MISMATCH " << what << " h=[" << ct::io::format_counts(h) << "] v=[" << ct::io::format_counts(v)
                          << "] solver=" << got << " oracle=" << want << '\n';
            };
            bool positive = true;
            for (auto c : v.counts) positive = positive && c > 0;
            if (positive && m <= 5) report("dt1", ct::reconstruct1(v).has_value(), ct::oracle::oracle_dt1(v));
            try {
                auto r2 = ct::reconstruct2(h, v, {jobs});
                auto o2 = ct::oracle::oracle_dt2(h, v, true);
                report("dt2", r2.has_value(), o2.has_value());
            } catch (const ct::Error& e) {
                if (e.kind() != ct::ErrorKind::Unsupported) throw;
            }
            try {
                report("hv", ct::reconstruct_hv_polyomino(h, v).has_value(), ct::oracle::oracle_hv_polyomino(h, v).has_value());
            } catch (const ct::Error& e) {
                if (e.kind() != ct::ErrorKind::Unsupported) throw;
            }
        }
    }
    std::cout << "instances: " << count << ", mismatches: " << mismatches << '\n';
    return mismatches == 0 ? Yes : No;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reconstruction of convex lattice sets from horizontal and vertical X-rays"};
    app.require_subcommand(1);
    // -h would clash with the --h X-ray option.
    app.set_help_flag("--help", "print help and exit");
    // --jobs and --seed may follow the subcommand.
    app.fallthrough();
    unsigned jobs = 1;
    std::uint64_t seed = 1;
    app.add_option("--jobs", jobs, "worker threads for reconstruct2 and fuzz (0 = hardware)")->capture_default_str();
    app.add_option("--seed", seed, "random seed for fuzz")->capture_default_str();

    std::string set_file;
    auto* xray = app.add_subcommand("xray", "print the X-rays of a set file");
    xray->add_option("file", set_file)->required();
    auto* classify = app.add_subcommand("classify", "convexity flags and fat/thin class of a set file");
    classify->add_option("file", set_file)->required();

    XRayArgs r1, r2, hv, orc;
    auto* rec1 = app.add_subcommand("reconstruct1", "digital convex set with a given vertical X-ray");
    r1.attach(rec1, false);
    auto* rec2 = app.add_subcommand("reconstruct2", "fat digital convex set with given X-rays");
    r2.attach(rec2, true);
    auto* hvp = app.add_subcommand("hvpoly", "hv-convex polyomino with given X-rays");
    hv.attach(hvp, true);
    auto* ora = app.add_subcommand("oracle", "brute-force answer for small instances");
    orc.attach(ora, true);
    std::string kind;
    bool any_dc = false;
    ora->add_option("--kind", kind, "dt1, dt2 or hv (default: dt1 with only --v, else dt2)")
        ->check(CLI::IsMember({"dt1", "dt2", "hv"}));
    ora->add_flag("--any", any_dc, "dt2: accept thin sets too");

    std::string svg_path;
    auto* bad = app.add_subcommand("badguy", "filling trace and aggregation verdict on the built-in instance");
    bad->add_option("--svg", svg_path, "write the residual partition as svg");

    RenderArgs ra;
    auto* ren = app.add_subcommand("render", "draw a set file or a filling trace");
    ren->add_option("file", ra.file, "set file");
    ren->add_option("--format", ra.format)->check(CLI::IsMember({"ascii", "svg"}))->capture_default_str();
    ren->add_option("--layers", ra.layers, "points, kernel, out, undetermined, correspondences, hull")->delimiter(',')->allow_extra_args(false);
    ren->add_option("--cell", ra.cell, "svg cell size in pixels")->capture_default_str();
    ren->add_option("-o,--out", ra.out, "output file (default stdout)");
    ren->add_flag("--badguy", ra.badguy, "trace the built-in instance");
    ren->add_option("--h", ra.h);
    ren->add_option("--v", ra.v);
    ren->add_option("--placement", ra.placement, "feet starts 'south north west east'");
    ren->add_option("--mode", ra.mode, "hv or dc filling")->capture_default_str();

    int fuzz_count = 200;
    auto* fuzz = app.add_subcommand("fuzz", "cross-check solvers against oracles on random instances");
    fuzz->add_option("--count", fuzz_count)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? Yes : Fail;
    }
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());

    try {
        if (*xray) {
            auto f = load_set(set_file);
            auto [h, v] = ct::compute_xrays(f.set, f.width, f.height);
            std::cout << "h: " << ct::io::format_counts(h) << '\n' << "v: " << ct::io::format_counts(v) << '\n';
            return Yes;
        }
        if (*classify) {
            auto f = load_set(set_file);
            if (f.set.empty()) throw ct::Error(ct::ErrorKind::EmptySet, "set is empty");
            print_flags(f.set);
            return Yes;
        }
        if (*rec1) return print_solution(ct::reconstruct1(require(r1.get_v(), "v")), 0, 0);
        if (*rec2) {
            auto in = r2.load();
            auto h = require(in.h, "h"), v = require(in.v, "v");
            auto s = ct::reconstruct2(h, v, {jobs});
            return print_solution(s, static_cast<ct::coord_t>(v.size()), static_cast<ct::coord_t>(h.size()));
        }
        if (*hvp) {
            auto in = hv.load();
            auto h = require(in.h, "h"), v = require(in.v, "v");
            return print_solution(ct::reconstruct_hv_polyomino(h, v), static_cast<ct::coord_t>(v.size()),
                                  static_cast<ct::coord_t>(h.size()));
        }
        if (*ora) {
            auto in = orc.load();
            if (kind.empty()) kind = in.h ? "dt2" : "dt1";
            if (kind == "dt1") return print_solution(ct::oracle::oracle_dt1_witness(require(in.v, "v")), 0, 0);
            auto h = require(in.h, "h"), v = require(in.v, "v");
            const auto m = static_cast<ct::coord_t>(v.size()), n = static_cast<ct::coord_t>(h.size());
            if (kind == "dt2") return print_solution(ct::oracle::oracle_dt2(h, v, !any_dc), m, n);
            return print_solution(ct::oracle::oracle_hv_polyomino(h, v), m, n);
        }
        if (*bad) return cmd_badguy(svg_path);
        if (*ren) return cmd_render(ra);
        if (*fuzz) return cmd_fuzz(seed, fuzz_count, jobs);
    } catch (const ct::Error& e) {
        if (e.kind() == ct::ErrorKind::Unsupported) std::cout << "UNSUPPORTED: " << e.what() << '\n';
        else std::cerr << "error: " << e.what() << '\n';
        return Fail;
    }
    return Fail;
}
