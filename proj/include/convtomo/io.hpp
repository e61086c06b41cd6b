#pragma once

#include <charconv>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "convtomo/filling.hpp"
#include "convtomo/lattice.hpp"

namespace convtomo::io {

[[noreturn]] inline void parse_fail(std::size_t line, std::size_t col, const std::string& what) {
    throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
}

namespace detail {

inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view l = text.substr(pos, nl - pos);
        if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
        out.push_back(l);
        pos = nl + 1;
    }
    while (!out.empty() && out.back().find_first_not_of(" \t") == std::string_view::npos) out.pop_back();
    return out;
}

/// Whitespace separated non-negative integers; `col0` is the 1-based column of
/// s[0] in the source line.
inline std::vector<coord_t> parse_ints(std::string_view s, std::size_t line, std::size_t col0) {
    std::vector<coord_t> out;
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] == ' ' || s[i] == '\t' || s[i] == ',') {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != ',') ++j;
        coord_t value = 0;
        auto [ptr, ec] = std::from_chars(s.data() + i, s.data() + j, value);
        if (ec != std::errc{} || ptr != s.data() + j)
            parse_fail(line, col0 + i, "expected an integer, found '" + std::string(s.substr(i, j - i)) + "'");
        if (value < 0) parse_fail(line, col0 + i, "negative count");
        out.push_back(value);
        i = j;
    }
    return out;
}

}  // namespace detail

/// Counts given on the command line ("2 4 6" or "2,4,6").
inline std::vector<coord_t> parse_counts(std::string_view s) { return detail::parse_ints(s, 1, 1); }

struct SetFile {
    LatticeSet set;
    coord_t width = 0;
    coord_t height = 0;
};

/// ASCII grid ('#' occupied, '.' empty, last line is y = 0), or a point list
/// headed by "# width height" with one "x y" pair per line.
inline SetFile parse_set(std::string_view text) {
    auto lines = detail::split_lines(text);
    if (lines.empty()) parse_fail(1, 1, "empty set file");
    SetFile f;
    std::string_view first = lines[0];
    const auto hash = first.find('#');
    const bool header = hash != std::string_view::npos && first.find_first_not_of(" \t") == hash &&
                        first.find_first_of("0123456789") != std::string_view::npos;
    if (header) {
        auto dims = detail::parse_ints(first.substr(hash + 1), 1, hash + 2);
        if (dims.size() != 2) parse_fail(1, hash + 1, "header must be '# width height'");
        f.width = dims[0];
        f.height = dims[1];
        std::vector<Point> pts;
        for (std::size_t k = 1; k < lines.size(); ++k) {
            if (lines[k].find_first_not_of(" \t") == std::string_view::npos) continue;
            auto xy = detail::parse_ints(lines[k], k + 1, 1);
            if (xy.size() != 2) parse_fail(k + 1, 1, "expected 'x y'");
            if (xy[0] >= f.width || xy[1] >= f.height)
                parse_fail(k + 1, 1, "point outside the " + std::to_string(f.width) + "x" + std::to_string(f.height) + " grid");
            pts.push_back({xy[0], xy[1]});
        }
        f.set = LatticeSet(std::move(pts));
        return f;
    }
    f.height = static_cast<coord_t>(lines.size());
    f.width = static_cast<coord_t>(lines[0].size());
    std::vector<Point> pts;
    for (std::size_t k = 0; k < lines.size(); ++k) {
        if (static_cast<coord_t>(lines[k].size()) != f.width)
            parse_fail(k + 1, std::min(lines[k].size(), lines[0].size()) + 1,
                       "row length " + std::to_string(lines[k].size()) + " differs from " + std::to_string(f.width));
        for (std::size_t c = 0; c < lines[k].size(); ++c) {
            char ch = lines[k][c];
            if (ch == '#') pts.push_back({static_cast<coord_t>(c), f.height - 1 - static_cast<coord_t>(k)});
            else if (ch != '.') parse_fail(k + 1, c + 1, std::string("unexpected character '") + ch + "'");
        }
    }
    f.set = LatticeSet(std::move(pts));
    return f;
}

/// X-ray pair read from "h: ..." / "v: ..." lines ('%' starts a comment).
struct Instance {
    std::optional<XRay> h, v;
};

inline Instance parse_instance(std::string_view text) {
    Instance in;
    auto lines = detail::split_lines(text);
    for (std::size_t k = 0; k < lines.size(); ++k) {
        std::string_view l = lines[k];
        if (auto c = l.find('%'); c != std::string_view::npos) l = l.substr(0, c);
        std::size_t start = l.find_first_not_of(" \t");
        if (start == std::string_view::npos) continue;
        char key = l[start];
        std::size_t after = start + 1;
        if (after < l.size() && l[after] == ':') ++after;
        if ((key != 'h' && key != 'v') || (after < l.size() && l[after] != ' ' && l[after] != '\t'))
            parse_fail(k + 1, start + 1, "expected 'h:' or 'v:'");
        auto counts = detail::parse_ints(l.substr(after), k + 1, after + 1);
        if (counts.empty()) parse_fail(k + 1, after + 1, "empty X-ray");
        auto& slot = key == 'h' ? in.h : in.v;
        if (slot) parse_fail(k + 1, start + 1, std::string("duplicate '") + key + "' line");
        slot = key == 'h' ? horizontal(std::move(counts)) : vertical(std::move(counts));
    }
    if (!in.h && !in.v) parse_fail(1, 1, "no X-ray found");
    return in;
}

/// Rows top to bottom, so the last line is y = 0.
inline std::string format_grid(const LatticeSet& s, coord_t m, coord_t n) {
    std::string out;
    for (coord_t y = n - 1; y >= 0; --y) {
        for (coord_t x = 0; x < m; ++x) out += s.contains({x, y}) ? '#' : '.';
        out += '\n';
    }
    return out;
}

inline std::string format_grid(const LatticeSet& s) {
    auto b = s.bbox();
    if (!b) return "";
    return format_grid(s.translated(-b->min_x, -b->min_y), b->max_x - b->min_x + 1, b->max_y - b->min_y + 1);
}

/// '#' kernel, '.' out, '?' undetermined.
inline std::string format_partition(const Partition& p) {
    std::string out;
    for (coord_t y = p.height() - 1; y >= 0; --y) {
        for (coord_t x = 0; x < p.width(); ++x) {
            Cell c = p.at(x, y);
            out += c == Cell::Kernel ? '#' : c == Cell::Out ? '.' : '?';
        }
        out += '\n';
    }
    return out;
}

inline std::string format_counts(const XRay& r) {
    std::string out;
    for (std::size_t k = 0; k < r.size(); ++k) out += (k ? " " : "") + std::to_string(r[k]);
    return out;
}

/// Layers drawn by the SVG renderer, in paint order.
struct SvgScene {
    coord_t m = 0, n = 0;
    int cell = 24;
    LatticeSet points, kernel, out, undetermined;
    std::vector<std::pair<Point, Point>> correspondences;
    std::vector<Point> hull;
};

inline std::string render_svg(const SvgScene& sc) {
    const int c = sc.cell;
    auto px = [&](coord_t x) { return x * c + c / 2; };
    auto py = [&](coord_t y) { return (sc.n - 1 - y) * c + c / 2; };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << sc.m * c << "\" height=\"" << sc.n * c
       << "\" viewBox=\"0 0 " << sc.m * c << ' ' << sc.n * c << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (coord_t x = 0; x <= sc.m; ++x)
        os << "<line x1=\"" << x * c << "\" y1=\"0\" x2=\"" << x * c << "\" y2=\"" << sc.n * c
           << "\" stroke=\"#ddd\"/>\n";
    for (coord_t y = 0; y <= sc.n; ++y)
        os << "<line x1=\"0\" y1=\"" << y * c << "\" x2=\"" << sc.m * c << "\" y2=\"" << y * c
           << "\" stroke=\"#ddd\"/>\n";
    auto dots = [&](const LatticeSet& s, const char* fill, const char* cls) {
        for (Point p : s)
            os << "<circle class=\"" << cls << "\" cx=\"" << px(p.x) << "\" cy=\"" << py(p.y) << "\" r=\""
               << c * 0.35 << "\" fill=\"" << fill << "\"/>\n";
    };
    dots(sc.out, "#f4a6a6", "out");
    dots(sc.undetermined, "#9e9e9e", "undetermined");
    dots(sc.kernel, "#222222", "kernel");
    dots(sc.points, "#222222", "point");
    for (std::size_t k = 0; k < sc.correspondences.size(); ++k) {
        auto [a, b] = sc.correspondences[k];
        const char* stroke = a.y == b.y ? "#1f77b4" : "#2ca02c";
        os << "<line class=\"correspondence\" x1=\"" << px(a.x) << "\" y1=\"" << py(a.y) << "\" x2=\"" << px(b.x)
           << "\" y2=\"" << py(b.y) << "\" stroke=\"" << stroke << "\" stroke-width=\"2\"/>\n";
    }
    if (sc.hull.size() >= 2) {
        os << "<polygon class=\"hull\" fill=\"none\" stroke=\"#ff7f0e\" stroke-width=\"2\" points=\"";
        for (Point p : sc.hull) os << px(p.x) << ',' << py(p.y) << ' ';
        os << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace convtomo::io
