#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace convtomo {

struct Literal {
    std::uint32_t var = 0;
    bool positive = true;

    Literal operator!() const { return {var, !positive}; }
    friend bool operator==(const Literal&, const Literal&) = default;
};

inline Literal pos(std::uint32_t v) { return {v, true}; }
inline Literal neg(std::uint32_t v) { return {v, false}; }

/// Conjunction of two-literal clauses.
struct Cnf2 {
    std::uint32_t num_vars = 0;
    std::vector<std::pair<Literal, Literal>> clauses;

    void add(Literal a, Literal b) { clauses.emplace_back(a, b); }
    void add_implication(Literal a, Literal b) { add(!a, b); }
    bool has_clause(Literal a, Literal b) const {
        return std::any_of(clauses.begin(), clauses.end(), [&](const auto& c) {
            return (c.first == a && c.second == b) || (c.first == b && c.second == a);
        });
    }
};

/// Satisfying assignment of a 2-CNF, or nullopt when unsatisfiable.
/// Implication graph plus Tarjan's strongly connected components.
inline std::optional<std::vector<bool>> solve_2sat(const Cnf2& f) {
    const std::uint32_t n = 2 * f.num_vars;
    auto node = [](Literal l) { return 2 * l.var + (l.positive ? 0u : 1u); };
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (const auto& [a, b] : f.clauses) {
        adj[node(!a)].push_back(node(b));
        adj[node(!b)].push_back(node(a));
    }

    constexpr std::uint32_t unset = UINT32_MAX;
    std::vector<std::uint32_t> index(n, unset), low(n, 0), comp(n, unset);
    std::vector<bool> on_stack(n, false);
    std::vector<std::uint32_t> stack;
    std::uint32_t counter = 0, ncomp = 0;

    // Iterative Tarjan; components come out in reverse topological order.
    std::vector<std::pair<std::uint32_t, std::size_t>> call;
    for (std::uint32_t root = 0; root < n; ++root) {
        if (index[root] != unset) continue;
        call.emplace_back(root, 0);
        while (!call.empty()) {
            auto& [v, edge] = call.back();
            if (edge == 0 && index[v] == unset) {
                index[v] = low[v] = counter++;
                stack.push_back(v);
                on_stack[v] = true;
            }
            if (edge < adj[v].size()) {
                std::uint32_t w = adj[v][edge++];
                if (index[w] == unset) {
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::uint32_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = ncomp;
                } while (w != v);
                ++ncomp;
            }
            std::uint32_t done = v;
            call.pop_back();
            if (!call.empty()) {
                auto parent = call.back().first;
                low[parent] = std::min(low[parent], low[done]);
            }
        }
    }

    std::vector<bool> value(f.num_vars);
    for (std::uint32_t v = 0; v < f.num_vars; ++v) {
        if (comp[2 * v] == comp[2 * v + 1]) return std::nullopt;
        // Tarjan numbers sinks first, so the literal whose component comes
        // earlier in that order is the one that can be made true.
        value[v] = comp[2 * v] < comp[2 * v + 1];
    }
    return value;
}

inline bool satisfies(const Cnf2& f, const std::vector<bool>& a) {
    auto val = [&](Literal l) { return a[l.var] == l.positive; };
    return std::all_of(f.clauses.begin(), f.clauses.end(),
                       [&](const auto& c) { return val(c.first) || val(c.second); });
}

}  // namespace convtomo
