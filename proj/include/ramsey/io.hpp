#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ramsey/graph.hpp"

namespace ramsey {

// --- plain edge-list text: first line "N", then one "u v" per line ---

inline std::string to_edge_list(const Graph& g) {
    std::ostringstream out;
    out << g.order() << "\n";
    for (int u = 0; u < g.order(); ++u) {
        VSet nb = g.neighbors(u);
        for (int v = nb.next(u); v >= 0; v = nb.next(v)) out << u << " " << v << "\n";
    }
    return out.str();
}

inline Graph graph_from_edge_list(std::string_view text) {
    std::istringstream in{std::string(text)};
    long n = -1;
    if (!(in >> n) || n < 0)
        throw std::runtime_error("edge list: missing or bad vertex count");
    Graph g{int(n)};
    long u, v;
    while (in >> u) {
        if (!(in >> v)) throw std::runtime_error("edge list: dangling endpoint");
        if (u < 0 || v < 0 || u >= n || v >= n || u == v)
            throw std::runtime_error("edge list: bad edge " + std::to_string(u) + " " +
                                     std::to_string(v));
        g.add_edge(int(u), int(v));
    }
    if (!in.eof()) throw std::runtime_error("edge list: trailing garbage");
    return g;
}

// --- graph6 ---
//
// Bit-exact de-facto format: N(n) header, then the upper triangle listed
// column by column — x(0,1), x(0,2), x(1,2), x(0,3), ... — packed big-endian
// six bits per printable char (value + 63).

inline std::string to_graph6(const Graph& g) {
    int n = g.order();
    std::string out;
    if (n <= 62) {
        out.push_back(char(n + 63));
    } else if (n <= 258047) {
        out.push_back('~');
        out.push_back(char(((n >> 12) & 63) + 63));
        out.push_back(char(((n >> 6) & 63) + 63));
        out.push_back(char((n & 63) + 63));
    } else {
        throw std::runtime_error("graph6: order too large");
    }
    int bit = 0, acc = 0;
    auto push_bit = [&](int b) {
        acc = (acc << 1) | b;
        if (++bit == 6) {
            out.push_back(char(acc + 63));
            bit = 0;
            acc = 0;
        }
    };
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i) push_bit(g.has_edge(i, j) ? 1 : 0);
    if (bit > 0) out.push_back(char((acc << (6 - bit)) + 63));
    return out;
}

inline Graph graph_from_graph6(std::string_view s) {
    std::size_t pos = 0;
    auto need = [&](std::size_t k) {
        if (s.size() < pos + k) throw std::runtime_error("graph6: truncated");
    };
    auto val = [&](char c) {
        int x = int(static_cast<unsigned char>(c)) - 63;
        if (x < 0 || x > 63) throw std::runtime_error("graph6: bad character");
        return x;
    };
    need(1);
    long n;
    if (s[pos] != '~') {
        n = val(s[pos++]);
    } else {
        ++pos;
        need(1);
        if (s[pos] == '~') throw std::runtime_error("graph6: order too large");
        need(3);
        n = (long(val(s[pos])) << 12) | (long(val(s[pos + 1])) << 6) | val(s[pos + 2]);
        pos += 3;
    }
    Graph g{int(n)};
    long nbits = n * (n - 1) / 2;
    need(std::size_t((nbits + 5) / 6));
    long k = 0;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i, ++k) {
            int c = val(s[pos + k / 6]);
            if ((c >> (5 - k % 6)) & 1) g.add_edge(i, j);
        }
    pos += std::size_t((nbits + 5) / 6);
    if (pos != s.size()) throw std::runtime_error("graph6: trailing garbage");
    return g;
}

// --- red/blue colouring file: "red-of-complete N" header, then red edges ---

inline std::string to_coloring_text(const TwoColoring& c) {
    std::ostringstream out;
    out << "red-of-complete " << c.order() << "\n";
    const Graph& r = c.red();
    for (int u = 0; u < r.order(); ++u) {
        VSet nb = r.neighbors(u);
        for (int v = nb.next(u); v >= 0; v = nb.next(v)) out << u << " " << v << "\n";
    }
    return out.str();
}

inline TwoColoring coloring_from_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string word1, word2;
    long n = -1;
    if (!(in >> word1) || word1 != "red-of-complete" || !(in >> n) || n < 0)
        throw std::runtime_error("coloring: expected 'red-of-complete N' header");
    Graph red{int(n)};
    long u, v;
    while (in >> u) {
        if (!(in >> v)) throw std::runtime_error("coloring: dangling endpoint");
        if (u < 0 || v < 0 || u >= n || v >= n || u == v)
            throw std::runtime_error("coloring: bad edge");
        red.add_edge(int(u), int(v));
    }
    if (!in.eof()) throw std::runtime_error("coloring: trailing garbage");
    return TwoColoring(std::move(red));
}

} // namespace ramsey
