#pragma once

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace ramsey {

// Every numeric constant the constructions depend on, in one bundle.  The
// "paper" preset carries the astronomically large values that make the
// guarantees unconditional; the "desk" preset shrinks multiplicative
// constants so the same recipes run on graphs with a few hundred vertices.
// Desk outputs are certified by re-verification, never by the lemma.
struct ConstantsProfile {
    std::string name = "paper";

    // global
    double slack = 2;            // additive slack applied to ceiling-free bounds
    int exact_subset_limit = 20; // exhaustive expansion checks allowed up to this order

    // budgets
    long long search_nodes = 20'000'000;  // subgraph-search node cap
    long long check_samples = 4000;       // randomized-falsifier sample count
    long long rotation_frontier = 200'000; // rotation closure cap (large graphs)
    int chord_passes = 64;                // chord-shortening sweep limit

    // multipartite-expander extraction, one (M, Δ, β) triple per calling context
    double small_M = 9e6, small_delta = 4000, small_beta = 1.5e6; // one-shot gadget
    double dbl_M = 9.5e6, dbl_delta = 40000, dbl_beta = 1.5e6;    // doubled gadget
    double gwr_M = 1e7, gwr_delta = 40000, gwr_beta = 1.5e6;      // gadget-with-return

    // gadget machinery
    double N1 = 1e7;                 // host threshold: |g| ≥ N1·λ·μ·k·m
    double small_gadget_coeff = 9.1e6; // |g| ≥ coeff·k·m for the one-shot gadget
    double dbl_gadget_coeff = 9.5e6;   // |g| ≥ coeff·k·m for the doubled gadget
    long long tree_order_cap = 1'000'000'000'000; // endpoint trees use order min(m, cap)
    double lambda = 1e21, mu = 1e20;   // path-connection flavor
    double gc_lambda = 1e24, gc_mu = 1e21; // gadget-cycle flavor
    double min_two_mu = 1e9;         // side condition λ ≥ 2μ ≥ this
    double gwr_34_coeff = 4100;      // side condition μm ≥ coeff·(λm)^(3/4)
    double gc_a_frac = 0.01, gc_b_frac = 0.99; // chain-closure cycle parameters as fractions of the material

    // exact-length connection
    double N2 = 2e49; // requires n ≥ N2·m

    // engines
    double N3_connected = 1e56; // connected case: n ≥ N3·m
    double N3_partition = 1e58; // partition lemma: n ≥ N3·m
    double N3_main = 1e60;      // full pipeline: n ≥ N3·m_k
    double conn_graph_coeff = 0.07; // connected case: |G| ≥ coeff·k·n + n

    // exponent knobs (kept independent on purpose)
    double exp_main = 22;         // m_i ≥ i^exp_main
    double exp_partition = 21;    // m ≥ k^exp_partition
    double exp_connectivity = 20; // separator size / disjoint-path count k^exp
    double exp_join_r = 12;       // joining uses r = k^exp_join_r
    double exp_len = 7;           // joining length budget ℓ = |G|/k^exp_len

    bool refuse_oversized = true; // refuse runs whose hypotheses exceed the input

    static ConstantsProfile paper() { return {}; }

    static ConstantsProfile desk() {
        ConstantsProfile p;
        p.name = "desk";
        p.small_M = 32;
        p.small_delta = 1;
        p.small_beta = 4;
        p.dbl_M = 70;
        p.dbl_delta = 1;
        p.dbl_beta = 4;
        p.gwr_M = 78;
        p.gwr_delta = 1;
        p.gwr_beta = 4;
        p.N1 = 0.05;
        p.small_gadget_coeff = 10;
        p.dbl_gadget_coeff = 10;
        p.tree_order_cap = 16;
        p.lambda = 16;
        p.mu = 8;
        p.gc_lambda = 16;
        p.gc_mu = 8;
        p.min_two_mu = 2;
        p.gwr_34_coeff = 0.5;
        p.gc_a_frac = 0.5;
        p.gc_b_frac = 0.75;
        p.N2 = 40;
        p.N3_connected = 40;
        p.N3_partition = 40;
        p.N3_main = 40;
        p.exp_main = 1;
        p.exp_partition = 1;
        p.exp_connectivity = 2;
        p.exp_join_r = 1;
        p.exp_len = 1;
        p.refuse_oversized = false;
        return p;
    }

    nlohmann::json to_json() const {
        return nlohmann::json{
            {"name", name},
            {"slack", slack},
            {"exact_subset_limit", exact_subset_limit},
            {"search_nodes", search_nodes},
            {"check_samples", check_samples},
            {"rotation_frontier", rotation_frontier},
            {"chord_passes", chord_passes},
            {"small_M", small_M},
            {"small_delta", small_delta},
            {"small_beta", small_beta},
            {"dbl_M", dbl_M},
            {"dbl_delta", dbl_delta},
            {"dbl_beta", dbl_beta},
            {"gwr_M", gwr_M},
            {"gwr_delta", gwr_delta},
            {"gwr_beta", gwr_beta},
            {"N1", N1},
            {"small_gadget_coeff", small_gadget_coeff},
            {"dbl_gadget_coeff", dbl_gadget_coeff},
            {"tree_order_cap", tree_order_cap},
            {"lambda", lambda},
            {"mu", mu},
            {"gc_lambda", gc_lambda},
            {"gc_mu", gc_mu},
            {"min_two_mu", min_two_mu},
            {"gwr_34_coeff", gwr_34_coeff},
            {"gc_a_frac", gc_a_frac},
            {"gc_b_frac", gc_b_frac},
            {"N2", N2},
            {"N3_connected", N3_connected},
            {"N3_partition", N3_partition},
            {"N3_main", N3_main},
            {"conn_graph_coeff", conn_graph_coeff},
            {"exp_main", exp_main},
            {"exp_partition", exp_partition},
            {"exp_connectivity", exp_connectivity},
            {"exp_join_r", exp_join_r},
            {"exp_len", exp_len},
            {"refuse_oversized", refuse_oversized},
        };
    }

    static ConstantsProfile from_json(const nlohmann::json& j) {
        ConstantsProfile p;
        std::string base = j.value("base", j.value("name", std::string("desk")));
        if (base == "paper") p = paper();
        else if (base == "desk") p = desk();
        else throw std::runtime_error("profile: unknown base '" + base + "'");
        p.name = j.value("name", base);
        auto num = [&](const char* key, double& slot) {
            if (j.contains(key)) slot = j.at(key).get<double>();
        };
        auto inum = [&](const char* key, auto& slot) {
            if (j.contains(key)) slot = j.at(key).template get<long long>();
        };
        num("slack", p.slack);
        if (j.contains("exact_subset_limit")) p.exact_subset_limit = j.at("exact_subset_limit").get<int>();
        inum("search_nodes", p.search_nodes);
        inum("check_samples", p.check_samples);
        inum("rotation_frontier", p.rotation_frontier);
        if (j.contains("chord_passes")) p.chord_passes = j.at("chord_passes").get<int>();
        num("small_M", p.small_M);
        num("small_delta", p.small_delta);
        num("small_beta", p.small_beta);
        num("dbl_M", p.dbl_M);
        num("dbl_delta", p.dbl_delta);
        num("dbl_beta", p.dbl_beta);
        num("gwr_M", p.gwr_M);
        num("gwr_delta", p.gwr_delta);
        num("gwr_beta", p.gwr_beta);
        num("N1", p.N1);
        num("small_gadget_coeff", p.small_gadget_coeff);
        num("dbl_gadget_coeff", p.dbl_gadget_coeff);
        inum("tree_order_cap", p.tree_order_cap);
        num("lambda", p.lambda);
        num("mu", p.mu);
        num("gc_lambda", p.gc_lambda);
        num("gc_mu", p.gc_mu);
        num("min_two_mu", p.min_two_mu);
        num("gwr_34_coeff", p.gwr_34_coeff);
        num("gc_a_frac", p.gc_a_frac);
        num("gc_b_frac", p.gc_b_frac);
        num("N2", p.N2);
        num("N3_connected", p.N3_connected);
        num("N3_partition", p.N3_partition);
        num("N3_main", p.N3_main);
        num("conn_graph_coeff", p.conn_graph_coeff);
        num("exp_main", p.exp_main);
        num("exp_partition", p.exp_partition);
        num("exp_connectivity", p.exp_connectivity);
        num("exp_join_r", p.exp_join_r);
        num("exp_len", p.exp_len);
        if (j.contains("refuse_oversized")) p.refuse_oversized = j.at("refuse_oversized").get<bool>();
        return p;
    }

    // accepts "paper", "desk", or "file:<path>"
    static ConstantsProfile named(const std::string& which) {
        if (which == "paper") return paper();
        if (which == "desk") return desk();
        if (which.rfind("file:", 0) == 0) {
            std::ifstream in(which.substr(5));
            if (!in) throw std::runtime_error("profile: cannot open " + which.substr(5));
            nlohmann::json j;
            in >> j;
            return from_json(j);
        }
        throw std::runtime_error("profile: expected paper|desk|file:<path>, got '" + which + "'");
    }
};

// ceiling with the profile's uniform slack already applied
inline long long slacked(double bound, const ConstantsProfile& p) {
    return static_cast<long long>(std::ceil(bound + p.slack));
}

inline long long ceil_ll(double x) { return static_cast<long long>(std::ceil(x)); }

inline double log2_of(double x) { return std::log2(x); }

} // namespace ramsey
