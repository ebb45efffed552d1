#pragma once

#include <cassert>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace ramsey {

// Fixed-universe dynamic bitset.  All graph/set machinery below runs on these;
// the universe is the vertex range [0, n) of whichever graph is in play.
class VSet {
public:
    VSet() = default;
    explicit VSet(int universe) : n_(universe), w_((universe + 63) / 64, 0) {}

    static VSet full(int universe) {
        VSet s(universe);
        for (int v = 0; v < universe; ++v) s.add(v);
        return s;
    }

    template <typename Container>
    static VSet of(int universe, const Container& vs) {
        VSet s(universe);
        for (int v : vs) s.add(v);
        return s;
    }
    static VSet of(int universe, std::initializer_list<int> vs) {
        VSet s(universe);
        for (int v : vs) s.add(v);
        return s;
    }

    int universe() const { return n_; }

    void add(int v) {
        assert(v >= 0 && v < n_);
        w_[v >> 6] |= std::uint64_t{1} << (v & 63);
    }
    void remove(int v) {
        assert(v >= 0 && v < n_);
        w_[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
    }
    bool contains(int v) const {
        if (v < 0 || v >= n_) return false;
        return (w_[v >> 6] >> (v & 63)) & 1;
    }

    int count() const {
        int c = 0;
        for (auto w : w_) c += __builtin_popcountll(w);
        return c;
    }
    bool empty() const {
        for (auto w : w_)
            if (w) return false;
        return true;
    }

    // first member, or -1
    int first() const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i]) return int(i * 64 + __builtin_ctzll(w_[i]));
        return -1;
    }

    // first member strictly greater than v, or -1
    int next(int v) const {
        int i = (v + 1) >> 6;
        if (v + 1 >= n_ || i >= int(w_.size())) return -1;
        std::uint64_t w = w_[i] & ~((std::uint64_t{1} << ((v + 1) & 63)) - 1);
        while (true) {
            if (w) return int(i * 64 + __builtin_ctzll(w));
            if (++i >= int(w_.size())) return -1;
            w = w_[i];
        }
    }

    std::vector<int> to_vector() const {
        std::vector<int> out;
        out.reserve(count());
        for (int v = first(); v >= 0; v = next(v)) out.push_back(v);
        return out;
    }

    VSet& operator|=(const VSet& o) {
        assert(n_ == o.n_);
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
        return *this;
    }
    VSet& operator&=(const VSet& o) {
        assert(n_ == o.n_);
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
        return *this;
    }
    VSet& operator-=(const VSet& o) {
        assert(n_ == o.n_);
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
        return *this;
    }

    friend VSet operator|(VSet a, const VSet& b) { return a |= b; }
    friend VSet operator&(VSet a, const VSet& b) { return a &= b; }
    friend VSet operator-(VSet a, const VSet& b) { return a -= b; }

    bool intersects(const VSet& o) const {
        assert(n_ == o.n_);
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & o.w_[i]) return true;
        return false;
    }
    bool subset_of(const VSet& o) const {
        assert(n_ == o.n_);
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }

    bool operator==(const VSet& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator!=(const VSet& o) const { return !(*this == o); }

    std::uint64_t hash() const {
        std::uint64_t h = 0x9e3779b97f4a7c15ull ^ std::uint64_t(n_);
        for (auto w : w_) {
            h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }

private:
    int n_ = 0;
    std::vector<std::uint64_t> w_;
};

} // namespace ramsey
