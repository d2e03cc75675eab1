#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace colocal::detail {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), std::uint64_t{0});
    }

    std::uint64_t find(std::uint64_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::uint64_t a, std::uint64_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
        return true;
    }

private:
    std::vector<std::uint64_t> parent_;
    std::vector<std::uint8_t> rank_;
};

}  // namespace colocal::detail
