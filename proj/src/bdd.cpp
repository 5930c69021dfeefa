#include "vtsynth/bdd.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace vtsynth {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("model count exceeds 64 bits");
    return r;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("model count exceeds 64 bits");
    return r;
}

// c * 2^k, where an empty count stays empty however many free variables follow.
std::uint64_t shifted(std::uint64_t c, std::uint32_t k) {
    if (c == 0) return 0;
    if (k >= 64) throw std::overflow_error("model count exceeds 64 bits");
    return checked_mul(c, std::uint64_t{1} << k);
}

}  // namespace

std::size_t Bdd::TripleHash::operator()(const std::tuple<std::uint32_t, Node, Node>& t) const noexcept {
    std::uint64_t h = std::get<0>(t);
    h = h * 0x9e3779b97f4a7c15ULL + std::get<1>(t);
    h = h * 0x9e3779b97f4a7c15ULL + std::get<2>(t);
    return static_cast<std::size_t>(h ^ (h >> 29));
}

Bdd::Bdd(std::uint32_t num_vars) : num_vars_(num_vars) {
    nodes_.push_back({num_vars, kFalse, kFalse});
    nodes_.push_back({num_vars, kTrue, kTrue});
}

Bdd::Node Bdd::make(std::uint32_t var, Node low, Node high) {
    if (low == high) return low;
    auto key = std::make_tuple(var, low, high);
    if (auto it = unique_.find(key); it != unique_.end()) return it->second;
    Node id = static_cast<Node>(nodes_.size());
    nodes_.push_back({var, low, high});
    unique_.emplace(key, id);
    return id;
}

Bdd::Node Bdd::var(std::uint32_t index) {
    if (index >= num_vars_) throw std::out_of_range("bdd variable index out of range");
    return make(index, kFalse, kTrue);
}

Bdd::Node Bdd::nvar(std::uint32_t index) {
    if (index >= num_vars_) throw std::out_of_range("bdd variable index out of range");
    return make(index, kTrue, kFalse);
}

Bdd::Node Bdd::ite(Node f, Node g, Node h) {
    if (f == kTrue) return g;
    if (f == kFalse) return h;
    if (g == h) return g;
    if (g == kTrue && h == kFalse) return f;

    auto key = std::make_tuple(f, g, h);
    if (auto it = ite_cache_.find(key); it != ite_cache_.end()) return it->second;

    std::uint32_t top = std::min({var_of(f), var_of(g), var_of(h)});
    auto cofactor = [&](Node n, bool branch) {
        if (var_of(n) != top) return n;
        return branch ? high(n) : low(n);
    };
    Node lo = ite(cofactor(f, false), cofactor(g, false), cofactor(h, false));
    Node hi = ite(cofactor(f, true), cofactor(g, true), cofactor(h, true));
    Node r = make(top, lo, hi);
    ite_cache_.emplace(key, r);
    return r;
}

Bdd::Node Bdd::land(Node a, Node b) { return ite(a, b, kFalse); }
Bdd::Node Bdd::lor(Node a, Node b) { return ite(a, kTrue, b); }
Bdd::Node Bdd::lnot(Node a) { return ite(a, kFalse, kTrue); }

bool Bdd::eval(Node n, const std::vector<bool>& assignment) const {
    while (!is_terminal(n)) n = assignment[var_of(n)] ? high(n) : low(n);
    return n == kTrue;
}

// Count over the variables var_of(n) .. num_vars-1.
std::uint64_t Bdd::count_below(Node n) {
    if (n == kFalse) return 0;
    if (n == kTrue) return 1;
    if (auto it = count_cache_.find(n); it != count_cache_.end()) return it->second;
    std::uint32_t v = var_of(n);
    std::uint64_t lo = shifted(count_below(low(n)), var_of(low(n)) - v - 1);
    std::uint64_t hi = shifted(count_below(high(n)), var_of(high(n)) - v - 1);
    std::uint64_t r = checked_add(lo, hi);
    count_cache_.emplace(n, r);
    return r;
}

std::uint64_t Bdd::count(Node n) { return shifted(count_below(n), var_of(n)); }

std::vector<bool> Bdd::unrank(Node n, std::uint64_t rank) {
    if (rank >= count(n)) throw std::out_of_range("rank exceeds model count");
    std::vector<bool> out(num_vars_, false);
    std::uint32_t v = 0;
    while (v < num_vars_) {
        if (var_of(n) > v) {
            // Free variable: both branches lead to n with equal weight.
            std::uint64_t half = shifted(count_below(n), var_of(n) - v - 1);
            if (rank >= half) {
                out[v] = true;
                rank -= half;
            }
            ++v;
            continue;
        }
        std::uint64_t lo_weight = shifted(count_below(low(n)), var_of(low(n)) - v - 1);
        if (rank < lo_weight) {
            n = low(n);
        } else {
            rank -= lo_weight;
            out[v] = true;
            n = high(n);
        }
        ++v;
    }
    return out;
}

std::vector<std::vector<bool>> Bdd::enumerate(Node n, std::size_t limit) {
    std::vector<std::vector<bool>> out;
    std::uint64_t total = count(n);
    for (std::uint64_t r = 0; r < total && out.size() < limit; ++r) out.push_back(unrank(n, r));
    return out;
}

std::vector<Bdd::Cube> Bdd::paths(Node n) const {
    std::vector<Cube> out;
    Cube current;
    auto walk = [&](auto&& self, Node m) -> void {
        if (m == kFalse) return;
        if (m == kTrue) {
            out.push_back(current);
            return;
        }
        current.literals.emplace_back(var_of(m), false);
        self(self, low(m));
        current.literals.back().second = true;
        self(self, high(m));
        current.literals.pop_back();
    };
    walk(walk, n);
    return out;
}

}  // namespace vtsynth
