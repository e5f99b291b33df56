#pragma once

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "graph.hpp"
#include "nice_decomposition.hpp"
#include "oracle.hpp"
#include "subset_convolution.hpp"

namespace twmatch {

// Maximum matching whose saturated vertices span at least c components.
// Every saturated bag vertex carries a component color from 1..c besides its
// matching state; an introduced edge between saturated endpoints forces equal
// colors, so components end up monochromatic, and a bitmask records which
// colors were ever used. Demanding all c colors at the root therefore forces
// at least c components, while repeated colors keep extra components legal.
// Table values count saturated vertices, so the winning root entry holds
// twice the optimum; a missing entry means no matching qualifies at all.
//
// Per-vertex digits in base 2c+1: 0 free; for color j, 2j-1 when the
// matching edge was already introduced and 2j while it is still due.

struct DiscKey {
    std::uint64_t dsf = 0;   // packed state digits over the bag
    std::uint32_t used = 0;  // bit j-1: some saturated vertex took color j
    bool operator==(const DiscKey&) const = default;
};

struct DiscKeyHash {
    std::size_t operator()(const DiscKey& k) const {
        std::uint64_t x = k.dsf * 0x9E3779B97F4A7C15ull ^ (std::uint64_t{k.used} << 17);
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ull;
        x ^= x >> 27;
        x *= 0x94D049BB133111EBull;
        x ^= x >> 31;
        return static_cast<std::size_t>(x);
    }
};

using DiscTable = std::unordered_map<DiscKey, std::int64_t, DiscKeyHash>;

namespace detail {

inline void disc_push(DiscTable& t, const DiscKey& k, std::int64_t val) {
    auto [it, fresh] = t.try_emplace(k, val);
    if (!fresh && it->second < val) it->second = val;
}

inline DiscTable disc_introduce(const DiscTable& child, const std::vector<int>& bag,
                                int v, int c, const std::vector<std::uint64_t>& pw) {
    const std::uint64_t below = pw[bag_position(bag, v)];
    const std::uint64_t base = 2 * static_cast<std::uint64_t>(c) + 1;
    DiscTable out;
    out.reserve(child.size() * (c + 1));
    for (const auto& [k, val] : child) {
        const std::uint64_t dsf = k.dsf % below + k.dsf / below * (below * base);
        disc_push(out, DiscKey{dsf, k.used}, val);
        // entering saturated means picking a component color now; the color
        // may be fresh or already in use, either way it lands in the mask
        for (int j = 1; j <= c; ++j)
            disc_push(out,
                      DiscKey{dsf + 2 * static_cast<std::uint64_t>(j) * below,
                              k.used | (std::uint32_t{1} << (j - 1))},
                      val + 1);
    }
    return out;
}

inline DiscTable disc_introduce_edge(const DiscTable& child, const std::vector<int>& bag,
                                     int u, int v,
                                     const std::vector<std::uint64_t>& pw) {
    const std::uint64_t pu = pw[bag_position(bag, u)];
    const std::uint64_t pv = pw[bag_position(bag, v)];
    const std::uint64_t base = pw[1];
    DiscTable out;
    out.reserve(child.size());
    for (const auto& [k, val] : child) {
        const int du = static_cast<int>(k.dsf / pu % base);
        const int dv = static_cast<int>(k.dsf / pv % base);
        if (du == 0 || dv == 0) {
            disc_push(out, k, val);
            continue;
        }
        if ((du + 1) / 2 != (dv + 1) / 2) continue;  // different components touch
        disc_push(out, k, val);
        if (du % 2 == 0 && dv % 2 == 0)
            // both were waiting for exactly this edge; take it into M
            disc_push(out, DiscKey{k.dsf - pu - pv, k.used}, val);
    }
    return out;
}

inline DiscTable disc_forget(const DiscTable& child, const std::vector<int>& child_bag,
                             int u, const std::vector<std::uint64_t>& pw) {
    const std::uint64_t below = pw[bag_position(child_bag, u)];
    const std::uint64_t base = pw[1];
    DiscTable out;
    out.reserve(child.size());
    for (const auto& [k, val] : child) {
        const int dig = static_cast<int>(k.dsf / below % base);
        if (dig != 0 && dig % 2 == 0) continue;  // still waiting: dead end
        disc_push(out, DiscKey{k.dsf % below + k.dsf / (below * base) * below, k.used},
                  val);
    }
    return out;
}

inline DiscTable disc_join(const DiscTable& left, const DiscTable& right,
                           const std::vector<int>& bag,
                           const std::vector<std::uint64_t>& pw, JoinMode mode) {
    const int p = static_cast<int>(bag.size());
    const std::uint64_t base = pw[1];

    // Two keys combine when colors and the free pattern agree and no vertex
    // has its matching edge counted twice. Raising every seen digit by one
    // canonicalizes a key to its all-due form, which is the bucket signature.
    struct Item {
        std::uint64_t seen_pw = 0;
        std::uint32_t seen = 0, used = 0;
        std::int64_t val = 0;
    };
    auto bucket = [&](const DiscTable& t) {
        std::unordered_map<std::uint64_t, std::vector<Item>> out;
        for (const auto& [k, val] : t) {
            std::uint64_t seen_pw = 0, rest = k.dsf;
            std::uint32_t seen = 0;
            for (int pos = 0; pos < p; ++pos, rest /= base) {
                const int dig = static_cast<int>(rest % base);
                if (dig != 0 && dig % 2 == 1) {
                    seen |= std::uint32_t{1} << pos;
                    seen_pw += pw[pos];
                }
            }
            out[k.dsf + seen_pw].push_back(Item{seen_pw, seen, k.used, val});
        }
        return out;
    };
    const auto bl = bucket(left);
    const auto br = bucket(right);

    DiscTable out;
    for (const auto& [sigma, litems] : bl) {
        const auto rit = br.find(sigma);
        if (rit == br.end()) continue;
        const auto& ritems = rit->second;

        std::vector<int> upos;
        std::uint64_t rest = sigma;
        for (int pos = 0; pos < p; ++pos, rest /= base)
            if (rest % base != 0) upos.push_back(pos);
        const int u = static_cast<int>(upos.size());
        const std::int64_t sat = u;  // shared saturated vertices counted twice

        bool use_conv = false;
        if (mode == JoinMode::Convolution && u <= 20) {
            std::unordered_set<std::uint32_t> ga, gb;
            for (const Item& it : litems) ga.insert(it.used);
            for (const Item& it : ritems) gb.insert(it.used);
            const double conv_cost = static_cast<double>(ga.size()) *
                                     static_cast<double>(gb.size()) * (u + 2) *
                                     static_cast<double>(std::uint64_t{1} << u);
            const double pair_cost = static_cast<double>(litems.size()) *
                                     static_cast<double>(ritems.size());
            use_conv = conv_cost < pair_cost;
        }

        if (!use_conv) {
            for (const Item& a : litems)
                for (const Item& b : ritems) {
                    if (a.seen & b.seen) continue;
                    disc_push(out,
                              DiscKey{sigma - a.seen_pw - b.seen_pw, a.used | b.used},
                              a.val + b.val - sat);
                }
            continue;
        }

        auto group = [&](const std::vector<Item>& items) {
            std::unordered_map<std::uint32_t, SetFunction> gs;
            for (const Item& it : items) {
                auto [slot, fresh] = gs.try_emplace(it.used, SetFunction::max_sum(u));
                (void)fresh;
                std::uint32_t cmask = 0;
                for (int j = 0; j < u; ++j)
                    if (it.seen >> upos[j] & 1) cmask |= std::uint32_t{1} << j;
                std::int64_t& slotval = slot->second.vals[cmask];
                if (slotval < it.val) slotval = it.val;
            }
            return gs;
        };
        const auto gl = group(litems);
        const auto gr = group(ritems);
        std::vector<std::uint64_t> bit_pw(u);
        for (int j = 0; j < u; ++j) bit_pw[j] = pw[upos[j]];
        for (const auto& [au, fa] : gl)
            for (const auto& [bu, fb] : gr) {
                const SetFunction h = convolve(fa, fb);
                const std::uint32_t used = au | bu;
                for (std::size_t mask = 0; mask < h.vals.size(); ++mask) {
                    if (h.vals[mask] == NEG_INF) continue;
                    std::uint64_t sub = 0;
                    for (std::uint32_t mm = static_cast<std::uint32_t>(mask); mm;
                         mm &= mm - 1)
                        sub += bit_pw[__builtin_ctz(mm)];
                    disc_push(out, DiscKey{sigma - sub, used}, h.vals[mask] - sat);
                }
            }
    }
    return out;
}

}  // namespace detail

struct CdiscResult {
    bool yes = false;
    std::int64_t saturated = -1;  // twice the optimum, or -1 when nothing qualifies

    std::int64_t matching_size() const { return saturated < 0 ? -1 : saturated / 2; }
};

// Largest matching spanning at least c >= 2 components, and whether it
// reaches ell edges. Exact and deterministic.
inline CdiscResult solve_cdisc(const Graph& g, const NiceDecomposition& nd, int ell,
                               int c, JoinMode mode = JoinMode::Naive) {
    assert(ell >= 0);
    if (c < 2) throw std::invalid_argument("solve_cdisc: needs at least two components");
    if (c > 16) throw std::invalid_argument("solve_cdisc: component count too large");
    assert(validate_nice(g, nd).empty());
    if (2 * c > g.n) return {};
    const std::uint64_t base = 2 * static_cast<std::uint64_t>(c) + 1;
    std::vector<std::uint64_t> pw(nd.width() + 2, 1);
    for (std::size_t i = 1; i < pw.size(); ++i) {
        if (pw[i - 1] > ~std::uint64_t{0} / base)
            throw std::invalid_argument("solve_cdisc: bag too wide for this many colors");
        pw[i] = pw[i - 1] * base;
    }
    std::vector<DiscTable> tab(nd.nodes.size());
    for (std::size_t i = 0; i < nd.nodes.size(); ++i) {
        const NiceNode& node = nd.nodes[i];
        switch (node.kind) {
            case NodeKind::Leaf:
                tab[i] = DiscTable{{DiscKey{}, 0}};
                break;
            case NodeKind::IntroduceVertex:
                tab[i] = detail::disc_introduce(tab[node.child], node.bag, node.u, c, pw);
                tab[node.child] = DiscTable{};
                break;
            case NodeKind::IntroduceEdge:
                tab[i] = detail::disc_introduce_edge(tab[node.child], node.bag, node.u,
                                                     node.v, pw);
                tab[node.child] = DiscTable{};
                break;
            case NodeKind::Forget:
                tab[i] = detail::disc_forget(tab[node.child], nd.nodes[node.child].bag,
                                             node.u, pw);
                tab[node.child] = DiscTable{};
                break;
            case NodeKind::Join:
                tab[i] = detail::disc_join(tab[node.child], tab[node.child2], node.bag,
                                           pw, mode);
                tab[node.child] = DiscTable{};
                tab[node.child2] = DiscTable{};
                break;
        }
    }
    const DiscTable& root = tab[nd.root()];
    const auto hit = root.find(DiscKey{0, (std::uint32_t{1} << c) - 1});
    if (hit == root.end()) return {};
    return CdiscResult{hit->second >= 2LL * ell, hit->second};
}

// General component threshold c >= 1. One component is just a plain maximum
// matching; the color machinery is pointless there, so small instances go to
// the exhaustive reference instead and larger ones are out of scope.
inline CdiscResult solve_disconnected(const Graph& g, const NiceDecomposition& nd,
                                      int ell, int c, JoinMode mode = JoinMode::Naive) {
    assert(ell >= 0);
    if (c < 1) throw std::invalid_argument("solve_disconnected: needs a positive threshold");
    if (2 * c > g.n) return {};
    if (c >= 2) return solve_cdisc(g, nd, ell, c, mode);
    if (g.n > 16)
        throw std::invalid_argument(
            "solve_disconnected: one component class means plain maximum matching, "
            "only handled exhaustively up to 16 vertices");
    const int mu = brute_matching_numbers(g, 1).mu_discon.at(1);
    if (mu < 0) return {};
    return CdiscResult{mu >= ell, 2LL * mu};
}

}  // namespace twmatch
