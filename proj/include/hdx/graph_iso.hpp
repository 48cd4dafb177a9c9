#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "common.hpp"

namespace hdx {

enum class IsoStatus { isomorphic, non_isomorphic, inconclusive };

struct IsoResult {
    IsoStatus status = IsoStatus::inconclusive;
    std::vector<u32> mapping; // vertex of G1 -> vertex of G2 when isomorphic
    u64 nodes = 0;
};

/**
 * Graph isomorphism by color refinement plus individualization backtracking.
 * The search is exhaustive, so `non_isomorphic` is a certificate; when the
 * node budget runs out the result is `inconclusive` (never reported as
 * non-isomorphic).
 */
class IsoSearch {
public:
    IsoSearch(const std::vector<std::vector<u32>>& g1, const std::vector<std::vector<u32>>& g2,
              std::vector<u32> colors1 = {}, std::vector<u32> colors2 = {}, u64 node_budget = 200000000)
        : g1_(g1), g2_(g2), budget_(node_budget) {
        n_ = u32(g1.size());
        if (colors1.empty()) colors1.assign(g1.size(), 0);
        if (colors2.empty()) colors2.assign(g2.size(), 0);
        c1_ = std::move(colors1);
        c2_ = std::move(colors2);
    }

    IsoResult run() {
        IsoResult res;
        if (g1_.size() != g2_.size()) {
            res.status = IsoStatus::non_isomorphic;
            return res;
        }
        bool out_of_budget = false;
        bool found = search(c1_, c2_, res, out_of_budget);
        res.nodes = nodes_;
        if (found) res.status = IsoStatus::isomorphic;
        else res.status = out_of_budget ? IsoStatus::inconclusive : IsoStatus::non_isomorphic;
        return res;
    }

private:
    // Joint stable color refinement; false when the color class profiles of
    // the two graphs diverge (prune).
    bool refine(std::vector<u32>& a, std::vector<u32>& b) const {
        for (;;) {
            std::map<std::pair<u32, std::vector<u32>>, u32> dict;
            auto signature = [&](const std::vector<std::vector<u32>>& g, const std::vector<u32>& col, u32 v) {
                std::vector<u32> s;
                s.reserve(g[v].size());
                for (u32 w : g[v]) s.push_back(col[w]);
                std::sort(s.begin(), s.end());
                return std::make_pair(col[v], std::move(s));
            };
            std::vector<std::pair<u32, std::vector<u32>>> sa(n_), sb(n_);
            for (u32 v = 0; v < n_; ++v) sa[v] = signature(g1_, a, v);
            for (u32 v = 0; v < n_; ++v) sb[v] = signature(g2_, b, v);
            for (u32 v = 0; v < n_; ++v) dict.emplace(sa[v], 0);
            for (u32 v = 0; v < n_; ++v) dict.emplace(sb[v], 0);
            u32 next = 0;
            for (auto& kv : dict) kv.second = next++;
            std::vector<u32> na(n_), nb(n_);
            std::vector<u32> counta(next, 0), countb(next, 0);
            for (u32 v = 0; v < n_; ++v) { na[v] = dict.at(sa[v]); ++counta[na[v]]; }
            for (u32 v = 0; v < n_; ++v) { nb[v] = dict.at(sb[v]); ++countb[nb[v]]; }
            if (counta != countb) return false;
            // refinement only splits classes, so the partition is stable once
            // the joint color count stops growing
            std::vector<u32> old_vals(a);
            old_vals.insert(old_vals.end(), b.begin(), b.end());
            std::sort(old_vals.begin(), old_vals.end());
            old_vals.erase(std::unique(old_vals.begin(), old_vals.end()), old_vals.end());
            bool stable = (next == old_vals.size());
            a = std::move(na);
            b = std::move(nb);
            if (stable) return true;
        }
    }

    bool verify_mapping(const std::vector<u32>& map) const {
        // bijective map preserving adjacency both ways (degrees already match)
        for (u32 v = 0; v < n_; ++v) {
            if (g1_[v].size() != g2_[map[v]].size()) return false;
            std::vector<u32> img;
            img.reserve(g1_[v].size());
            for (u32 w : g1_[v]) img.push_back(map[w]);
            std::sort(img.begin(), img.end());
            std::vector<u32> tgt(g2_[map[v]]);
            std::sort(tgt.begin(), tgt.end());
            if (img != tgt) return false;
        }
        return true;
    }

    bool search(std::vector<u32> a, std::vector<u32> b, IsoResult& res, bool& out_of_budget) {
        if (++nodes_ > budget_) { out_of_budget = true; return false; }
        if (!refine(a, b)) return false;
        // locate smallest non-singleton class
        u32 maxc = *std::max_element(a.begin(), a.end()) + 1;
        std::vector<u32> count(maxc, 0);
        for (u32 v = 0; v < n_; ++v) ++count[a[v]];
        u32 target = maxc;
        u32 best = UINT32_MAX;
        for (u32 c = 0; c < maxc; ++c)
            if (count[c] >= 2 && count[c] < best) { best = count[c]; target = c; }
        if (target == maxc) {
            // discrete: colors give the mapping
            std::vector<u32> where2(maxc, UINT32_MAX);
            for (u32 v = 0; v < n_; ++v) where2[b[v]] = v;
            std::vector<u32> map(n_);
            for (u32 v = 0; v < n_; ++v) map[v] = where2[a[v]];
            if (verify_mapping(map)) {
                res.mapping = std::move(map);
                return true;
            }
            return false;
        }
        // individualize: fix the first G1 vertex in the class, try all G2 vertices
        u32 u = 0;
        while (a[u] != target) ++u;
        for (u32 v = 0; v < n_; ++v) {
            if (b[v] != target) continue;
            auto a2 = a;
            auto b2 = b;
            a2[u] = maxc;
            b2[v] = maxc;
            if (search(std::move(a2), std::move(b2), res, out_of_budget)) return true;
            if (out_of_budget) return false;
        }
        return false;
    }

    const std::vector<std::vector<u32>>& g1_;
    const std::vector<std::vector<u32>>& g2_;
    std::vector<u32> c1_, c2_;
    u32 n_ = 0;
    u64 budget_;
    u64 nodes_ = 0;
};

inline IsoResult graph_isomorphic(const std::vector<std::vector<u32>>& g1, const std::vector<std::vector<u32>>& g2,
                                  std::vector<u32> colors1 = {}, std::vector<u32> colors2 = {},
                                  u64 node_budget = 200000000) {
    IsoSearch s(g1, g2, std::move(colors1), std::move(colors2), node_budget);
    return s.run();
}

} // namespace hdx
