#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <unordered_map>
#include <vector>

#include "local_ring.hpp"
#include "smith.hpp"

namespace hdx {

/// A free rank-1 submodule of O_r^3 in canonical form: a unimodular vector
/// whose first unit coordinate (the pivot) is scaled to 1.  Two canonical
/// lines are equal iff they generate the same submodule.
struct CanonicalLine {
    std::array<relem, 3> v{};
    int pivot = 0;
    bool operator==(const CanonicalLine& o) const { return v == o.v; }
    bool operator<(const CanonicalLine& o) const { return v < o.v; }
};

/// A free rank-2 submodule represented by a unimodular functional phi,
/// normalized the same way; the plane is ker(phi).
struct CanonicalPlane {
    std::array<relem, 3> phi{};
    int pivot = 0;
    bool operator==(const CanonicalPlane& o) const { return phi == o.phi; }
    bool operator<(const CanonicalPlane& o) const { return phi < o.phi; }
};

/// Canonicalize a unimodular vector: locate the first unit coordinate and
/// scale so it equals 1.  Throws if no coordinate is a unit.
inline CanonicalLine canonicalize_line(const LocalRing& R, std::array<relem, 3> v) {
    int piv = -1;
    for (int i = 0; i < 3; ++i)
        if (R.is_unit(v[i])) { piv = i; break; }
    if (piv < 0) throw std::domain_error("canonicalize_line: vector is not unimodular");
    relem s = R.inv(v[piv]);
    for (auto& x : v) x = R.mul(x, s);
    return CanonicalLine{v, piv};
}

inline CanonicalPlane canonicalize_plane(const LocalRing& R, std::array<relem, 3> phi) {
    auto l = canonicalize_line(R, phi);
    return CanonicalPlane{l.v, l.pivot};
}

namespace detail {

/// Enumerates all canonical unimodular triples in deterministic order:
/// pivot index first, then lexicographic coordinates.
inline std::vector<std::array<relem, 3>> enumerate_unimodular_canonical(const LocalRing& R) {
    std::vector<std::array<relem, 3>> out;
    const u64 n = R.size();
    std::vector<relem> nonunits;
    for (relem x = 0; x < n; ++x)
        if (!R.is_unit(x)) nonunits.push_back(x);
    for (int piv = 0; piv < 3; ++piv) {
        // coords before the pivot are non-units, pivot is 1, the rest are free
        std::array<relem, 3> v{};
        v[piv] = 1;
        if (piv == 0) {
            for (relem b = 0; b < n; ++b)
                for (relem c = 0; c < n; ++c)
                    out.push_back({1, b, c});
        } else if (piv == 1) {
            for (relem a : nonunits)
                for (relem c = 0; c < n; ++c)
                    out.push_back({a, 1, c});
        } else {
            for (relem a : nonunits)
                for (relem b : nonunits)
                    out.push_back({a, b, 1});
        }
    }
    return out;
}

} // namespace detail

/// All free rank-1 submodules of O_r^3, in deterministic order.
/// Count: (q^2+q+1) q^(2(r-1)).
inline std::vector<CanonicalLine> enumerate_lines(const LocalRing& R) {
    std::vector<CanonicalLine> out;
    for (auto& v : detail::enumerate_unimodular_canonical(R)) {
        int piv = 0;
        while (!R.is_unit(v[piv])) ++piv;
        out.push_back(CanonicalLine{v, piv});
    }
    return out;
}

/// All free rank-2 submodules, as kernels of canonical functionals.
inline std::vector<CanonicalPlane> enumerate_planes(const LocalRing& R) {
    std::vector<CanonicalPlane> out;
    for (auto& v : detail::enumerate_unimodular_canonical(R)) {
        int piv = 0;
        while (!R.is_unit(v[piv])) ++piv;
        out.push_back(CanonicalPlane{v, piv});
    }
    return out;
}

inline relem dot3(const LocalRing& R, const std::array<relem, 3>& a, const std::array<relem, 3>& b) {
    relem s = R.mul(a[0], b[0]);
    s = R.add(s, R.mul(a[1], b[1]));
    s = R.add(s, R.mul(a[2], b[2]));
    return s;
}

/// Expected |F_r^1| = (q^2+q+1) q^(2(r-1)).
inline u64 lines_count_formula(u64 q, unsigned r) {
    return (q * q + q + 1) * ipow(q, 2 * (r - 1));
}

/// Expected bipartite degree (q+1) q^(r-1).
inline u64 pfr_degree_formula(u64 q, unsigned r) {
    return (q + 1) * ipow(q, r - 1);
}

/**
 * The free projective plane P^2_fr(O_r) as a bipartite incidence graph.
 * Vertices 0..n-1 are lines (sorted canonical order), n..2n-1 are planes;
 * u ~ v iff phi(v) = 0 in O_r.
 */
struct FreeProjPlaneGraph {
    LocalRing ring;
    std::vector<CanonicalLine> lines;
    std::vector<CanonicalPlane> planes;
    std::vector<std::vector<u32>> adj; // size 2n, global vertex ids

    u64 n_lines() const { return lines.size(); }
    u64 n_vertices() const { return adj.size(); }
};

inline FreeProjPlaneGraph build_pfr2(const LocalRing& R) {
    FreeProjPlaneGraph G{R, enumerate_lines(R), enumerate_planes(R), {}};
    const u32 n = static_cast<u32>(G.lines.size());
    G.adj.assign(2 * std::size_t(n), {});
    for (u32 j = 0; j < n; ++j) {
        const auto& phi = G.planes[j].phi;
        for (u32 i = 0; i < n; ++i) {
            if (dot3(R, phi, G.lines[i].v) == 0) {
                G.adj[i].push_back(n + j);
                G.adj[n + j].push_back(i);
            }
        }
    }
    return G;
}

/**
 * The ultrametric Delta on lines: r minus the largest i such that the two
 * lines agree as submodules modulo pi^i.  Both arguments must be canonical.
 */
inline unsigned delta(const LocalRing& R, const CanonicalLine& u, const CanonicalLine& w) {
    const unsigned r = R.r();
    if (u.pivot != w.pivot) return r;
    unsigned agree = 0;
    for (unsigned i = r; i >= 1; --i) {
        bool eq = true;
        for (int c = 0; c < 3; ++c)
            if (R.reduce(u.v[c], i) != R.reduce(w.v[c], i)) { eq = false; break; }
        if (eq) { agree = i; break; }
    }
    return r - agree;
}

// ---------------------------------------------------------------------------
// Free flag complexes P^d_fr(O_r) for small d.
// ---------------------------------------------------------------------------

/// A free submodule of O_r^(d+1) given by a reduced-echelon basis (each basis
/// vector has a unit pivot normalized to 1, pivot rows strictly increasing and
/// cleared in the other basis vectors).  Canonical per submodule.
struct FreeModule {
    unsigned ambient = 0; // d+1
    std::vector<std::vector<relem>> basis;
    bool operator==(const FreeModule& o) const { return basis == o.basis; }
    bool operator<(const FreeModule& o) const { return basis < o.basis; }
    unsigned rank() const { return static_cast<unsigned>(basis.size()); }
};

/// Reduced echelon form of a set of generators of a *free* submodule
/// (every generator set given here spans freely, pivots are units).
inline FreeModule echelonize_free(const LocalRing& R, unsigned ambient, std::vector<std::vector<relem>> gens) {
    std::vector<std::vector<relem>> basis;
    auto first_unit = [&](const std::vector<relem>& x) {
        for (unsigned i = 0; i < ambient; ++i)
            if (R.is_unit(x[i])) return int(i);
        return -1;
    };
    for (auto g : gens) {
        for (auto& b : basis) {
            unsigned bp = unsigned(first_unit(b));
            relem c = g[bp];
            if (c != 0)
                for (unsigned i = 0; i < ambient; ++i) g[i] = R.sub(g[i], R.mul(c, b[i]));
        }
        int piv = first_unit(g);
        if (piv < 0) continue; // dependent generator
        relem s = R.inv(g[unsigned(piv)]);
        for (auto& x : g) x = R.mul(x, s);
        for (auto& b : basis) {
            relem c = b[unsigned(piv)];
            if (c != 0)
                for (unsigned i = 0; i < ambient; ++i) b[i] = R.sub(b[i], R.mul(c, g[i]));
        }
        basis.push_back(std::move(g));
    }
    // sort rows by pivot position
    std::sort(basis.begin(), basis.end(), [&](const auto& a, const auto& b) {
        auto pv = [&](const std::vector<relem>& x) {
            for (unsigned i = 0; i < ambient; ++i)
                if (R.is_unit(x[i])) return i;
            return ambient;
        };
        return pv(a) < pv(b);
    });
    return FreeModule{ambient, std::move(basis)};
}

/// Membership test x in M (M in reduced echelon form, free).
inline bool free_module_contains(const LocalRing& R, const FreeModule& M, std::vector<relem> x) {
    for (const auto& b : M.basis) {
        unsigned bp = 0;
        for (unsigned i = 0; i < M.ambient; ++i)
            if (R.is_unit(b[i])) { bp = i; break; }
        relem c = x[bp];
        if (c != 0)
            for (unsigned i = 0; i < M.ambient; ++i) x[i] = R.sub(x[i], R.mul(c, b[i]));
    }
    for (auto v : x)
        if (v != 0) return false;
    return true;
}

/// The simplicial complex of free flags in O_r^(d+1): vertices are the free
/// submodules of rank 1..d, i-cells are the free flags of length i+1.
struct FreeFlagComplex {
    unsigned d = 0;
    std::vector<FreeModule> vertices;              // all proper free submodules
    std::vector<std::vector<u32>> cells_by_dim;    // flattened: dim k cells as (k+1)-tuples of vertex ids
    std::vector<unsigned> cell_sizes;              // arity per dim (k+1)

    std::size_t n_cells(unsigned dim) const {
        if (dim >= cell_sizes.size() || cell_sizes[dim] == 0) return 0;
        return cells_by_dim[dim].size() / cell_sizes[dim];
    }
};

/// Enumerates all free submodules of O_r^n of every rank 1..n-1.
/// Desk-scale only (the count grows like q^(2(r-1)) per rank for n=3).
std::vector<FreeModule> enumerate_free_submodules(const LocalRing& R, unsigned n);

inline std::vector<FreeModule> enumerate_free_submodules(const LocalRing& R, unsigned n, unsigned rank) {
    // all reduced-echelon bases: choose pivot positions p_1<...<p_rank, free
    // entries: in row of pivot_j, columns > p_j excluding other pivots: any
    // element; columns < p_j: non-units.  This parameterization is exactly the
    // reduced echelon normal form, hence hits every free submodule once.
    std::vector<FreeModule> out;
    std::vector<unsigned> piv(rank);
    std::vector<relem> nonunits, all;
    for (relem x = 0; x < R.size(); ++x) {
        all.push_back(x);
        if (!R.is_unit(x)) nonunits.push_back(x);
    }
    // iterate pivot combinations
    std::vector<unsigned> idx(rank);
    for (unsigned i = 0; i < rank; ++i) idx[i] = i;
    auto next_comb = [&]() {
        int i = int(rank) - 1;
        while (i >= 0 && idx[i] == n - rank + i) --i;
        if (i < 0) return false;
        ++idx[i];
        for (unsigned j = i + 1; j < rank; ++j) idx[j] = idx[j - 1] + 1;
        return true;
    };
    do {
        // free positions: (row j, col c) with c not a pivot column and c > ? :
        // reduced echelon over the local ring: in row j, col c < piv_j must be
        // non-unit; col c > piv_j arbitrary; pivot columns of other rows are 0.
        std::vector<std::pair<unsigned, unsigned>> free_pos; // (row, col)
        std::vector<bool> is_piv(n, false);
        for (unsigned j = 0; j < rank; ++j) is_piv[idx[j]] = true;
        for (unsigned j = 0; j < rank; ++j)
            for (unsigned c = 0; c < n; ++c)
                if (!is_piv[c]) free_pos.emplace_back(j, c);
        // count combinations and enumerate via mixed radix
        std::vector<const std::vector<relem>*> domains;
        for (auto [row, col] : free_pos)
            domains.push_back(col < idx[row] ? &nonunits : &all);
        std::vector<std::size_t> counter(free_pos.size(), 0);
        bool done = false;
        while (!done) {
            std::vector<std::vector<relem>> basis(rank, std::vector<relem>(n, 0));
            for (unsigned j = 0; j < rank; ++j) basis[j][idx[j]] = 1;
            for (std::size_t t = 0; t < free_pos.size(); ++t)
                basis[free_pos[t].first][free_pos[t].second] = (*domains[t])[counter[t]];
            out.push_back(FreeModule{n, std::move(basis)});
            // increment
            std::size_t t = 0;
            for (; t < counter.size(); ++t) {
                if (++counter[t] < domains[t]->size()) break;
                counter[t] = 0;
            }
            if (t == counter.size()) done = true;
            if (free_pos.empty()) done = true;
        }
    } while (next_comb());
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<FreeModule> enumerate_free_submodules(const LocalRing& R, unsigned n) {
    std::vector<FreeModule> out;
    for (unsigned rank = 1; rank < n; ++rank) {
        auto part = enumerate_free_submodules(R, n, rank);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

/// Containment M <= N for free modules in echelon form.
inline bool free_module_subset(const LocalRing& R, const FreeModule& M, const FreeModule& N) {
    for (const auto& b : M.basis)
        if (!free_module_contains(R, N, b)) return false;
    return true;
}

inline FreeFlagComplex build_pfr_d(const LocalRing& R, unsigned d) {
    if (d < 2 || d > 3) throw std::invalid_argument("build_pfr_d: d must be 2 or 3");
    const unsigned n = d + 1;
    FreeFlagComplex X;
    X.d = d;
    X.vertices = enumerate_free_submodules(R, n);
    const u32 V = static_cast<u32>(X.vertices.size());
    // adjacency = strict containment with distinct rank
    std::vector<std::vector<u32>> contains_of(V); // j such that vertices[i] < vertices[j]
    for (u32 i = 0; i < V; ++i)
        for (u32 j = 0; j < V; ++j) {
            if (i == j) continue;
            if (X.vertices[i].rank() < X.vertices[j].rank() && free_module_subset(R, X.vertices[i], X.vertices[j]))
                contains_of[i].push_back(j);
        }
    X.cells_by_dim.assign(d, {});
    X.cell_sizes.assign(d, 0);
    X.cell_sizes[0] = 1;
    for (u32 i = 0; i < V; ++i) X.cells_by_dim[0].push_back(i);
    if (d >= 2) {
        X.cell_sizes[1] = 2;
        for (u32 i = 0; i < V; ++i)
            for (u32 j : contains_of[i]) {
                X.cells_by_dim[1].push_back(i);
                X.cells_by_dim[1].push_back(j);
            }
    }
    if (d == 3) {
        X.cell_sizes[2] = 3;
        for (u32 i = 0; i < V; ++i)
            for (u32 j : contains_of[i])
                for (u32 k : contains_of[j]) {
                    if (free_module_subset(R, X.vertices[i], X.vertices[k])) {
                        X.cells_by_dim[2].push_back(i);
                        X.cells_by_dim[2].push_back(j);
                        X.cells_by_dim[2].push_back(k);
                    }
                }
    }
    return X;
}

} // namespace hdx
