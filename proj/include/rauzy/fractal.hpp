#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "rauzy/errors.hpp"
#include "rauzy/spectral.hpp"
#include "rauzy/word.hpp"

namespace rauzy {

/// Canonical stepped line of a word prefix: vertex 0 is the origin and each
/// step adds the standard basis vector of the next letter, so vertex k is
/// the abelianization of the length-k prefix.
struct SteppedLine {
    Alphabet alphabet;
    std::string letters;                 // the prefix that was walked
    std::vector<AbelianVector> vertices; // letters.size() + 1 entries
};

inline SteppedLine stepped_line(FixedPointStream& stream, std::size_t n) {
    const Alphabet& al = stream.substitution_power().alphabet();
    SteppedLine out{al, std::string(stream.prefix(n).substr(0, n)), {}};
    out.vertices.reserve(n + 1);
    AbelianVector v(static_cast<std::size_t>(al.size()), 0);
    out.vertices.push_back(v);
    for (char c : out.letters) {
        ++v[static_cast<std::size_t>(al.require_index(c))];
        out.vertices.push_back(v);
    }
    return out;
}

/// Finite labeled point set in stable-plane coordinates, stored flat.
struct PointCloud {
    int dim = 0;
    std::vector<double> coords; // size() * dim
    std::vector<std::int32_t> labels;
    std::vector<std::string> label_names;
    std::string source;

    std::size_t size() const { return labels.size(); }
    const double* point(std::size_t i) const { return coords.data() + i * static_cast<std::size_t>(dim); }

    void add(const double* p, std::int32_t label) {
        coords.insert(coords.end(), p, p + dim);
        labels.push_back(label);
    }
};

/// Projections of the first `n_points` stepped-line vertices of the fixed
/// point, labeled by the letter that follows each vertex (one subtile per
/// letter). The walk is incremental; nothing quadratic in n is stored.
inline PointCloud rauzy_cloud(const Substitution& sigma, std::size_t n_points, const PerronData& pd) {
    if (n_points < 1) throw validation_error("rauzy_cloud needs at least one point");
    const IncidenceMatrix m = incidence_matrix(sigma);
    const Classification cls = classify(m);
    if (!cls.pisot || !cls.irreducible)
        throw validation_error("substitution is not irreducible Pisot: " + cls.reasons);
    if (!is_primitive(m)) throw validation_error("substitution is not primitive");

    const Alphabet& al = sigma.alphabet();
    FixedPointStream stream = periodic_point(sigma);
    const std::string& u = stream.prefix(n_points);

    PointCloud cloud;
    cloud.dim = pd.stable_dim();
    cloud.source = "rauzy";
    for (int i = 0; i < al.size(); ++i) cloud.label_names.emplace_back(1, al.letter(i));
    cloud.coords.reserve(n_points * static_cast<std::size_t>(cloud.dim));
    cloud.labels.reserve(n_points);

    std::vector<double> vertex(static_cast<std::size_t>(al.size()), 0.0);
    for (std::size_t k = 0; k < n_points; ++k) {
        const int letter = al.require_index(u[k]);
        const StablePoint p = project_stable(pd, vertex);
        cloud.add(p.data(), letter);
        vertex[static_cast<std::size_t>(letter)] += 1.0;
    }
    return cloud;
}

/// One GIFS edge per prefix-suffix-automaton edge; the map attached to
/// i -> j sends the subtile of j through the stable contraction plus the
/// projected prefix translation.
struct GifsEdge {
    int from = 0;
    int to = 0;
    StablePoint translation;
    Word prefix;
};

struct GifsSystem {
    Alphabet alphabet;
    std::vector<GifsEdge> edges;
    int dim = 0;
    std::vector<double> contraction; // dim x dim, row-major
};

inline GifsSystem gifs_system(const Substitution& sigma, const PerronData& pd) {
    const Alphabet& al = sigma.alphabet();
    GifsSystem g{al, {}, pd.stable_dim(), stable_action(pd, incidence_matrix(sigma))};
    const PrefixSuffixAutomaton psa = prefix_suffix_automaton(sigma);
    g.edges.reserve(psa.edges.size());
    for (const PsEdge& e : psa.edges)
        g.edges.push_back(GifsEdge{al.require_index(e.from), al.require_index(e.to),
                                   project_stable(pd, abelianize(al, e.prefix)), e.prefix});
    return g;
}

namespace detail {

struct QuantizedHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const {
        std::uint64_t h = 1469598103934665603ull;
        for (std::int64_t x : v) {
            std::uint64_t u = static_cast<std::uint64_t>(x);
            for (int b = 0; b < 8; ++b) {
                h ^= (u >> (8 * b)) & 0xffu;
                h *= 1099511628211ull;
            }
        }
        return static_cast<std::size_t>(h);
    }
};

inline std::vector<std::int64_t> quantize(const double* p, int dim, double cell) {
    std::vector<std::int64_t> key(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) key[static_cast<std::size_t>(i)] = std::llround(p[i] / cell);
    return key;
}

} // namespace detail

/// One refinement step of the GIFS iteration: given per-vertex point sets,
/// produce the next per-vertex sets (dedup on a fixed grid when > 0).
inline std::vector<std::vector<double>> gifs_step(const GifsSystem& g,
                                                  const std::vector<std::vector<double>>& per_vertex,
                                                  double dedup_cell,
                                                  std::size_t max_points) {
    const int dim = g.dim;
    const int n = g.alphabet.size();
    std::vector<std::vector<double>> next(static_cast<std::size_t>(n));
    std::vector<std::unordered_set<std::vector<std::int64_t>, detail::QuantizedHash>> seen(
        static_cast<std::size_t>(n));
    std::size_t total = 0;
    std::vector<double> q(static_cast<std::size_t>(dim));
    for (const GifsEdge& e : g.edges) {
        const auto& src = per_vertex[static_cast<std::size_t>(e.to)];
        auto& dst = next[static_cast<std::size_t>(e.from)];
        for (std::size_t o = 0; o + dim <= src.size(); o += static_cast<std::size_t>(dim)) {
            for (int i = 0; i < dim; ++i) {
                double s = e.translation[static_cast<std::size_t>(i)];
                for (int j = 0; j < dim; ++j)
                    s += g.contraction[static_cast<std::size_t>(i) * dim + j] * src[o + static_cast<std::size_t>(j)];
                q[static_cast<std::size_t>(i)] = s;
            }
            if (dedup_cell > 0 &&
                !seen[static_cast<std::size_t>(e.from)].insert(detail::quantize(q.data(), dim, dedup_cell)).second)
                continue;
            dst.insert(dst.end(), q.begin(), q.end());
            if (++total > max_points)
                throw resource_error("GIFS iteration exceeded the point budget");
        }
    }
    return next;
}

/// Depth-n GIFS approximation of all subtiles, starting from the origin at
/// every vertex; points carry the subtile letter as label.
inline PointCloud gifs_cloud(const GifsSystem& g, int depth, std::size_t max_points = 10'000'000,
                             double dedup_cell = 1e-9) {
    if (depth < 0) throw validation_error("gifs_cloud needs depth >= 0");
    const int n = g.alphabet.size();
    std::vector<std::vector<double>> sets(static_cast<std::size_t>(n),
                                          std::vector<double>(static_cast<std::size_t>(g.dim), 0.0));
    for (int step = 0; step < depth; ++step) sets = gifs_step(g, sets, dedup_cell, max_points);

    PointCloud cloud;
    cloud.dim = g.dim;
    cloud.source = "gifs";
    for (int i = 0; i < n; ++i) cloud.label_names.emplace_back(1, g.alphabet.letter(i));
    for (int i = 0; i < n; ++i) {
        const auto& pts = sets[static_cast<std::size_t>(i)];
        for (std::size_t o = 0; o + g.dim <= pts.size(); o += static_cast<std::size_t>(g.dim))
            cloud.add(pts.data() + o, i);
    }
    return cloud;
}

/// Advisory occupancy check: rasterize the cloud on a gridsize^2 lattice over
/// its bounding box and require the origin's cell and all its neighbors to be
/// occupied (3 cells in a 1-d stable space, 9 otherwise, using the first two
/// coordinates). Heuristic evidence only, never a proof.
inline bool interior_heuristic(const PointCloud& cloud, int gridsize) {
    if (gridsize < 8) throw validation_error("interior_heuristic needs gridsize >= 8");
    if (cloud.size() == 0 || cloud.dim == 0) return false;
    const int dims_used = cloud.dim >= 2 ? 2 : 1;

    double lo[2] = {0, 0}, hi[2] = {0, 0};
    for (int a = 0; a < dims_used; ++a) {
        lo[a] = hi[a] = cloud.point(0)[a];
        for (std::size_t i = 1; i < cloud.size(); ++i) {
            lo[a] = std::min(lo[a], cloud.point(i)[a]);
            hi[a] = std::max(hi[a], cloud.point(i)[a]);
        }
        if (hi[a] <= lo[a]) return false; // degenerate extent: no interior
    }

    auto cell_of = [&](const double* p, int out[2]) {
        for (int a = 0; a < dims_used; ++a) {
            double t = (p[a] - lo[a]) / (hi[a] - lo[a]);
            int c = static_cast<int>(t * gridsize);
            out[a] = std::min(std::max(c, 0), gridsize - 1);
        }
        if (dims_used == 1) out[1] = 0;
    };

    std::vector<char> occupied(static_cast<std::size_t>(gridsize) * gridsize, 0);
    int cell[2];
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        cell_of(cloud.point(i), cell);
        occupied[static_cast<std::size_t>(cell[1]) * gridsize + cell[0]] = 1;
    }

    const double origin[2] = {0.0, 0.0};
    for (int a = 0; a < dims_used; ++a)
        if (origin[a] < lo[a] || origin[a] > hi[a]) return false;
    cell_of(origin, cell);
    const int y_lo = dims_used == 2 ? -1 : 0, y_hi = dims_used == 2 ? 1 : 0;
    for (int dy = y_lo; dy <= y_hi; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
            const int cx = cell[0] + dx, cy = cell[1] + dy;
            if (cx < 0 || cy < 0 || cx >= gridsize || cy >= gridsize) return false;
            if (!occupied[static_cast<std::size_t>(cy) * gridsize + cx]) return false;
        }
    return true;
}

} // namespace rauzy
