#include "nefrac/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <queue>
#include <unordered_map>

namespace nefrac {

namespace {

constexpr double kPointTol = 1e-9;  // point matching tolerance at diam(K)=1 scale

double sqr_dist(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double t = a[d] - b[d];
        s += t * t;
    }
    return s;
}

bool lex_less(const Point& a, const Point& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

int find_point(const std::vector<Point>& pts, const Point& q, double tol) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (dist(pts[i], q) < tol) return static_cast<int>(i);
    }
    return -1;
}

struct UnionFind {
    std::vector<std::uint32_t> parent;

    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0u);
    }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

// spatial hash over integer grid coordinates
struct GridIndex {
    double h;
    int dim;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets;

    GridIndex(double cell, int d) : h(cell), dim(d) {}

    std::uint64_t key(const Point& p, const std::vector<int>& offset) const {
        std::uint64_t k = 1469598103934665603ull;
        for (int d = 0; d < dim; ++d) {
            const auto c = static_cast<std::int64_t>(std::floor(p[d] / h)) + offset[d];
            k ^= static_cast<std::uint64_t>(c);
            k *= 1099511628211ull;
        }
        return k;
    }

    void insert(const Point& p, std::uint32_t id) {
        buckets[key(p, std::vector<int>(dim, 0))].push_back(id);
    }

    template <typename Fn>
    void for_neighbors(const Point& p, Fn&& fn) const {
        std::vector<int> offset(dim, -1);
        for (;;) {
            auto it = buckets.find(key(p, offset));
            if (it != buckets.end()) {
                for (std::uint32_t id : it->second) fn(id);
            }
            int d = 0;
            while (d < dim && offset[d] == 1) offset[d++] = -1;
            if (d == dim) break;
            ++offset[d];
        }
    }
};

// F_w(x) = rho^n x + t_w with t_w = sum_k rho^{k-1}(1-rho) b_{w_k}
Point word_translation(const IfsSpec& ifs, const Word& w) {
    const int dim = ifs.dimension;
    Point t(dim, 0.0);
    double scale = 1.0 - ifs.ratio;
    for (int k = 0; k < w.length(); ++k) {
        const Point& b = ifs.anchors[w.letters[k]];
        for (int d = 0; d < dim; ++d) t[d] += scale * b[d];
        scale *= ifs.ratio;
    }
    return t;
}

}  // namespace

double dist(const Point& a, const Point& b) { return std::sqrt(sqr_dist(a, b)); }

double IfsSpec::alpha() const {
    return -std::log(static_cast<double>(map_count())) / std::log(ratio);
}

Point IfsSpec::apply(int i, const Point& x) const {
    const Point& b = anchors[i];
    Point y(x.size());
    for (std::size_t d = 0; d < x.size(); ++d) y[d] = ratio * (x[d] - b[d]) + b[d];
    return y;
}

Word Word::child(std::uint8_t letter) const {
    Word w = *this;
    w.letters.push_back(letter);
    return w;
}

std::string Word::str() const {
    std::string s;
    for (auto l : letters) {
        if (!s.empty()) s += '.';
        s += std::to_string(static_cast<int>(l) + 1);
    }
    return s.empty() ? "()" : s;
}

std::uint64_t Word::to_index(int base) const {
    std::uint64_t idx = 0;
    for (auto l : letters) idx = idx * static_cast<std::uint64_t>(base) + l;
    return idx;
}

Word Word::from_index(std::uint64_t index, int length, int base) {
    Word w;
    w.letters.assign(static_cast<std::size_t>(length), 0);
    for (int k = length - 1; k >= 0; --k) {
        w.letters[k] = static_cast<std::uint8_t>(index % static_cast<std::uint64_t>(base));
        index /= static_cast<std::uint64_t>(base);
    }
    return w;
}

Point cell_point(const IfsSpec& ifs, const Word& w, Point q) {
    const Point t = word_translation(ifs, w);
    const double scale = std::pow(ifs.ratio, w.length());
    for (int d = 0; d < ifs.dimension; ++d) q[d] = scale * q[d] + t[d];
    return q;
}

std::vector<Point> essential_fixed_points(const IfsSpec& ifs) {
    const int n = ifs.map_count();
    double diam = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) diam = std::max(diam, dist(ifs.anchors[i], ifs.anchors[j]));
    const double tol = kPointTol * std::max(diam, 1.0);

    std::vector<Point> result;
    for (int xi = 0; xi < n; ++xi) {
        bool essential = false;
        for (int yi = 0; yi < n && !essential; ++yi) {
            if (yi == xi) continue;
            if (dist(ifs.anchors[xi], ifs.anchors[yi]) < tol) continue;
            for (int k = 0; k < n && !essential; ++k) {
                const Point fx = ifs.apply(k, ifs.anchors[xi]);
                for (int l = 0; l < n; ++l) {
                    if (dist(fx, ifs.apply(l, ifs.anchors[yi])) < tol) {
                        essential = true;
                        break;
                    }
                }
            }
        }
        if (essential && find_point(result, ifs.anchors[xi], tol) < 0)
            result.push_back(ifs.anchors[xi]);
    }
    if (result.size() < 2)
        throw invalid_fractal_error("fewer than 2 essential fixed points: images of fixed points never meet");
    std::sort(result.begin(), result.end(), lex_less);
    return result;
}

Point AffineMap::apply(const Point& x) const {
    const int d = static_cast<int>(shift.size());
    Point y(shift);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) y[r] += lin[r * d + c] * x[c];
    return y;
}

bool LevelGraph::share_cell(std::uint32_t a, std::uint32_t b) const {
    const auto& ca = incidence[a];
    const auto& cb = incidence[b];
    std::size_t i = 0, j = 0;
    while (i < ca.size() && j < cb.size()) {
        if (ca[i] == cb[j]) return true;
        (ca[i] < cb[j]) ? ++i : ++j;
    }
    return false;
}

std::vector<Word> neighbor_cells(const LevelGraph& g, const Word& w) {
    if (w.length() != g.level) throw std::invalid_argument("neighbor_cells: word length != graph level");
    if (g.level == 0) return {};

    // cells are stored in row-major word order; recover the alphabet size
    int base = 2;
    while (true) {
        std::uint64_t t = 1;
        for (int k = 0; k < g.level; ++k) t *= static_cast<std::uint64_t>(base);
        if (t == g.cells.size()) break;
        if (++base > 255) throw std::logic_error("neighbor_cells: cannot recover alphabet size");
    }
    const std::uint64_t self = w.to_index(base);

    std::vector<std::uint64_t> found;
    for (std::uint32_t vid : g.cells[self]) {
        for (std::uint32_t c : g.incidence[vid]) {
            if (c != self) found.push_back(c);
        }
    }
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());

    std::vector<Word> out;
    out.reserve(found.size());
    for (auto idx : found) out.push_back(Word::from_index(idx, g.level, base));
    return out;
}

double cell_measure(const IfsSpec& ifs, const Word& w) {
    return std::pow(static_cast<double>(ifs.map_count()), -static_cast<double>(w.length()));
}

LevelGraph build_level_graph(const Fractal& f, int n) {
    if (n < 0) throw std::invalid_argument("build_level_graph: negative level");
    const IfsSpec& ifs = f.spec();
    const int nmaps = ifs.map_count();
    const int nb = f.boundary_size();
    const int dim = ifs.dimension;

    std::uint64_t cell_count = 1;
    for (int k = 0; k < n; ++k) {
        cell_count *= static_cast<std::uint64_t>(nmaps);
        if (cell_count > (1ull << 27))
            throw std::invalid_argument("build_level_graph: level exceeds memory budget");
    }

    const double scale = std::pow(ifs.ratio, n);
    const double eps = scale * f.min_vertex_gap() / 4.0;
    const double band_hi = 4.0 * eps * (1.0 - 1e-9);  // margin keeps exact minimal separations out of the band

    // raw vertex coordinates, cell-major
    const std::uint64_t raw_count = cell_count * static_cast<std::uint64_t>(nb);
    std::vector<Point> raw(raw_count);
    {
        for (std::uint64_t ci = 0; ci < cell_count; ++ci) {
            Word ww = Word::from_index(ci, n, nmaps);
            const Point t = word_translation(ifs, ww);
            for (int j = 0; j < nb; ++j) {
                Point p(dim);
                for (int d = 0; d < dim; ++d) p[d] = scale * f.boundary()[j][d] + t[d];
                raw[ci * nb + j] = std::move(p);
            }
        }
    }

    UnionFind uf(raw_count);
    {
        GridIndex grid(std::max(4.0 * eps, 1e-300), dim);
        for (std::uint64_t i = 0; i < raw_count; ++i) {
            const Point& p = raw[i];
            grid.for_neighbors(p, [&](std::uint32_t j) {
                const double d = dist(p, raw[j]);
                if (d < eps) {
                    uf.unite(static_cast<std::uint32_t>(i), j);
                } else if (d < band_hi) {
                    char buf[160];
                    std::snprintf(buf, sizeof buf,
                                  "vertex identification ambiguous at level %d: distance %.3e inside (%.3e, %.3e)",
                                  n, d, eps, 4.0 * eps);
                    throw precision_error(buf);
                }
            });
            grid.insert(p, static_cast<std::uint32_t>(i));
        }
    }

    // canonical vertex ids: classes sorted by lexicographically smallest member
    std::vector<std::uint32_t> root(raw_count);
    std::unordered_map<std::uint32_t, std::uint32_t> class_of_root;
    std::vector<const Point*> rep;
    for (std::uint64_t i = 0; i < raw_count; ++i) {
        root[i] = uf.find(static_cast<std::uint32_t>(i));
        auto [it, inserted] = class_of_root.try_emplace(root[i], static_cast<std::uint32_t>(rep.size()));
        if (inserted) {
            rep.push_back(&raw[i]);
        } else if (lex_less(raw[i], *rep[it->second])) {
            rep[it->second] = &raw[i];
        }
    }
    std::vector<std::uint32_t> order(rep.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return lex_less(*rep[a], *rep[b]); });
    std::vector<std::uint32_t> rank(rep.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) rank[order[i]] = i;

    LevelGraph g;
    g.level = n;
    g.vertices.resize(rep.size());
    for (std::uint32_t cls = 0; cls < rep.size(); ++cls) g.vertices[rank[cls]] = *rep[cls];
    g.cells.assign(cell_count, std::vector<std::uint32_t>(nb));
    g.incidence.assign(rep.size(), {});
    for (std::uint64_t ci = 0; ci < cell_count; ++ci) {
        for (int j = 0; j < nb; ++j) {
            const std::uint32_t id = rank[class_of_root[root[ci * nb + j]]];
            g.cells[ci][j] = id;
            g.incidence[id].push_back(static_cast<std::uint32_t>(ci));
        }
    }
    for (auto& inc : g.incidence) {
        std::sort(inc.begin(), inc.end());
        inc.erase(std::unique(inc.begin(), inc.end()), inc.end());
    }
    return g;
}

std::vector<QuadratureNode> quadrature_nodes(const Fractal& f, int m, int anchor_vertex) {
    if (m < 0) throw std::invalid_argument("quadrature_nodes: negative level");
    if (anchor_vertex < 0 || anchor_vertex >= f.boundary_size())
        throw std::invalid_argument("quadrature_nodes: anchor vertex out of range");
    const LevelGraph& g = f.level(m);
    const int nmaps = f.map_count();
    const double weight = std::pow(static_cast<double>(nmaps), -static_cast<double>(m));
    const Point q = f.boundary()[anchor_vertex];

    std::vector<QuadratureNode> nodes;
    nodes.reserve(g.cell_count());
    for (std::uint64_t ci = 0; ci < g.cell_count(); ++ci) {
        QuadratureNode node;
        node.word_index = ci;
        node.weight = weight;
        node.vertex_id = g.cells[ci][anchor_vertex];
        node.x = cell_point(f.spec(), Word::from_index(ci, m, nmaps), q);
        nodes.push_back(std::move(node));
    }
    return nodes;
}

// ---------------------------------------------------------------- Fractal

Fractal::Fractal(IfsSpec spec) : spec_(std::move(spec)) {
    const int n = spec_.map_count();
    if (n < 2) throw invalid_fractal_error("need at least 2 maps");
    if (!(spec_.ratio > 0.0 && spec_.ratio < 1.0))
        throw invalid_fractal_error("contraction ratio must lie in (0,1)");
    if (spec_.dimension < 1) throw invalid_fractal_error("dimension must be positive");
    for (const Point& b : spec_.anchors) {
        if (static_cast<int>(b.size()) != spec_.dimension)
            throw invalid_fractal_error("anchor dimension mismatch");
        for (double c : b) {
            if (!std::isfinite(c)) throw invalid_fractal_error("non-finite anchor coordinate");
        }
    }

    // normalize diam(attractor) = 1; the attractor diameter equals the anchor
    // set diameter because K lies in the convex hull of the anchors
    double diam = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d = dist(spec_.anchors[i], spec_.anchors[j]);
            if (d < 1e-12) throw invalid_fractal_error("anchors must be distinct");
            diam = std::max(diam, d);
        }
    if (std::abs(diam - 1.0) > 1e-12) {
        Point centroid(spec_.dimension, 0.0);
        for (const Point& b : spec_.anchors)
            for (int d = 0; d < spec_.dimension; ++d) centroid[d] += b[d] / n;
        for (Point& b : spec_.anchors)
            for (int d = 0; d < spec_.dimension; ++d) b[d] = centroid[d] + (b[d] - centroid[d]) / diam;
    }

    v0_ = essential_fixed_points(spec_);

    double v0_diam = 0.0;
    for (std::size_t i = 0; i < v0_.size(); ++i)
        for (std::size_t j = i + 1; j < v0_.size(); ++j) v0_diam = std::max(v0_diam, dist(v0_[i], v0_[j]));
    if (std::abs(v0_diam - 1.0) > 1e-12)
        throw invalid_fractal_error("V_0 hull does not realize unit diameter after normalization");

    anchor_map_.resize(v0_.size());
    for (std::size_t i = 0; i < v0_.size(); ++i) {
        const int m = find_point(spec_.anchors, v0_[i], kPointTol);
        if (m < 0) throw invalid_fractal_error("essential fixed point is not an anchor");
        anchor_map_[i] = m;
    }

    // minimum nonzero vertex gap of V_1 rescaled to level 0
    {
        std::vector<Point> raw;
        for (int i = 0; i < n; ++i)
            for (const Point& q : v0_) raw.push_back(spec_.apply(i, q));
        double gmin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < raw.size(); ++i)
            for (std::size_t j = i + 1; j < raw.size(); ++j) {
                const double d = dist(raw[i], raw[j]);
                if (d > kPointTol) gmin = std::min(gmin, d);
            }
        if (!std::isfinite(gmin)) throw invalid_fractal_error("degenerate level-1 vertex set");
        g_min_ = gmin / spec_.ratio;
    }

    // symmetry group: close reflections over essential fixed point pairs
    {
        const int dim = spec_.dimension;
        std::vector<AffineMap> gens;
        for (std::size_t i = 0; i < v0_.size(); ++i) {
            for (std::size_t j = i + 1; j < v0_.size(); ++j) {
                Point normal(dim);
                double len = 0.0;
                for (int d = 0; d < dim; ++d) {
                    normal[d] = v0_[j][d] - v0_[i][d];
                    len += normal[d] * normal[d];
                }
                len = std::sqrt(len);
                for (int d = 0; d < dim; ++d) normal[d] /= len;
                Point mid(dim);
                for (int d = 0; d < dim; ++d) mid[d] = 0.5 * (v0_[i][d] + v0_[j][d]);
                AffineMap u;
                u.lin.assign(static_cast<std::size_t>(dim) * dim, 0.0);
                for (int r = 0; r < dim; ++r)
                    for (int c = 0; c < dim; ++c)
                        u.lin[r * dim + c] = (r == c ? 1.0 : 0.0) - 2.0 * normal[r] * normal[c];
                u.shift.assign(dim, 0.0);
                const Point am = u.apply(mid);
                for (int d = 0; d < dim; ++d) u.shift[d] = mid[d] - am[d];
                gens.push_back(std::move(u));
            }
        }

        AffineMap identity;
        identity.lin.assign(static_cast<std::size_t>(dim) * dim, 0.0);
        for (int d = 0; d < dim; ++d) identity.lin[d * dim + d] = 1.0;
        identity.shift.assign(dim, 0.0);

        auto same_map = [dim](const AffineMap& a, const AffineMap& b) {
            for (std::size_t k = 0; k < a.lin.size(); ++k)
                if (std::abs(a.lin[k] - b.lin[k]) > kPointTol) return false;
            for (int d = 0; d < dim; ++d)
                if (std::abs(a.shift[d] - b.shift[d]) > kPointTol) return false;
            return true;
        };
        auto compose = [dim](const AffineMap& a, const AffineMap& b) {
            AffineMap c;
            c.lin.assign(static_cast<std::size_t>(dim) * dim, 0.0);
            for (int r = 0; r < dim; ++r)
                for (int k = 0; k < dim; ++k)
                    for (int col = 0; col < dim; ++col)
                        c.lin[r * dim + col] += a.lin[r * dim + k] * b.lin[k * dim + col];
            c.shift = a.apply(b.shift);
            return c;
        };

        symmetry_.elements.push_back(identity);
        std::size_t head = 0;
        while (head < symmetry_.elements.size()) {
            const AffineMap current = symmetry_.elements[head++];
            for (const AffineMap& gen : gens) {
                const AffineMap next = compose(gen, current);
                bool known = false;
                for (const AffineMap& e : symmetry_.elements) {
                    if (same_map(next, e)) {
                        known = true;
                        break;
                    }
                }
                if (!known) {
                    symmetry_.elements.push_back(next);
                    if (symmetry_.elements.size() > 1024)
                        throw invalid_fractal_error("symmetry group closure exceeds 1024 elements");
                }
            }
        }

        for (const AffineMap& u : symmetry_.elements) {
            std::vector<int> perm(v0_.size());
            for (std::size_t i = 0; i < v0_.size(); ++i) {
                const int j = find_point(v0_, u.apply(v0_[i]), kPointTol);
                if (j < 0)
                    throw invalid_fractal_error("symmetry element does not permute V_0 (axiom iii)");
                perm[i] = j;
            }
            symmetry_.v0_perms.push_back(std::move(perm));
        }
    }

    // orbit classes of unordered V_0 pairs
    {
        const int nb = boundary_size();
        for (int i = 0; i < nb; ++i)
            for (int j = i + 1; j < nb; ++j) pairs_.emplace_back(i, j);
        pair_class_.assign(pairs_.size(), -1);
        auto pair_index = [&](int a, int b) {
            if (a > b) std::swap(a, b);
            for (std::size_t k = 0; k < pairs_.size(); ++k)
                if (pairs_[k].first == a && pairs_[k].second == b) return static_cast<int>(k);
            return -1;
        };
        int next_class = 0;
        for (std::size_t k = 0; k < pairs_.size(); ++k) {
            if (pair_class_[k] >= 0) continue;
            const int cls = next_class++;
            std::vector<std::size_t> stack{k};
            pair_class_[k] = cls;
            while (!stack.empty()) {
                const auto cur = stack.back();
                stack.pop_back();
                for (const auto& perm : symmetry_.v0_perms) {
                    const int idx = pair_index(perm[pairs_[cur].first], perm[pairs_[cur].second]);
                    if (pair_class_[idx] < 0) {
                        pair_class_[idx] = cls;
                        stack.push_back(idx);
                    }
                }
            }
        }
        pair_class_count_ = next_class;
    }

    validate_axioms();
}

const LevelGraph& Fractal::level(int n) const {
    if (n < 0) throw std::invalid_argument("level: negative");
    std::lock_guard<std::mutex> lock(mutex_);
    if (graphs_.size() <= static_cast<std::size_t>(n)) graphs_.resize(static_cast<std::size_t>(n) + 1);
    if (!graphs_[n]) graphs_[n] = std::make_unique<LevelGraph>(build_level_graph(*this, n));
    return *graphs_[n];
}

void Fractal::validate_axioms() {
    // connectivity (axiom ii) through the level-1 cell adjacency graph
    {
        const LevelGraph& g1 = level(1);
        const std::size_t nc = g1.cell_count();
        std::vector<char> seen(nc, 0);
        std::queue<std::uint32_t> queue;
        queue.push(0);
        seen[0] = 1;
        std::size_t reached = 1;
        while (!queue.empty()) {
            const auto c = queue.front();
            queue.pop();
            for (std::uint32_t vid : g1.cells[c]) {
                for (std::uint32_t other : g1.incidence[vid]) {
                    if (!seen[other]) {
                        seen[other] = 1;
                        ++reached;
                        queue.push(other);
                    }
                }
            }
        }
        if (reached != nc)
            throw invalid_fractal_error("level-1 cells are not chain-connected (axiom ii)");
    }

    // symmetry maps n-cells to n-cells, checked at n = 1, 2
    for (int n = 1; n <= 2; ++n) {
        const LevelGraph& g = level(n);
        std::vector<std::vector<std::uint32_t>> cell_sets;
        cell_sets.reserve(g.cell_count());
        for (const auto& cell : g.cells) {
            auto sorted = cell;
            std::sort(sorted.begin(), sorted.end());
            cell_sets.push_back(std::move(sorted));
        }
        auto known_cell = [&](const std::vector<std::uint32_t>& s) {
            for (const auto& c : cell_sets)
                if (c == s) return true;
            return false;
        };
        GridIndex grid(std::max(f_eps(n), 1e-300), spec_.dimension);
        for (std::uint32_t i = 0; i < g.vertex_count(); ++i) grid.insert(g.vertices[i], i);
        auto vertex_at = [&](const Point& p) -> int {
            int found = -1;
            grid.for_neighbors(p, [&](std::uint32_t id) {
                if (found < 0 && dist(g.vertices[id], p) < f_eps(n)) found = static_cast<int>(id);
            });
            return found;
        };
        for (const AffineMap& u : symmetry_.elements) {
            std::vector<std::uint32_t> image(boundary_size());
            for (const auto& cell : g.cells) {
                bool ok = true;
                for (int j = 0; j < boundary_size() && ok; ++j) {
                    const int id = vertex_at(u.apply(g.vertices[cell[j]]));
                    if (id < 0)
                        throw invalid_fractal_error("symmetry image is not a vertex (axiom iii)");
                    image[j] = static_cast<std::uint32_t>(id);
                }
                std::sort(image.begin(), image.end());
                if (!known_cell(image))
                    throw invalid_fractal_error("symmetry element does not map cells to cells (axiom iii)");
            }
        }
    }
}

double Fractal::f_eps(int n) const {
    return std::pow(spec_.ratio, n) * g_min_ / 4.0;
}

double Fractal::condition_h_constant(int max_level) const {
    if (max_level < 1) throw std::invalid_argument("condition_h_constant: need max_level >= 1");
    {
        std::lock_guard<std::mutex> lock(mutex_);
        if (cond_h_cache_.size() > static_cast<std::size_t>(max_level) &&
            cond_h_cache_[max_level] > 0.0)
            return cond_h_cache_[max_level];
    }
    double c_emp = 3.0;  // cells have unit relative diameter; beyond 3 rho^m nothing can be non-neighboring anyway
    for (int m = 1; m <= max_level; ++m) {
        const LevelGraph& g = level(m);
        const double radius = 3.0 * std::pow(spec_.ratio, m);
        GridIndex grid(radius, spec_.dimension);
        double best = radius;
        // per-cell neighbor sets on demand
        auto neighboring = [&](std::uint32_t a, std::uint32_t b) {
            for (std::uint32_t ca : g.incidence[a]) {
                for (std::uint32_t vid : g.cells[ca]) {
                    for (std::uint32_t cb : g.incidence[vid]) {
                        for (std::uint32_t cb2 : g.incidence[b]) {
                            if (cb == cb2) return true;
                        }
                    }
                }
            }
            return false;
        };
        for (std::uint32_t i = 0; i < g.vertex_count(); ++i) {
            const Point& p = g.vertices[i];
            grid.for_neighbors(p, [&](std::uint32_t j) {
                const double d = dist(p, g.vertices[j]);
                if (d < best && !neighboring(i, j)) best = d;
            });
            grid.insert(p, i);
        }
        c_emp = std::min(c_emp, best / std::pow(spec_.ratio, m));
    }
    std::lock_guard<std::mutex> lock(mutex_);
    if (cond_h_cache_.size() <= static_cast<std::size_t>(max_level))
        cond_h_cache_.resize(static_cast<std::size_t>(max_level) + 1, 0.0);
    cond_h_cache_[max_level] = c_emp;
    return c_emp;
}

}  // namespace nefrac
