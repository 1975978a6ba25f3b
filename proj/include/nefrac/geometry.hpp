#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nefrac/errors.hpp"

namespace nefrac {

using Point = std::vector<double>;

double dist(const Point& a, const Point& b);

// Homogeneous IFS: F_i(x) = ratio * (x - b_i) + b_i with a common contraction
// ratio. Anchors b_i are the fixed points of the maps.
struct IfsSpec {
    std::string name;
    int dimension = 0;
    double ratio = 0.0;
    std::vector<Point> anchors;

    int map_count() const { return static_cast<int>(anchors.size()); }
    double alpha() const;  // Hausdorff dimension -log N / log ratio
    Point apply(int i, const Point& x) const;
};

// Word over the alphabet {0,...,N-1} (rendered 1-based for display).
// The empty word denotes the whole attractor.
struct Word {
    std::vector<std::uint8_t> letters;

    Word() = default;
    explicit Word(std::vector<std::uint8_t> ls) : letters(std::move(ls)) {}

    int length() const { return static_cast<int>(letters.size()); }
    Word child(std::uint8_t letter) const;
    std::string str() const;

    // row-major cell index at level |letters| (first letter most significant)
    std::uint64_t to_index(int base) const;
    static Word from_index(std::uint64_t index, int length, int base);

    bool operator==(const Word&) const = default;
};

Point cell_point(const IfsSpec& ifs, const Word& w, Point q);

// Fixed points x of some F_i such that F_k(x) = F_l(y) for another fixed
// point y != x. Result sorted lexicographically by coordinates.
std::vector<Point> essential_fixed_points(const IfsSpec& ifs);

struct AffineMap {
    std::vector<double> lin;  // D x D, row-major
    Point shift;

    Point apply(const Point& x) const;
};

struct SymmetryGroup {
    std::vector<AffineMap> elements;           // closed under composition
    std::vector<std::vector<int>> v0_perms;    // action on V_0 indices
    std::size_t order() const { return elements.size(); }
};

struct LevelGraph {
    int level = 0;
    std::vector<Point> vertices;                        // id -> coordinates
    std::vector<std::vector<std::uint32_t>> cells;      // cell index -> ids in V_0 slot order
    std::vector<std::vector<std::uint32_t>> incidence;  // id -> sorted cell indices

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t cell_count() const { return cells.size(); }
    bool share_cell(std::uint32_t a, std::uint32_t b) const;
};

// Cells v != w at the same level with K_v meeting K_w, detected through
// shared vertex ids (nesting makes that equivalent to set intersection).
std::vector<Word> neighbor_cells(const LevelGraph& g, const Word& w);

double cell_measure(const IfsSpec& ifs, const Word& w);  // N^{-|w|}, mu(K) = 1

struct QuadratureNode {
    Point x;
    double weight;
    std::uint64_t word_index;  // row-major index of the word at the node level
    std::uint32_t vertex_id;   // id of the node in V_m
};

// Immutable fractal context: validated spec, boundary set V_0, symmetry
// group, lazily built level graphs and derived constants. Safe to query from
// several threads once constructed.
class Fractal {
  public:
    explicit Fractal(IfsSpec spec);

    const IfsSpec& spec() const { return spec_; }
    const std::string& name() const { return spec_.name; }
    int map_count() const { return spec_.map_count(); }
    int dimension() const { return spec_.dimension; }
    double ratio() const { return spec_.ratio; }
    double alpha() const { return spec_.alpha(); }

    const std::vector<Point>& boundary() const { return v0_; }        // V_0
    int boundary_size() const { return static_cast<int>(v0_.size()); }
    int anchor_map(int v0_index) const { return anchor_map_[v0_index]; }
    const SymmetryGroup& symmetry() const { return symmetry_; }

    const LevelGraph& level(int n) const;

    // Unordered V_0 index pairs (lexicographic) and their orbit classes
    // under the symmetry group action.
    const std::vector<std::pair<int, int>>& v0_pairs() const { return pairs_; }
    const std::vector<int>& pair_classes() const { return pair_class_; }
    int pair_class_count() const { return pair_class_count_; }

    // Largest empirical c such that d(x,y) < c * rho^m implies x,y lie in the
    // same or neighboring m-cells, over all vertex pairs up to max_level.
    double condition_h_constant(int max_level = 5) const;

    double min_vertex_gap() const { return g_min_; }  // level-0 scale

  private:
    void validate_axioms();
    double f_eps(int n) const;  // identification tolerance at level n

    IfsSpec spec_;
    std::vector<Point> v0_;
    std::vector<int> anchor_map_;
    SymmetryGroup symmetry_;
    std::vector<std::pair<int, int>> pairs_;
    std::vector<int> pair_class_;
    int pair_class_count_ = 0;
    double g_min_ = 0.0;

    mutable std::mutex mutex_;
    mutable std::vector<std::unique_ptr<LevelGraph>> graphs_;
    mutable std::vector<double> cond_h_cache_;  // index = max_level
};

LevelGraph build_level_graph(const Fractal& f, int n);

std::vector<QuadratureNode> quadrature_nodes(const Fractal& f, int m, int anchor_vertex);

}  // namespace nefrac
