#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace salvo {

// Small dense row-major matrix; the graphs here have a handful of vertices.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

Matrix multiply(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

// Eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi rotations.
std::vector<double> symmetric_eigenvalues(Matrix a, double tol = 1e-12, int max_sweeps = 100);

/// Undirected simple graph on vertices 1..n.
class Topology {
public:
    Topology() = default;
    // Throws Error(validation) on self-loops, duplicates or out-of-range ends.
    Topology(int n, const std::vector<std::pair<int, int>>& edges);

    static Topology cycle(int n);
    static Topology complete(int n);

    int n() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    // Normalised so that first < second, sorted.
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    // Zero-based neighbour indices of zero-based vertex i.
    const std::vector<int>& adjacent(int i) const { return adj_[static_cast<std::size_t>(i)]; }

private:
    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_;
};

Matrix laplacian(const Topology& g);
// +1 at the smaller vertex of each edge, -1 at the larger.
Matrix incidence(const Topology& g);
bool is_connected(const Topology& g);
// Throws Error(disconnected_graph) if the second-smallest eigenvalue is below 1e-9.
double algebraic_connectivity(const Topology& g);
// One-based vertex in, sorted one-based neighbours out.
std::vector<int> neighborhood(const Topology& g, int i);

/// Piecewise-constant selection among a family of graphs. The signal is
/// right-continuous: at a switch instant the new graph is already active.
class SwitchingSchedule {
public:
    SwitchingSchedule() = default;

    // A single graph that never switches.
    static SwitchingSchedule fixed(Topology g);
    // switches: (time, zero-based graph index); the first entry must be at t = 0.
    static SwitchingSchedule explicit_signal(std::vector<Topology> graphs,
                                             std::vector<std::pair<double, int>> switches,
                                             double min_dwell);
    // Dwell intervals uniform in [min_dwell, max_dwell], each switch picking a
    // different graph uniformly; generated up to `horizon`.
    static SwitchingSchedule random_signal(std::vector<Topology> graphs, std::uint64_t seed,
                                           double min_dwell, double max_dwell, double horizon);

    int index_at(double t) const;
    const Topology& active_graph(double t) const { return graphs_[static_cast<std::size_t>(index_at(t))]; }

    const std::vector<Topology>& graphs() const { return graphs_; }
    const std::vector<std::pair<double, int>>& switches() const { return switches_; }
    double min_dwell() const { return min_dwell_; }
    int n() const { return graphs_.empty() ? 0 : graphs_.front().n(); }

private:
    std::vector<Topology> graphs_;
    std::vector<std::pair<double, int>> switches_;
    double min_dwell_ = 0.0;
};

struct SpectralSummary {
    double lambda2 = 0.0;              // of the first graph
    double min_lambda2_family = 0.0;
    int min_edges_family = 0;
};

SpectralSummary spectral_summary(const SwitchingSchedule& s);

}  // namespace salvo
