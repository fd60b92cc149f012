#include "salvo/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <string>

#include "salvo/error.hpp"

namespace salvo {

Matrix multiply(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols, a.rows);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
    return t;
}

std::vector<double> symmetric_eigenvalues(Matrix a, double tol, int max_sweeps) {
    const int n = a.rows;
    auto off_norm = [&] {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) s += a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < max_sweeps && off_norm() >= tol; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }

    std::vector<double> ev(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

Topology::Topology(int n, const std::vector<std::pair<int, int>>& edges) : n_(n) {
    if (n < 1) throw Error(ErrorKind::validation, "graph needs at least one vertex");
    adj_.assign(static_cast<std::size_t>(n), {});
    for (auto [i, j] : edges) {
        if (i < 1 || i > n || j < 1 || j > n)
            throw Error(ErrorKind::validation, "edge {" + std::to_string(i) + "," +
                                                   std::to_string(j) + "} outside 1.." +
                                                   std::to_string(n));
        if (i == j) throw Error(ErrorKind::validation, "self-loop at vertex " + std::to_string(i));
        edges_.emplace_back(std::min(i, j), std::max(i, j));
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw Error(ErrorKind::validation, "duplicate edge in graph");
    for (auto [i, j] : edges_) {
        adj_[static_cast<std::size_t>(i - 1)].push_back(j - 1);
        adj_[static_cast<std::size_t>(j - 1)].push_back(i - 1);
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
}

Topology Topology::cycle(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i <= n; ++i) e.emplace_back(i, i % n + 1);
    return Topology(n, e);
}

Topology Topology::complete(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) e.emplace_back(i, j);
    return Topology(n, e);
}

Matrix laplacian(const Topology& g) {
    Matrix l(g.n(), g.n());
    for (auto [i, j] : g.edges()) {
        l(i - 1, j - 1) = -1.0;
        l(j - 1, i - 1) = -1.0;
        l(i - 1, i - 1) += 1.0;
        l(j - 1, j - 1) += 1.0;
    }
    return l;
}

Matrix incidence(const Topology& g) {
    Matrix f(g.n(), g.edge_count());
    int col = 0;
    for (auto [i, j] : g.edges()) {
        f(i - 1, col) = 1.0;
        f(j - 1, col) = -1.0;
        ++col;
    }
    return f;
}

bool is_connected(const Topology& g) {
    if (g.n() == 0) return false;
    std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int w : g.adjacent(u)) {
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                ++count;
                q.push(w);
            }
        }
    }
    return count == g.n();
}

double algebraic_connectivity(const Topology& g) {
    if (g.n() < 2) throw Error(ErrorKind::disconnected_graph, "lambda2 needs at least two vertices");
    const auto ev = symmetric_eigenvalues(laplacian(g));
    if (ev[1] < 1e-9)
        throw Error(ErrorKind::disconnected_graph,
                    "second-smallest Laplacian eigenvalue " + std::to_string(ev[1]) +
                        " indicates a disconnected graph");
    return ev[1];
}

std::vector<int> neighborhood(const Topology& g, int i) {
    if (i < 1 || i > g.n())
        throw Error(ErrorKind::vertex_out_of_range,
                    "vertex " + std::to_string(i) + " outside 1.." + std::to_string(g.n()));
    std::vector<int> out;
    for (int w : g.adjacent(i - 1)) out.push_back(w + 1);
    return out;
}

SwitchingSchedule SwitchingSchedule::fixed(Topology g) {
    SwitchingSchedule s;
    s.graphs_.push_back(std::move(g));
    s.switches_.emplace_back(0.0, 0);
    s.min_dwell_ = std::numeric_limits<double>::infinity();
    return s;
}

SwitchingSchedule SwitchingSchedule::explicit_signal(std::vector<Topology> graphs,
                                                     std::vector<std::pair<double, int>> switches,
                                                     double min_dwell) {
    if (graphs.empty()) throw Error(ErrorKind::validation, "switching schedule has no graphs");
    if (switches.empty() || switches.front().first != 0.0)
        throw Error(ErrorKind::validation, "switching signal must start at t = 0");
    if (!(min_dwell > 0.0)) throw Error(ErrorKind::validation, "min_dwell must be positive");
    for (const auto& g : graphs)
        if (g.n() != graphs.front().n())
            throw Error(ErrorKind::validation, "all graphs in a schedule must share n");
    for (std::size_t k = 0; k < switches.size(); ++k) {
        const int idx = switches[k].second;
        if (idx < 0 || idx >= static_cast<int>(graphs.size()))
            throw Error(ErrorKind::validation, "switch refers to graph " + std::to_string(idx + 1) +
                                                   " of " + std::to_string(graphs.size()));
        if (k > 0 && switches[k].first - switches[k - 1].first < min_dwell - 1e-12)
            throw Error(ErrorKind::validation,
                        "dwell before t = " + std::to_string(switches[k].first) +
                            " is shorter than min_dwell");
    }
    SwitchingSchedule s;
    s.graphs_ = std::move(graphs);
    s.switches_ = std::move(switches);
    s.min_dwell_ = min_dwell;
    return s;
}

SwitchingSchedule SwitchingSchedule::random_signal(std::vector<Topology> graphs, std::uint64_t seed,
                                                   double min_dwell, double max_dwell,
                                                   double horizon) {
    if (graphs.empty()) throw Error(ErrorKind::validation, "switching schedule has no graphs");
    if (!(min_dwell > 0.0) || max_dwell < min_dwell)
        throw Error(ErrorKind::validation, "need 0 < min_dwell <= max_dwell");
    std::mt19937_64 rng(seed);
    const int count = static_cast<int>(graphs.size());
    // Drawn by hand from raw engine output so the sequence does not depend on
    // the standard library's distribution implementations.
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<std::pair<double, int>> sw;
    int idx = static_cast<int>(unit() * count);
    double t = 0.0;
    sw.emplace_back(t, idx);
    while (count > 1) {
        t += min_dwell + (max_dwell - min_dwell) * unit();
        if (t > horizon) break;
        int next = static_cast<int>(unit() * (count - 1));
        if (next >= idx) ++next;
        idx = next;
        sw.emplace_back(t, idx);
    }
    return explicit_signal(std::move(graphs), std::move(sw), min_dwell);
}

int SwitchingSchedule::index_at(double t) const {
    auto it = std::upper_bound(switches_.begin(), switches_.end(), t,
                               [](double tv, const std::pair<double, int>& s) { return tv < s.first; });
    if (it == switches_.begin()) return switches_.front().second;
    return std::prev(it)->second;
}

SpectralSummary spectral_summary(const SwitchingSchedule& s) {
    SpectralSummary out;
    out.min_lambda2_family = std::numeric_limits<double>::infinity();
    out.min_edges_family = std::numeric_limits<int>::max();
    bool first = true;
    for (const auto& g : s.graphs()) {
        const double l2 = algebraic_connectivity(g);
        if (first) out.lambda2 = l2;
        first = false;
        out.min_lambda2_family = std::min(out.min_lambda2_family, l2);
        out.min_edges_family = std::min(out.min_edges_family, g.edge_count());
    }
    return out;
}

}  // namespace salvo
