#pragma once

#include <cmath>
#include <vector>

#include "toposynth/overlay.hpp"

namespace toposynth {

/// Symmetric doubly stochastic averaging weights over an undirected overlay.
struct ConsensusMatrix {
    int n = 0;
    std::vector<std::vector<double>> a;

    void validate(double tol = 1e-12) const {
        for (int i = 0; i < n; ++i) {
            double row = 0.0, col = 0.0;
            for (int j = 0; j < n; ++j) {
                if (a[i][j] < -tol)
                    throw validation_error("ConsensusMatrix: negative weight");
                if (std::abs(a[i][j] - a[j][i]) > tol)
                    throw validation_error("ConsensusMatrix: not symmetric");
                row += a[i][j];
                col += a[j][i];
            }
            if (std::abs(row - 1.0) > tol || std::abs(col - 1.0) > tol)
                throw validation_error("ConsensusMatrix: not doubly stochastic");
        }
    }
};

/// Local-degree rule: each neighbour pair is weighted by one over one plus
/// the larger of the two node degrees; the diagonal absorbs the remainder.
inline ConsensusMatrix local_degree_matrix(const Overlay& o) {
    if (!o.undirected)
        throw validation_error("local_degree_matrix: overlay must be undirected");
    const int n = o.silo_count;
    std::vector<int> deg = o.in_degrees();
    ConsensusMatrix m;
    m.n = n;
    m.a.assign(n, std::vector<double>(n, 0.0));
    for (const Arc& arc : o.arcs)
        m.a[arc.src][arc.dst] = 1.0 / (1.0 + std::max(deg[arc.src], deg[arc.dst]));
    for (int i = 0; i < n; ++i) {
        double off = 0.0;
        for (int j = 0; j < n; ++j)
            if (j != i) off += m.a[i][j];
        m.a[i][i] = 1.0 - off;
    }
    return m;
}

} // namespace toposynth
