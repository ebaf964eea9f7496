// Least-squares fit of a qubit response matrix onto a linear pattern, modulo
// the completeness constraints s†s+u†u = 1, t†t+v†v = 1, s†t+u†v = 0.
#pragma once

#include "slp/qcore.hpp"

#include <Eigen/Dense>
#include <vector>

namespace slp::detail {

// Element positions in the row-major vec of a 2x2 Kraus operator.
enum QubitSlot { S = 0, T = 1, U = 2, V = 3 };

struct PatternFit {
    Eigen::VectorXd coef;  // pattern coefficients, then a, b, Re c, Im c
    double residual = 0.0;
};

// Solves  −W − offset = Σ_j x_j P_j − a C1 − b C2 − x(C3+C3†) − iy(C3−C3†)
// with the constant equation  Σ_j const_weight_j x_j + a + b = c0.
PatternFit fit_qubit_pattern(const ComplexMatrix& w, double c0, const ComplexMatrix& offset,
                             const std::vector<ComplexMatrix>& pattern, const std::vector<double>& const_weight);

inline ComplexMatrix slot_matrix(std::initializer_list<std::pair<int, int>> entries, double value) {
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    for (auto [i, j] : entries) m(i, j) = value;
    return m;
}

}  // namespace slp::detail
