#pragma once

#include <Eigen/Core>

namespace movplane {

/// Point / vector in R^N. Dynamic size with an inline buffer, so N <= 4 never
/// touches the heap on the hot evaluation paths.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1>;

inline Vec vec2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

}  // namespace movplane
