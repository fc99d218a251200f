#pragma once

#include <string>
#include <vector>

#include "movplane/shapes.hpp"

namespace fixtures {

struct Named {
    std::string name;
    movplane::ImplicitDomain domain;
};

inline movplane::ImplicitDomain rounded_triangle() {
    const std::vector<movplane::Vec> v{movplane::vec2(-1.0, -0.6), movplane::vec2(1.0, -0.6),
                                       movplane::vec2(0.0, 1.0)};
    return movplane::make_rounded_polygon(v, 0.3);
}

/// Every built-in shape with representative parameters.
inline std::vector<Named> builtins() {
    return {{"disk", movplane::make_disk(1.0)},
            {"ellipse", movplane::make_ellipse(2.0, 1.0)},
            {"superellipse", movplane::make_superellipse(1.0, 1.0, 4)},
            {"stadium", movplane::make_stadium(2.0, 1.0)},
            {"rounded_polygon", rounded_triangle()}};
}

}  // namespace fixtures
