#pragma once

#include "stq/core_model.hpp"
#include "stq/geometry.hpp"
#include "stq/relations.hpp"

#include <utility>
#include <vector>

// One hand-built trajectory per topological label, all against the unit
// square. Thumbnails that show only two points get inner points where the
// label constrains the inner part of the line.

namespace stq::witness {

inline Region unit_square() { return Region::make(0, 0, 1, 1); }

inline Trajectory path(std::initializer_list<std::pair<double, double>> xy)
{
    std::vector<TrajectoryPoint> pts;
    std::int64_t i = 0;
    for (const auto& [x, y] : xy) {
        pts.push_back({i, x, y, double(i)});
        ++i;
    }
    return Trajectory::from_points(std::move(pts));
}

inline std::vector<std::pair<De9imLabel, Trajectory>> all()
{
    using L = De9imLabel;
    return {
        {L::R031, path({{2, 2}, {3, 2}, {3, 3}})},
        {L::R095, path({{0.2, 1.5}, {0.33, 1}, {0.66, 1}, {0.8, 1.5}})},
        {L::R179, path({{0.2, 0.2}, {0.5, 0.5}, {0.8, 0.3}})},
        {L::R223, path({{-1, 0.5}, {0.5, 0.5}, {2, 0.5}})},
        {L::R243, path({{0.2, 0.5}, {0.5, 1}, {0.8, 0.5}})},
        {L::R247, path({{0.2, 0.5}, {0.5, 2}, {0.8, 0.5}})},
        {L::R255, path({{0.5, 0.5}, {2, 0.5}})},
        {L::R279, path({{0, 0.5}, {0.5, 2}, {1, 0.5}})},
        {L::R287, path({{0, 0.5}, {-1, 0.5}, {-2, 0.5}})},
        {L::R339, path({{0.25, 1}, {1, 1}, {1, 0.5}})},
        {L::R343, path({{0.5, 0}, {0.5, -0.25}, {1, -0.25}, {1, 0.25}, {1, 0.5}})},
        {L::R351, path({{0, 0.5}, {0, 0.8}, {-1, 0.8}, {-2, 0.8}})},
        {L::R403, path({{0.5, 0}, {0.5, 0.5}, {0.5, 1}})},
        {L::R435, path({{0.5, 1}, {0.5, 0.75}, {0.5, 0.5}})},
        {L::R467, path({{0.5, 1}, {0.5, 0.75}, {1, 0.75}, {0.5, 0.5}})},
        {L::R471, path({{0, 0.5}, {0.5, 0.5}, {0.5, 2}, {1, 0.5}})},
        {L::R479, path({{0, 0.5}, {0.5, 0.5}, {2, 0.5}, {3, 0.5}})},
        {L::R499, path({{0, 0.5}, {0.5, 0.5}, {0.5, 1}, {1, 0.5}})},
        {L::R503, path({{0, 0.5}, {-1, 0.5}, {0.5, 0.5}})},
    };
}

} // namespace stq::witness
