#include "stq/core_model.hpp"
#include "stq/decimal.hpp"

#include <algorithm>
#include <cmath>

namespace stq {

const char* to_string(TrajectoryError::Kind kind)
{
    switch (kind) {
    case TrajectoryError::Kind::EmptyTrajectory: return "EmptyTrajectory";
    case TrajectoryError::Kind::NonMonotoneTime: return "NonMonotoneTime";
    case TrajectoryError::Kind::NonFiniteValue: return "NonFiniteValue";
    case TrajectoryError::Kind::OrderGap: return "OrderGap";
    }
    return "?";
}

Trajectory Trajectory::from_points(std::vector<TrajectoryPoint> points)
{
    using Kind = TrajectoryError::Kind;
    if (points.empty())
        throw TrajectoryError(Kind::EmptyTrajectory, 0, "trajectory has no points");

    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.tau)) {
            throw TrajectoryError(Kind::NonFiniteValue, i,
                                  "non-finite value at index " + std::to_string(i));
        }
        if (p.order != static_cast<std::int64_t>(i)) {
            throw TrajectoryError(Kind::OrderGap, i,
                                  "expected order " + std::to_string(i) + " at index " +
                                      std::to_string(i) + ", found " + std::to_string(p.order));
        }
        if (i > 0 && !(points[i - 1].tau < p.tau)) {
            throw TrajectoryError(Kind::NonMonotoneTime, i,
                                  "timestamp not strictly increasing at index " +
                                      std::to_string(i));
        }
    }
    return Trajectory(std::move(points));
}

Trajectory Trajectory::reversed() const
{
    std::vector<TrajectoryPoint> out;
    out.reserve(points_.size());
    std::int64_t order = 0;
    for (auto it = points_.rbegin(); it != points_.rend(); ++it)
        out.push_back({order++, it->x, it->y, -it->tau});
    return Trajectory(std::move(out));
}

Trajectory build_trajectory(std::span<const XYT> samples)
{
    std::vector<TrajectoryPoint> points;
    points.reserve(samples.size());
    std::int64_t order = 0;
    for (const auto& s : samples)
        points.push_back({order++, s.x, s.y, s.tau});
    return Trajectory::from_points(std::move(points));
}

const TrajectoryPoint& first_point(const Trajectory& t) { return t.points().front(); }

const TrajectoryPoint& last_point(const Trajectory& t) { return t.points().back(); }

std::span<const TrajectoryPoint> inner_points(const Trajectory& t)
{
    if (t.size() <= 2)
        return {};
    return t.points().subspan(1, t.size() - 2);
}

std::vector<Segment> segments(const Trajectory& t)
{
    std::vector<Segment> out;
    if (t.size() < 2)
        return out;
    out.reserve(t.size() - 1);
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        out.push_back({t[i], t[i + 1]});
    return out;
}

TrajectoriesRelation::TrajectoriesRelation(std::vector<TrajectoryRow> rows)
{
    rows_.reserve(rows.size());
    for (auto& r : rows)
        add(std::move(r.tid), std::move(r.trajectory));
}

void TrajectoriesRelation::add(std::string tid, Trajectory trajectory)
{
    if (find(tid) != nullptr)
        throw std::invalid_argument("duplicate tid '" + tid + "'");
    index_.emplace(tid, rows_.size());
    rows_.push_back({std::move(tid), std::move(trajectory)});
}

const Trajectory* TrajectoriesRelation::find(const std::string& tid) const
{
    auto it = index_.find(tid);
    return it == index_.end() ? nullptr : &rows_[it->second].trajectory;
}

std::vector<std::string> TrajectoriesRelation::tids() const
{
    std::vector<std::string> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_)
        out.push_back(r.tid);
    return out;
}

std::string scalar_to_string(const Scalar& v)
{
    struct Visitor {
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(double d) const { return format_decimal(d); }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
    };
    return std::visit(Visitor{}, v);
}

void PropertyRelation::add(PropertyRow row)
{
    auto it = std::lower_bound(rows_.begin(), rows_.end(), row.tid,
                               [](const PropertyRow& r, const std::string& tid) { return r.tid < tid; });
    if (it != rows_.end() && it->tid == row.tid)
        throw PropertyError(PropertyError::Kind::DuplicateTid, "duplicate property row for tid '" + row.tid + "'");
    for (auto& [name, values] : row.point_props) {
        std::stable_sort(values.begin(), values.end(),
                         [](const OrderValue& a, const OrderValue& b) { return a.order < b.order; });
    }
    rows_.insert(it, std::move(row));
}

const PropertyRow* PropertyRelation::find(const std::string& tid) const
{
    auto it = std::lower_bound(rows_.begin(), rows_.end(), tid,
                               [](const PropertyRow& r, const std::string& key) { return r.tid < key; });
    if (it == rows_.end() || it->tid != tid)
        return nullptr;
    return &*it;
}

void PropertyRelation::check_references(const TrajectoriesRelation& trajectories) const
{
    for (const auto& row : rows_) {
        const Trajectory* t = trajectories.find(row.tid);
        if (t == nullptr)
            throw PropertyError(PropertyError::Kind::UnknownTid, "property row references unknown tid '" + row.tid + "'");
        const auto n = static_cast<std::int64_t>(t->size());
        for (const auto& [name, values] : row.point_props) {
            for (const auto& ov : values) {
                if (ov.order < 0 || ov.order >= n) {
                    throw PropertyError(PropertyError::Kind::UnknownOrder,
                                        "point property '" + name + "' of tid '" + row.tid +
                                            "' references missing order " + std::to_string(ov.order));
                }
            }
        }
    }
}

std::vector<PropertyRun> segment_property_view(const PropertyRelation& pr, const std::string& tid,
                                               const std::string& prop)
{
    const PropertyRow* row = pr.find(tid);
    if (row == nullptr)
        throw PropertyError(PropertyError::Kind::UnknownTid, "unknown tid '" + tid + "'");
    auto it = row->point_props.find(prop);
    if (it == row->point_props.end())
        throw PropertyError(PropertyError::Kind::UnknownProperty, "unknown point property '" + prop + "'");

    std::vector<PropertyRun> runs;
    for (const auto& ov : it->second) {
        if (!runs.empty() && runs.back().end_order + 1 == ov.order && runs.back().value == ov.value) {
            runs.back().end_order = ov.order;
        } else {
            runs.push_back({ov.order, ov.order, ov.value});
        }
    }
    return runs;
}

} // namespace stq
