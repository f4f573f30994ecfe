#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

/// \file
/// Trajectory data model: trajectories as ordered, time-monotone point
/// relations, the trajectories relation keyed by tid, and property relations.

namespace stq {

/// One sampled location of a moving object.
struct TrajectoryPoint {
    std::int64_t order = 0;
    double x = 0.0;
    double y = 0.0;
    double tau = 0.0;

    friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

/// Raised when a point sequence violates the trajectory invariants.
class TrajectoryError : public std::runtime_error {
public:
    enum class Kind { EmptyTrajectory, NonMonotoneTime, NonFiniteValue, OrderGap };

    TrajectoryError(Kind kind, std::size_t index, const std::string& what)
        : std::runtime_error(what)
        , kind_(kind)
        , index_(index)
    {}

    Kind kind() const noexcept { return kind_; }

    /// Index of the offending point in the input sequence.
    std::size_t index() const noexcept { return index_; }

private:
    Kind kind_;
    std::size_t index_;
};

const char* to_string(TrajectoryError::Kind kind);

struct Segment {
    TrajectoryPoint start;
    TrajectoryPoint end;

    /// True for stationary objects (both endpoints at the same location).
    bool zero_length() const noexcept { return start.x == end.x && start.y == end.y; }

    friend bool operator==(const Segment&, const Segment&) = default;
};

/// An immutable, validated trajectory. Orders are exactly 0..n-1 and
/// timestamps strictly increase with order.
class Trajectory {
public:
    /// Validates an already-ordered point sequence (orders must be 0..n-1).
    static Trajectory from_points(std::vector<TrajectoryPoint> points);

    std::size_t size() const noexcept { return points_.size(); }
    std::span<const TrajectoryPoint> points() const noexcept { return points_; }
    const TrajectoryPoint& operator[](std::size_t i) const { return points_[i]; }

    /// Same locations and timestamps, traversed in reverse. Timestamps are
    /// mirrored (tau -> -tau) so the time invariant still holds.
    Trajectory reversed() const;

    friend bool operator==(const Trajectory&, const Trajectory&) = default;

private:
    explicit Trajectory(std::vector<TrajectoryPoint> points)
        : points_(std::move(points))
    {}

    std::vector<TrajectoryPoint> points_;
};

struct XYT {
    double x = 0.0;
    double y = 0.0;
    double tau = 0.0;
};

/// Builds a trajectory from (x, y, tau) samples, assigning orders 0..n-1.
Trajectory build_trajectory(std::span<const XYT> samples);

inline Trajectory build_trajectory(std::initializer_list<XYT> samples)
{
    return build_trajectory(std::span<const XYT>(samples.begin(), samples.size()));
}

const TrajectoryPoint& first_point(const Trajectory& t);
const TrajectoryPoint& last_point(const Trajectory& t);

/// All points except the first and the last; empty when n <= 2.
std::span<const TrajectoryPoint> inner_points(const Trajectory& t);

/// Consecutive point pairs, ordered by start order. Empty for n == 1.
std::vector<Segment> segments(const Trajectory& t);

struct TrajectoryRow {
    std::string tid;
    Trajectory trajectory;

    friend bool operator==(const TrajectoryRow&, const TrajectoryRow&) = default;
};

/// Rows with unique tids, in insertion order.
class TrajectoriesRelation {
public:
    TrajectoriesRelation() = default;
    explicit TrajectoriesRelation(std::vector<TrajectoryRow> rows);

    /// Throws std::invalid_argument on a duplicate tid.
    void add(std::string tid, Trajectory trajectory);

    std::span<const TrajectoryRow> rows() const noexcept { return rows_; }
    std::size_t size() const noexcept { return rows_.size(); }
    bool empty() const noexcept { return rows_.empty(); }

    const Trajectory* find(const std::string& tid) const;
    std::vector<std::string> tids() const;

    friend bool operator==(const TrajectoriesRelation&, const TrajectoriesRelation&) = default;

private:
    std::vector<TrajectoryRow> rows_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Scalar property value: string, integer, float or boolean.
using Scalar = std::variant<std::string, std::int64_t, double, bool>;

std::string scalar_to_string(const Scalar& v);

struct OrderValue {
    std::int64_t order = 0;
    Scalar value;

    friend bool operator==(const OrderValue&, const OrderValue&) = default;
};

struct PropertyRow {
    std::string tid;
    std::map<std::string, Scalar> trajectory_props;
    /// Point properties reference points by order, never by timestamp.
    std::map<std::string, std::vector<OrderValue>> point_props;

    friend bool operator==(const PropertyRow&, const PropertyRow&) = default;
};

class PropertyError : public std::runtime_error {
public:
    enum class Kind { UnknownTid, UnknownProperty, UnknownOrder, DuplicateTid };

    PropertyError(Kind kind, const std::string& what)
        : std::runtime_error(what)
        , kind_(kind)
    {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class PropertyRelation {
public:
    PropertyRelation() = default;

    /// Rows are kept sorted by tid.
    void add(PropertyRow row);

    std::span<const PropertyRow> rows() const noexcept { return rows_; }
    bool empty() const noexcept { return rows_.empty(); }
    const PropertyRow* find(const std::string& tid) const;

    /// Throws PropertyError when a row references a missing trajectory or
    /// point order.
    void check_references(const TrajectoriesRelation& trajectories) const;

    friend bool operator==(const PropertyRelation&, const PropertyRelation&) = default;

private:
    std::vector<PropertyRow> rows_;
};

struct PropertyRun {
    std::int64_t begin_order = 0;
    std::int64_t end_order = 0;
    Scalar value;

    friend bool operator==(const PropertyRun&, const PropertyRun&) = default;
};

/// Query-time view of a point property as maximal runs of consecutive
/// orders sharing a value. A gap in the orders also ends a run.
std::vector<PropertyRun> segment_property_view(const PropertyRelation& pr, const std::string& tid,
                                               const std::string& prop);

} // namespace stq
