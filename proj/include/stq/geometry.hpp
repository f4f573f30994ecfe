#pragma once

#include "stq/core_model.hpp"

#include <string>
#include <vector>

/// \file
/// Exact classification of points and segments against rectangular regions
/// and closed time intervals.
///
/// All comparisons are exact; there is no epsilon anywhere. A point on the
/// perimeter of a region is Boundary, and Boundary is neither contained
/// properly nor "not contained". Callers wanting a tolerance must snap their
/// coordinates before classification.

namespace stq {

/// Axis-aligned rectangle with x_min < x_max and y_min < y_max.
struct Region {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    /// Throws std::invalid_argument on a degenerate or non-finite rectangle.
    static Region make(double x_min, double y_min, double x_max, double y_max);

    friend bool operator==(const Region&, const Region&) = default;
};

/// Closed time interval [tau_s, tau_e], tau_s < tau_e.
struct Interval {
    double tau_s = 0.0;
    double tau_e = 0.0;

    static Interval make(double tau_s, double tau_e);

    friend bool operator==(const Interval&, const Interval&) = default;
};

enum class PointClass { Interior, Boundary, Exterior };
enum class TimeClass { Interior, Boundary, Before, After };

const char* to_string(PointClass c);
const char* to_string(TimeClass c);

PointClass classify_point_region(double x, double y, const Region& r);
TimeClass classify_time_interval(double tau, const Interval& i);

/// A sub-interval of [0,1] with independent endpoint flags.
struct ParamSpan {
    double lo = 0.0;
    double hi = 1.0;
    bool lo_closed = true;
    bool hi_closed = true;

    bool empty() const noexcept { return lo > hi || (lo == hi && !(lo_closed && hi_closed)); }
    bool contains(double t) const noexcept
    {
        return (lo < t || (lo_closed && lo == t)) && (t < hi || (hi_closed && hi == t));
    }

    friend bool operator==(const ParamSpan&, const ParamSpan&) = default;
};

/// Finite union of disjoint, sorted, non-empty sub-intervals of [0,1].
/// Touching components are merged on construction.
class ParamSet {
public:
    ParamSet() = default;
    explicit ParamSet(std::vector<ParamSpan> spans);

    static ParamSet none() { return {}; }
    static ParamSet unit() { return ParamSet({ParamSpan{}}); }
    static ParamSet single(ParamSpan s) { return ParamSet({s}); }

    const std::vector<ParamSpan>& spans() const noexcept { return spans_; }
    bool empty() const noexcept { return spans_.empty(); }
    bool is_unit() const noexcept { return spans_.size() == 1 && spans_.front() == ParamSpan{}; }
    bool contains(double t) const noexcept;

    /// Complement within [0,1].
    ParamSet complement() const;
    ParamSet intersect(const ParamSet& other) const;
    ParamSet unite(const ParamSet& other) const;
    bool subset_of(const ParamSet& other) const;

    std::string to_string() const;

    friend bool operator==(const ParamSet&, const ParamSet&) = default;

private:
    std::vector<ParamSpan> spans_;
};

struct Position {
    double x = 0.0;
    double y = 0.0;
    double tau = 0.0;
};

/// start + lambda * (end - start), component-wise. Throws std::out_of_range
/// unless 0 <= lambda <= 1.
Position lerp(const Segment& s, double lambda);

/// {lambda in [0,1] : classify_point_region(lerp(s, lambda), r) == c}.
ParamSet segment_region_params(const Segment& s, const Region& r, PointClass c);

/// {lambda in [0,1] : classify_time_interval(lerp(s, lambda).tau, i) == c}.
ParamSet segment_interval_params(const Segment& s, const Interval& i, TimeClass c);

/// Parameters whose position lies in the closed rectangle (Interior or Boundary).
ParamSet segment_region_closed(const Segment& s, const Region& r);

/// Parameters whose timestamp lies in the closed interval.
ParamSet segment_interval_closed(const Segment& s, const Interval& i);

} // namespace stq
