#include "stq/geometry.hpp"

#include "stq/decimal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stq {

Region Region::make(double x_min, double y_min, double x_max, double y_max)
{
    if (!std::isfinite(x_min) || !std::isfinite(y_min) || !std::isfinite(x_max) || !std::isfinite(y_max))
        throw std::invalid_argument("region bounds must be finite");
    if (!(x_min < x_max) || !(y_min < y_max))
        throw std::invalid_argument("region must satisfy x_min < x_max and y_min < y_max");
    return {x_min, y_min, x_max, y_max};
}

Interval Interval::make(double tau_s, double tau_e)
{
    if (!std::isfinite(tau_s) || !std::isfinite(tau_e))
        throw std::invalid_argument("interval bounds must be finite");
    if (!(tau_s < tau_e))
        throw std::invalid_argument("interval must satisfy tau_s < tau_e");
    return {tau_s, tau_e};
}

const char* to_string(PointClass c)
{
    switch (c) {
    case PointClass::Interior: return "Interior";
    case PointClass::Boundary: return "Boundary";
    case PointClass::Exterior: return "Exterior";
    }
    return "?";
}

const char* to_string(TimeClass c)
{
    switch (c) {
    case TimeClass::Interior: return "Interior";
    case TimeClass::Boundary: return "Boundary";
    case TimeClass::Before: return "Before";
    case TimeClass::After: return "After";
    }
    return "?";
}

PointClass classify_point_region(double x, double y, const Region& r)
{
    if (x < r.x_min || x > r.x_max || y < r.y_min || y > r.y_max)
        return PointClass::Exterior;
    if (r.x_min < x && x < r.x_max && r.y_min < y && y < r.y_max)
        return PointClass::Interior;
    return PointClass::Boundary;
}

TimeClass classify_time_interval(double tau, const Interval& i)
{
    if (tau < i.tau_s)
        return TimeClass::Before;
    if (tau > i.tau_e)
        return TimeClass::After;
    if (tau == i.tau_s || tau == i.tau_e)
        return TimeClass::Boundary;
    return TimeClass::Interior;
}

// ---------------------------------------------------------------------------
// ParamSet

namespace {

bool starts_before(const ParamSpan& a, const ParamSpan& b)
{
    if (a.lo != b.lo)
        return a.lo < b.lo;
    return a.lo_closed && !b.lo_closed;
}

// True when b begins inside or immediately adjacent to a, so their union is
// one span. Requires starts_before(a, b) or equal starts.
bool touches(const ParamSpan& a, const ParamSpan& b)
{
    return b.lo < a.hi || (b.lo == a.hi && (a.hi_closed || b.lo_closed));
}

} // namespace

ParamSet::ParamSet(std::vector<ParamSpan> spans)
{
    std::erase_if(spans, [](const ParamSpan& s) { return s.empty(); });
    std::sort(spans.begin(), spans.end(), starts_before);
    for (const auto& s : spans) {
        if (!spans_.empty() && touches(spans_.back(), s)) {
            auto& last = spans_.back();
            if (s.hi > last.hi) {
                last.hi = s.hi;
                last.hi_closed = s.hi_closed;
            } else if (s.hi == last.hi) {
                last.hi_closed = last.hi_closed || s.hi_closed;
            }
        } else {
            spans_.push_back(s);
        }
    }
}

bool ParamSet::contains(double t) const noexcept
{
    return std::any_of(spans_.begin(), spans_.end(), [t](const ParamSpan& s) { return s.contains(t); });
}

ParamSet ParamSet::complement() const
{
    std::vector<ParamSpan> out;
    double cur = 0.0;
    bool cur_closed = true;
    for (const auto& s : spans_) {
        out.push_back({cur, s.lo, cur_closed, !s.lo_closed});
        cur = s.hi;
        cur_closed = !s.hi_closed;
    }
    out.push_back({cur, 1.0, cur_closed, true});
    return ParamSet(std::move(out));
}

ParamSet ParamSet::intersect(const ParamSet& other) const
{
    std::vector<ParamSpan> out;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < spans_.size() && j < other.spans_.size()) {
        const auto& a = spans_[i];
        const auto& b = other.spans_[j];
        ParamSpan s;
        if (a.lo != b.lo) {
            s.lo = std::max(a.lo, b.lo);
            s.lo_closed = a.lo > b.lo ? a.lo_closed : b.lo_closed;
        } else {
            s.lo = a.lo;
            s.lo_closed = a.lo_closed && b.lo_closed;
        }
        if (a.hi != b.hi) {
            s.hi = std::min(a.hi, b.hi);
            s.hi_closed = a.hi < b.hi ? a.hi_closed : b.hi_closed;
        } else {
            s.hi = a.hi;
            s.hi_closed = a.hi_closed && b.hi_closed;
        }
        out.push_back(s);
        // advance whichever span ends first
        const bool a_ends_first = a.hi < b.hi || (a.hi == b.hi && !a.hi_closed);
        if (a_ends_first)
            ++i;
        else
            ++j;
    }
    return ParamSet(std::move(out));
}

ParamSet ParamSet::unite(const ParamSet& other) const
{
    std::vector<ParamSpan> all = spans_;
    all.insert(all.end(), other.spans_.begin(), other.spans_.end());
    return ParamSet(std::move(all));
}

bool ParamSet::subset_of(const ParamSet& other) const { return intersect(other) == *this; }

std::string ParamSet::to_string() const
{
    if (spans_.empty())
        return "{}";
    std::string out;
    for (const auto& s : spans_) {
        if (!out.empty())
            out += " u ";
        if (s.lo == s.hi) {
            out += "{" + format_decimal(s.lo) + "}";
            continue;
        }
        out += s.lo_closed ? "[" : "(";
        out += format_decimal(s.lo) + "," + format_decimal(s.hi);
        out += s.hi_closed ? "]" : ")";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Segment parameterisation

Position lerp(const Segment& s, double lambda)
{
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::out_of_range("interpolation parameter outside [0,1]");
    return {s.start.x + lambda * (s.end.x - s.start.x), s.start.y + lambda * (s.end.y - s.start.y),
            s.start.tau + lambda * (s.end.tau - s.start.tau)};
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool in_range(double a, double lo, double hi, bool strict)
{
    return strict ? (lo < a && a < hi) : (lo <= a && a <= hi);
}

// {lambda in [0,1] : a(lambda) in (lo,hi) or [lo,hi]} for the linear
// coordinate a(lambda) = a0 + lambda * (a1 - a0). Either bound may be
// infinite. The result is convex since a is monotone. Membership of the two
// endpoints is decided from the exact vertex coordinates so that the
// computed crossing parameters can never disagree with vertex
// classification after rounding.
ParamSet axis_params(double a0, double a1, double lo, double hi, bool strict)
{
    const bool in0 = in_range(a0, lo, hi, strict);
    const bool in1 = in_range(a1, lo, hi, strict);
    if (in0 && in1)
        return ParamSet::unit();
    if (a0 == a1)
        return ParamSet::none();

    const double d = a1 - a0;
    const double t_lo = std::isinf(lo) ? (d > 0 ? -kInf : kInf) : (lo - a0) / d;
    const double t_hi = std::isinf(hi) ? (d > 0 ? kInf : -kInf) : (hi - a0) / d;

    ParamSpan span;
    span.lo = std::min(t_lo, t_hi);
    span.hi = std::max(t_lo, t_hi);
    span.lo_closed = !strict;
    span.hi_closed = !strict;

    if (in0) {
        span.lo = 0.0;
        span.lo_closed = true;
    } else if (span.lo <= 0.0) {
        span.lo = 0.0;
        span.lo_closed = false;
    }
    if (in1) {
        span.hi = 1.0;
        span.hi_closed = true;
    } else if (span.hi >= 1.0) {
        span.hi = 1.0;
        span.hi_closed = false;
    }
    return ParamSet::single(span);
}

ParamSet region_open(const Segment& s, const Region& r)
{
    return axis_params(s.start.x, s.end.x, r.x_min, r.x_max, true)
        .intersect(axis_params(s.start.y, s.end.y, r.y_min, r.y_max, true));
}

ParamSet interval_open(const Segment& s, const Interval& i)
{
    return axis_params(s.start.tau, s.end.tau, i.tau_s, i.tau_e, true);
}

} // namespace

ParamSet segment_region_closed(const Segment& s, const Region& r)
{
    return axis_params(s.start.x, s.end.x, r.x_min, r.x_max, false)
        .intersect(axis_params(s.start.y, s.end.y, r.y_min, r.y_max, false));
}

ParamSet segment_interval_closed(const Segment& s, const Interval& i)
{
    return axis_params(s.start.tau, s.end.tau, i.tau_s, i.tau_e, false);
}

ParamSet segment_region_params(const Segment& s, const Region& r, PointClass c)
{
    switch (c) {
    case PointClass::Interior: return region_open(s, r);
    case PointClass::Boundary: return segment_region_closed(s, r).intersect(region_open(s, r).complement());
    case PointClass::Exterior: return segment_region_closed(s, r).complement();
    }
    return {};
}

ParamSet segment_interval_params(const Segment& s, const Interval& i, TimeClass c)
{
    switch (c) {
    case TimeClass::Interior: return interval_open(s, i);
    case TimeClass::Boundary:
        return segment_interval_closed(s, i).intersect(interval_open(s, i).complement());
    case TimeClass::Before: return axis_params(s.start.tau, s.end.tau, -kInf, i.tau_s, true);
    case TimeClass::After: return axis_params(s.start.tau, s.end.tau, i.tau_e, kInf, true);
    }
    return {};
}

} // namespace stq
