#include "stq/evaluator.hpp"

#include <algorithm>
#include <exception>
#include <memory>

namespace stq {

EvalEnv& EvalEnv::bind(std::string name, Region r)
{
    bindings_.insert_or_assign(std::move(name), Binding{r});
    return *this;
}

EvalEnv& EvalEnv::bind(std::string name, Interval i)
{
    bindings_.insert_or_assign(std::move(name), Binding{i});
    return *this;
}

const Binding* EvalEnv::find(std::string_view name) const
{
    auto it = bindings_.find(name);
    return it == bindings_.end() ? nullptr : &it->second;
}

NameEnv EvalEnv::kinds() const
{
    NameEnv out;
    for (const auto& [name, b] : bindings_)
        out.emplace(name, std::holds_alternative<Region>(b) ? NameKind::Region : NameKind::Interval);
    return out;
}

// ---------------------------------------------------------------------------
// Strategies

ApproxStrategy uniform_strategy(int k)
{
    if (k < 0)
        throw std::invalid_argument("uniform strategy needs k >= 0");
    return {"uniform", [k](const Segment&) {
                std::vector<double> out;
                out.reserve(static_cast<std::size_t>(k));
                for (int i = 1; i <= k; ++i)
                    out.push_back(static_cast<double>(i) / (k + 1));
                return out;
            }};
}

const StrategyRegistry& StrategyRegistry::builtin()
{
    static const StrategyRegistry registry = [] {
        StrategyRegistry r;
        r.add("uniform", [](std::optional<int> k) { return uniform_strategy(k.value_or(10)); });
        return r;
    }();
    return registry;
}

void StrategyRegistry::add(std::string name, Factory factory) { factories_[std::move(name)] = std::move(factory); }

ApproxStrategy StrategyRegistry::make(const std::string& name, std::optional<int> parameter) const
{
    auto it = factories_.find(name);
    if (it == factories_.end())
        throw EvalError(EvalError::Kind::UnknownStrategy, "unknown approximation strategy '" + name + "'");
    return it->second(parameter);
}

Trajectory augment(const Trajectory& t, const ApproxStrategy& strategy)
{
    std::vector<TrajectoryPoint> out;
    out.reserve(t.size());
    std::int64_t order = 0;
    for (const auto& s : segments(t)) {
        out.push_back({order++, s.start.x, s.start.y, s.start.tau});
        std::vector<double> lambdas = strategy.point_generator(s);
        std::sort(lambdas.begin(), lambdas.end());
        for (double l : lambdas) {
            if (!(l > 0.0 && l < 1.0))
                continue;
            const Position p = lerp(s, l);
            // rounding may collapse nearby parameters onto the same timestamp
            if (!(out.back().tau < p.tau && p.tau < s.end.tau))
                continue;
            out.push_back({order++, p.x, p.y, p.tau});
        }
    }
    const auto& last = last_point(t);
    out.push_back({order, last.x, last.y, last.tau});
    return Trajectory::from_points(std::move(out));
}

// ---------------------------------------------------------------------------
// Binding

namespace {

using Node = BoundPredicate::Node;
using BoundAtom = BoundPredicate::BoundAtom;
using BoundClause = BoundPredicate::BoundClause;

Node bind_expr(const Expr& e, const EvalEnv& env)
{
    Node n;
    n.kind = e.kind;
    if (e.kind == Expr::Kind::Atom) {
        const Binding* b = env.find(e.atom.target);
        n.atom.point = e.atom.point.kind;
        n.atom.op = e.atom.op;
        n.atom.spatial = std::holds_alternative<Region>(*b);
        if (n.atom.spatial)
            n.atom.region = std::get<Region>(*b);
        else
            n.atom.interval = std::get<Interval>(*b);
        return n;
    }
    n.children.reserve(e.children.size());
    for (const auto& c : e.children)
        n.children.push_back(bind_expr(c, env));
    return n;
}

// --- strict, point-wise ----------------------------------------------------

bool atom_holds(const BoundAtom& a, const TrajectoryPoint& p)
{
    if (a.spatial) {
        const PointClass c = classify_point_region(p.x, p.y, a.region);
        switch (a.op) {
        case Op::Within: return c != PointClass::Exterior;
        case Op::Inside: return c == PointClass::Interior;
        case Op::Outside: return c == PointClass::Exterior;
        case Op::Before:
        case Op::After: return false; // rejected by validation
        }
        return false;
    }
    const TimeClass c = classify_time_interval(p.tau, a.interval);
    switch (a.op) {
    case Op::Within: return c == TimeClass::Interior || c == TimeClass::Boundary;
    case Op::Inside: return c == TimeClass::Interior;
    case Op::Outside: return c == TimeClass::Before || c == TimeClass::After;
    case Op::Before: return c == TimeClass::Before;
    case Op::After: return c == TimeClass::After;
    }
    return false;
}

const TrajectoryPoint& resolve(PointRef::Kind k, const TrajectoryPoint& bound, const Trajectory& t)
{
    switch (k) {
    case PointRef::Kind::First: return first_point(t);
    case PointRef::Kind::Last: return last_point(t);
    case PointRef::Kind::Variable: return bound;
    }
    return bound;
}

bool node_holds(const Node& n, const TrajectoryPoint& bound, const Trajectory& t)
{
    switch (n.kind) {
    case Expr::Kind::Atom: return atom_holds(n.atom, resolve(n.atom.point, bound, t));
    case Expr::Kind::Not: return !node_holds(n.children.front(), bound, t);
    case Expr::Kind::And:
        return std::all_of(n.children.begin(), n.children.end(),
                           [&](const Node& c) { return node_holds(c, bound, t); });
    case Expr::Kind::Or:
        return std::any_of(n.children.begin(), n.children.end(),
                           [&](const Node& c) { return node_holds(c, bound, t); });
    }
    return false;
}

std::span<const TrajectoryPoint> domain_points(Domain d, const Trajectory& t)
{
    return d == Domain::All ? t.points() : inner_points(t);
}

bool clause_strict(const BoundClause& c, const Trajectory& t)
{
    if (c.kind == Clause::Kind::Ground)
        return node_holds(c.body, first_point(t), t);
    const auto pts = domain_points(c.domain, t);
    auto holds = [&](const TrajectoryPoint& p) { return node_holds(c.body, p, t); };
    if (c.quantifier == Quantifier::Exists)
        return std::any_of(pts.begin(), pts.end(), holds);
    return std::all_of(pts.begin(), pts.end(), holds);
}

// --- relaxed, per-segment parameter sets -----------------------------------

ParamSet atom_params(const BoundAtom& a, const Segment& s)
{
    if (a.spatial) {
        switch (a.op) {
        case Op::Within: return segment_region_closed(s, a.region);
        case Op::Inside: return segment_region_params(s, a.region, PointClass::Interior);
        case Op::Outside: return segment_region_params(s, a.region, PointClass::Exterior);
        case Op::Before:
        case Op::After: return ParamSet::none();
        }
        return ParamSet::none();
    }
    switch (a.op) {
    case Op::Within: return segment_interval_closed(s, a.interval);
    case Op::Inside: return segment_interval_params(s, a.interval, TimeClass::Interior);
    case Op::Outside: return segment_interval_closed(s, a.interval).complement();
    case Op::Before: return segment_interval_params(s, a.interval, TimeClass::Before);
    case Op::After: return segment_interval_params(s, a.interval, TimeClass::After);
    }
    return ParamSet::none();
}

ParamSet node_params(const Node& n, const Segment& s)
{
    switch (n.kind) {
    case Expr::Kind::Atom: return atom_params(n.atom, s);
    case Expr::Kind::Not: return node_params(n.children.front(), s).complement();
    case Expr::Kind::And: {
        ParamSet acc = node_params(n.children.front(), s);
        for (std::size_t i = 1; i < n.children.size() && !acc.empty(); ++i)
            acc = acc.intersect(node_params(n.children[i], s));
        return acc;
    }
    case Expr::Kind::Or: {
        ParamSet acc = node_params(n.children.front(), s);
        for (std::size_t i = 1; i < n.children.size() && !acc.is_unit(); ++i)
            acc = acc.unite(node_params(n.children[i], s));
        return acc;
    }
    }
    return ParamSet::none();
}

bool clause_relaxed(const BoundClause& c, const Trajectory& t)
{
    if (c.kind == Clause::Kind::Ground || t.size() < 2)
        return clause_strict(c, t);

    const std::size_t m = t.size() - 1;
    const bool inner = c.domain == Domain::Inner;
    const bool exists = c.quantifier == Quantifier::Exists;
    for (std::size_t k = 0; k < m; ++k) {
        const Segment s{t[k], t[k + 1]};
        // Segment k owns [0,1); the last segment also owns its end vertex.
        // TFL drops the first and the last vertex of the polyline.
        ParamSpan own;
        own.lo_closed = !(inner && k == 0);
        own.hi_closed = k == m - 1 && !inner;
        const ParamSet owned = ParamSet::single(own);
        const ParamSet body = node_params(c.body, s);
        if (exists) {
            if (!body.intersect(owned).empty())
                return true;
        } else if (!owned.subset_of(body)) {
            return false;
        }
    }
    return !exists;
}

} // namespace

BoundPredicate::BoundPredicate(const PredicateAst& ast, const EvalEnv& env)
{
    auto diags = validate(ast, env.kinds());
    if (!diags.empty())
        throw EvalError(EvalError::Kind::ValidationFailed, "predicate failed validation: " + diags.front().message);
    clauses_.reserve(ast.clauses.size());
    for (const auto& c : ast.clauses)
        clauses_.push_back({c.kind, c.quantifier, c.domain, bind_expr(c.body, env)});
}

bool BoundPredicate::strict(const Trajectory& t) const
{
    return std::all_of(clauses_.begin(), clauses_.end(), [&](const BoundClause& c) { return clause_strict(c, t); });
}

bool BoundPredicate::relaxed(const Trajectory& t) const
{
    return std::all_of(clauses_.begin(), clauses_.end(), [&](const BoundClause& c) { return clause_relaxed(c, t); });
}

bool BoundPredicate::approximated(const Trajectory& t, const ApproxStrategy& strategy) const
{
    return strict(augment(t, strategy));
}

bool eval_strict(const PredicateAst& ast, const Trajectory& t, const EvalEnv& env)
{
    return BoundPredicate(ast, env).strict(t);
}

bool eval_relaxed(const PredicateAst& ast, const Trajectory& t, const EvalEnv& env)
{
    return BoundPredicate(ast, env).relaxed(t);
}

bool eval_approximated(const PredicateAst& ast, const Trajectory& t, const EvalEnv& env,
                       const ApproxStrategy& strategy)
{
    return BoundPredicate(ast, env).approximated(t, strategy);
}

namespace {

std::function<bool(const Trajectory&)> make_evaluator(const PredicateAst& ast, const EvalEnv& env,
                                                      const Strictness& s, const StrategyRegistry& registry)
{
    auto bound = std::make_shared<const BoundPredicate>(ast, env);
    switch (s.mode) {
    case Strictness::Mode::Strict: return [bound](const Trajectory& t) { return bound->strict(t); };
    case Strictness::Mode::Relaxed: return [bound](const Trajectory& t) { return bound->relaxed(t); };
    case Strictness::Mode::Approximated: {
        auto strategy = std::make_shared<const ApproxStrategy>(registry.make(s.strategy, s.parameter));
        return [bound, strategy](const Trajectory& t) { return bound->approximated(t, *strategy); };
    }
    }
    return {};
}

} // namespace

bool evaluate(const PredicateAst& ast, const Trajectory& t, const EvalEnv& env, const Strictness& s,
              const StrategyRegistry& registry)
{
    return make_evaluator(ast, env, s, registry)(t);
}

TrajectoriesRelation select_st_serial(const TrajectoriesRelation& rel, const PredicateAst& ast,
                                      const EvalEnv& env, const Strictness& s, const StrategyRegistry& registry)
{
    const auto holds = make_evaluator(ast, env, s, registry);
    TrajectoriesRelation out;
    for (const auto& row : rel.rows())
        if (holds(row.trajectory))
            out.add(row.tid, row.trajectory);
    return out;
}

TrajectoriesRelation select_st(const TrajectoriesRelation& rel, const PredicateAst& ast, const EvalEnv& env,
                               const Strictness& s, const StrategyRegistry& registry)
{
    const auto holds = make_evaluator(ast, env, s, registry);
    const auto rows = rel.rows();
    const auto n = static_cast<std::ptrdiff_t>(rows.size());
    std::vector<unsigned char> keep(rows.size(), 0);
    std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            keep[static_cast<std::size_t>(i)] = holds(rows[static_cast<std::size_t>(i)].trajectory) ? 1 : 0;
        } catch (...) {
#pragma omp critical(stq_select_failure)
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);

    TrajectoriesRelation out;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (keep[i])
            out.add(rows[i].tid, rows[i].trajectory);
    return out;
}

} // namespace stq
