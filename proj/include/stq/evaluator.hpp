#pragma once

#include "stq/core_model.hpp"
#include "stq/geometry.hpp"
#include "stq/predicate.hpp"

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

/// \file
/// Spatio-temporal selection: evaluation of predicates over trajectories.
///
/// Strict evaluation quantifies over the recorded points only. Relaxed
/// evaluation quantifies over the continuum of the piecewise-linear
/// interpolation, computed exactly with per-segment parameter sets. Under
/// relaxed evaluation `TFL` is the whole polyline minus its two endpoints.
/// Approximated evaluation is strict evaluation over the trajectory
/// augmented with the points a user strategy injects on each segment.

namespace stq {

using Binding = std::variant<Region, Interval>;

class EvalEnv {
public:
    EvalEnv() = default;

    EvalEnv& bind(std::string name, Region r);
    EvalEnv& bind(std::string name, Interval i);

    const Binding* find(std::string_view name) const;
    NameEnv kinds() const;
    const std::map<std::string, Binding, std::less<>>& bindings() const noexcept { return bindings_; }

private:
    std::map<std::string, Binding, std::less<>> bindings_;
};

/// Injects intermediate interpolation parameters per segment.
struct ApproxStrategy {
    std::string name;
    std::function<std::vector<double>(const Segment&)> point_generator;
};

/// Named strategy factories. A factory receives the optional integer
/// parameter given in "approx:<name>:<k>".
class StrategyRegistry {
public:
    using Factory = std::function<ApproxStrategy(std::optional<int>)>;

    /// Registry holding the built-in "uniform" strategy (k evenly spaced
    /// interior points per segment, default k = 10).
    static const StrategyRegistry& builtin();

    void add(std::string name, Factory factory);
    bool contains(const std::string& name) const { return factories_.count(name) != 0; }

    /// Throws EvalError(UnknownStrategy).
    ApproxStrategy make(const std::string& name, std::optional<int> parameter) const;

private:
    std::map<std::string, Factory> factories_;
};

/// k evenly spaced parameters i/(k+1), i = 1..k.
ApproxStrategy uniform_strategy(int k);

class EvalError : public std::runtime_error {
public:
    enum class Kind { ValidationFailed, UnknownStrategy };

    EvalError(Kind kind, const std::string& what)
        : std::runtime_error(what)
        , kind_(kind)
    {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// A predicate whose names have been resolved against an environment.
/// Construct once and evaluate against many trajectories.
class BoundPredicate {
public:
    /// Throws EvalError(ValidationFailed) if validate(ast, env.kinds()) is
    /// non-empty.
    BoundPredicate(const PredicateAst& ast, const EvalEnv& env);

    bool strict(const Trajectory& t) const;
    bool relaxed(const Trajectory& t) const;
    bool approximated(const Trajectory& t, const ApproxStrategy& strategy) const;

    struct BoundAtom {
        PointRef::Kind point;
        Op op;
        bool spatial;
        Region region;
        Interval interval;
    };

    struct Node {
        Expr::Kind kind;
        BoundAtom atom;
        std::vector<Node> children;
    };

    struct BoundClause {
        Clause::Kind kind;
        Quantifier quantifier;
        Domain domain;
        Node body;
    };

private:
    std::vector<BoundClause> clauses_;
};

bool eval_strict(const PredicateAst& ast, const Trajectory& t, const EvalEnv& env);
bool eval_relaxed(const PredicateAst& ast, const Trajectory& t, const EvalEnv& env);
bool eval_approximated(const PredicateAst& ast, const Trajectory& t, const EvalEnv& env,
                       const ApproxStrategy& strategy);

/// Dispatches on the strictness mode. Approximated strategies are looked up
/// in `registry`.
bool evaluate(const PredicateAst& ast, const Trajectory& t, const EvalEnv& env, const Strictness& s,
              const StrategyRegistry& registry = StrategyRegistry::builtin());

/// Trajectory augmented with the strategy's points on every segment.
/// Parameters outside the open interval (0,1) and duplicates are dropped.
Trajectory augment(const Trajectory& t, const ApproxStrategy& strategy);

/// Spatio-temporal selection. Rows are evaluated in parallel; the result
/// keeps input row order and is identical to select_st_serial.
TrajectoriesRelation select_st(const TrajectoriesRelation& rel, const PredicateAst& ast, const EvalEnv& env,
                               const Strictness& s,
                               const StrategyRegistry& registry = StrategyRegistry::builtin());

/// Single-threaded reference implementation of select_st.
TrajectoriesRelation select_st_serial(const TrajectoriesRelation& rel, const PredicateAst& ast,
                                      const EvalEnv& env, const Strictness& s,
                                      const StrategyRegistry& registry = StrategyRegistry::builtin());

} // namespace stq
