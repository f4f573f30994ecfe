#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

/// \file
/// Spatio-temporal predicate language.
///
/// A predicate is a conjunction of clauses. Each clause is either a
/// quantified formula over the points of a trajectory (all points `T` or the
/// inner points `TFL`, i.e. all except the first and the last), or a ground
/// boolean formula over the first (`pf`) and last (`pl`) point.
///
/// Operators, with their set-membership reading:
///
///     WITHIN   contained: interior or boundary
///     INSIDE   properly contained: interior only
///     OUTSIDE  not contained: strictly exterior
///     BEFORE   earlier than the start of an interval
///     AFTER    later than the end of an interval
///
/// A boundary point is neither INSIDE nor OUTSIDE. Disjunction is only
/// available inside a single clause body; clauses are always conjoined.

namespace stq {

enum class Op { Within, Inside, Outside, Before, After };
enum class Quantifier { Exists, ForAll };
enum class Domain { All, Inner };

const char* keyword(Op op);
const char* keyword(Quantifier q);
const char* keyword(Domain d);

struct PointRef {
    enum class Kind { Variable, First, Last };
    Kind kind = Kind::Variable;
    std::string name; ///< variable name for Kind::Variable

    static PointRef variable(std::string n) { return {Kind::Variable, std::move(n)}; }
    static PointRef first() { return {Kind::First, {}}; }
    static PointRef last() { return {Kind::Last, {}}; }

    friend bool operator==(const PointRef&, const PointRef&) = default;
};

struct Atom {
    PointRef point;
    Op op = Op::Within;
    std::string target; ///< name of a Region or Interval

    friend bool operator==(const Atom&, const Atom&) = default;
};

/// Boolean formula over atoms. And/Or nodes are n-ary (at least two
/// children), Not has exactly one child.
struct Expr {
    enum class Kind { Atom, Not, And, Or };
    Kind kind = Kind::Atom;
    Atom atom;
    std::vector<Expr> children;

    static Expr make_atom(PointRef p, Op op, std::string target);
    static Expr make_not(Expr e);
    static Expr make_and(std::vector<Expr> es);
    static Expr make_or(std::vector<Expr> es);

    friend bool operator==(const Expr&, const Expr&) = default;
};

struct Clause {
    enum class Kind { Quantified, Ground };
    Kind kind = Kind::Ground;
    Quantifier quantifier = Quantifier::Exists;
    std::string variable;
    Domain domain = Domain::All;
    Expr body;

    static Clause quantified(Quantifier q, std::string var, Domain d, Expr body);
    static Clause ground(Expr body);

    friend bool operator==(const Clause&, const Clause&) = default;
};

struct PredicateAst {
    std::vector<Clause> clauses;

    friend bool operator==(const PredicateAst&, const PredicateAst&) = default;
};

/// Kinds of named objects a predicate can refer to.
enum class NameKind { Region, Interval };

using NameEnv = std::map<std::string, NameKind, std::less<>>;

struct Diagnostic {
    enum class Kind { UnknownName, TypeError, UnboundVariable, EndpointUnderQuantifier };
    Kind kind;
    std::string message;
};

const char* to_string(Diagnostic::Kind kind);

class PredicateError : public std::runtime_error {
public:
    enum class Kind { SyntaxError, UnknownName, TypeError, UnboundVariable, EndpointUnderQuantifier };

    PredicateError(Kind kind, std::size_t position, std::string expected, const std::string& what)
        : std::runtime_error(what)
        , kind_(kind)
        , position_(position)
        , expected_(std::move(expected))
    {}

    Kind kind() const noexcept { return kind_; }

    /// Byte offset into the source text (syntax errors only).
    std::size_t position() const noexcept { return position_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    Kind kind_;
    std::size_t position_;
    std::string expected_;
};

/// Parses predicate text. Throws PredicateError(SyntaxError) with the byte
/// position of the offending token. The shorthand `pf, pl INSIDE R`
/// desugars to `pf INSIDE R AND pl INSIDE R`.
PredicateAst parse_predicate(std::string_view text);

/// Parses and validates; the first diagnostic is thrown as a PredicateError.
PredicateAst parse_predicate(std::string_view text, const NameEnv& env);

/// Canonical text; parse_predicate(format_predicate(a)) == a.
std::string format_predicate(const PredicateAst& ast);
std::string format_expr(const Expr& e);

std::vector<Diagnostic> validate(const PredicateAst& ast, const NameEnv& env);

/// Evaluation mode for predicates. Approximated names a registered
/// strategy; `parameter` is passed to its factory.
struct Strictness {
    enum class Mode { Strict, Relaxed, Approximated };
    Mode mode = Mode::Strict;
    std::string strategy;
    std::optional<int> parameter;

    static Strictness strict() { return {}; }
    static Strictness relaxed() { return {Mode::Relaxed, {}, {}}; }
    static Strictness approximated(std::string name, std::optional<int> param = {})
    {
        return {Mode::Approximated, std::move(name), param};
    }

    /// Parses "strict", "relaxed" or "approx:<name>[:k]".
    static std::optional<Strictness> parse(std::string_view text);
    std::string to_string() const;

    friend bool operator==(const Strictness&, const Strictness&) = default;
};

} // namespace stq
