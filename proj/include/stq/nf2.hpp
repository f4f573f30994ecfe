#pragma once

#include "stq/core_model.hpp"
#include "stq/geometry.hpp"
#include "stq/predicate.hpp"
#include "stq/relations.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

/// \file
/// A small nested-relational (NF2) algebra interpreter: projection with
/// nested sub-projections, selection, unnest, theta-join and aggregates,
/// over materialized relations.
///
/// Conditions are evaluated in a scope chain. The innermost frame is the
/// row under test; attribute and nested-relation names not found there are
/// looked up in the enclosing rows, so `SELECT[order = 0](T)` inside a
/// condition over the trajectories relation reads the current tuple's T.

namespace stq::nf2 {

enum class AttrType { String, Int, Float, Relation };

const char* to_string(AttrType t);

struct Schema;

struct Attribute {
    std::string name;
    AttrType type = AttrType::Float;
    std::shared_ptr<const Schema> nested;  // set iff type == Relation
};

struct Schema {
    std::vector<Attribute> attributes;

    /// Throws Nf2Error(InvalidSchema) on duplicate names or a relation
    /// attribute without nested schema.
    static Schema make(std::vector<Attribute> attributes);

    std::optional<std::size_t> index_of(std::string_view name) const;
    std::size_t size() const noexcept { return attributes.size(); }
};

bool operator==(const Schema& a, const Schema& b);

struct Relation;
using RelationPtr = std::shared_ptr<const Relation>;

/// A cell. monostate is the undefined value produced by min/max over an
/// empty relation; it never appears in stored relations.
using Value = std::variant<std::monostate, std::string, std::int64_t, double, RelationPtr>;
using Row = std::vector<Value>;

struct Relation {
    Schema schema;
    std::vector<Row> rows;

    /// Throws Nf2Error(InvalidSchema) if a row does not conform.
    static Relation make(Schema schema, std::vector<Row> rows);
};

/// Deep equality (nested relations compared by content, in row order).
bool operator==(const Relation& a, const Relation& b);
bool value_equal(const Value& a, const Value& b);

std::string render_value(const Value& v);

class Nf2Error : public std::runtime_error {
public:
    enum class Kind { TypeMismatch, UnknownAttribute, InvalidSchema, UnsupportedLabel, UnsupportedStrictness };

    Nf2Error(Kind kind, const std::string& what)
        : std::runtime_error(what)
        , kind_(kind)
    {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

struct RelExpr;
struct ScalarExpr;
using RelExprPtr = std::shared_ptr<const RelExpr>;
using ScalarExprPtr = std::shared_ptr<const ScalarExpr>;

/// One output attribute of a projection: either a (possibly renamed)
/// input attribute, or a relation-valued attribute computed per row.
struct ProjectItem {
    std::string output;
    std::string source;    // attribute copy when `nested` is null
    RelExprPtr nested;
};

struct RelExpr {
    enum class Kind { Input, NestedRef, Const, Project, Select, Unnest, Join };

    Kind kind = Kind::Input;
    std::string name;              // Input label, NestedRef / Unnest attribute
    RelationPtr constant;
    std::vector<ProjectItem> items;
    ScalarExprPtr condition;
    RelExprPtr input;
    RelExprPtr right;
};

enum class CompareOp { Lt, Le, Eq, Ne, Ge, Gt };
enum class ArithOp { Add, Sub };
enum class AggregateFn { Min, Max, Count };
enum class SegmentMode { Closed, Interior };

struct ScalarExpr {
    enum class Kind { Attr, Literal, Arith, Compare, And, Or, Not, Aggregate, ScalarOf, SegmentIntersects };

    Kind kind = Kind::Literal;
    std::string name;
    Value literal;
    ArithOp arith = ArithOp::Add;
    CompareOp compare = CompareOp::Eq;
    AggregateFn aggregate = AggregateFn::Count;
    std::vector<ScalarExprPtr> children;
    RelExprPtr relation;
    // SegmentIntersects: start/end coordinate attributes and the region
    std::vector<std::string> segment_attrs;
    Region region;
    SegmentMode segment_mode = SegmentMode::Closed;
};

// Builders.
RelExprPtr input(std::string label = "TRAJECTORIES");
RelExprPtr nested_ref(std::string attribute);
RelExprPtr constant(Relation r);
RelExprPtr project(std::vector<ProjectItem> items, RelExprPtr in);
RelExprPtr project(std::initializer_list<std::string> attributes, RelExprPtr in);
RelExprPtr select(ScalarExprPtr condition, RelExprPtr in);
RelExprPtr unnest(std::string attribute, RelExprPtr in);
/// Output schema is the left attributes followed by the right attributes,
/// each suffixed with a prime ("order'").
RelExprPtr join(ScalarExprPtr condition, RelExprPtr left, RelExprPtr right);

ProjectItem keep(std::string attribute);
ProjectItem rename(std::string output, std::string source);
ProjectItem nest(std::string output, RelExprPtr e);

ScalarExprPtr attr(std::string name);
ScalarExprPtr literal(Value v);
ScalarExprPtr literal(double v);
ScalarExprPtr literal_int(std::int64_t v);
ScalarExprPtr arith(ArithOp op, ScalarExprPtr l, ScalarExprPtr r);
ScalarExprPtr compare(CompareOp op, ScalarExprPtr l, ScalarExprPtr r);
ScalarExprPtr conj(std::vector<ScalarExprPtr> children);
ScalarExprPtr disj(std::vector<ScalarExprPtr> children);
ScalarExprPtr negate(ScalarExprPtr child);
/// min/max need a single numeric attribute; count accepts any relation.
ScalarExprPtr aggregate(AggregateFn fn, RelExprPtr rel);
/// The single cell of a one-row, one-attribute relation; undefined otherwise.
ScalarExprPtr scalar_of(RelExprPtr rel);
/// True when the segment (x,y)-(x',y') meets the closed region or its
/// interior. `attrs` names x, y, x', y' in that order.
ScalarExprPtr segment_intersects(std::vector<std::string> attrs, Region r, SegmentMode mode);

/// Output schema of `e` over `input_schema`. Throws Nf2Error(TypeMismatch /
/// UnknownAttribute).
Schema type_check(const RelExprPtr& e, const Schema& input_schema);

/// Type-checks, then evaluates. Selection and projection keep row order.
Relation execute(const RelExprPtr& e, const Relation& input);

/// ASCII rendering: PROJECT[...], SELECT[...], UNNEST[...], JOIN[...].
std::string render(const RelExprPtr& e);
std::string render(const ScalarExprPtr& e);

/// Schema (tid, T(order, x, y, tau)).
Schema trajectories_schema();

/// Trajectories relation in nested form, one tuple per trajectory.
Relation to_nf2(const TrajectoriesRelation& rel);

/// The tid column of a relation with a string `tid` attribute.
std::vector<std::string> tids(const Relation& r);

/// Per-trajectory segment rows (tid, order, x, y, x', y') from the self-join
/// on order + 1 = order'.
RelExprPtr segment_join_expr();
Relation segment_join(const Relation& trajectories);

/// Selection expression for R031, R179, R223, R247 or R255. Relaxed adds
/// segment conditions to R031 and R223; the other three are the same under
/// both modes. Throws Nf2Error(UnsupportedLabel / UnsupportedStrictness).
RelExprPtr compile_spatial(De9imLabel label, const Region& r, const Strictness& s);

/// Selection expression for Precedes, Overlaps, During, PrecededBy,
/// OverlappedBy or Contains.
RelExprPtr compile_temporal(AllenLabel label, const Interval& i);

} // namespace stq::nf2
