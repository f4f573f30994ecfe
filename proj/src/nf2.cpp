#include "stq/nf2.hpp"

#include "stq/decimal.hpp"

#include <algorithm>
#include <unordered_set>

namespace stq::nf2 {

const char* to_string(AttrType t)
{
    switch (t) {
    case AttrType::String: return "string";
    case AttrType::Int: return "int";
    case AttrType::Float: return "float";
    case AttrType::Relation: return "relation";
    }
    return "?";
}

Schema Schema::make(std::vector<Attribute> attributes)
{
    std::unordered_set<std::string> seen;
    for (const auto& a : attributes) {
        if (!seen.insert(a.name).second)
            throw Nf2Error(Nf2Error::Kind::InvalidSchema, "duplicate attribute '" + a.name + "'");
        if ((a.type == AttrType::Relation) != (a.nested != nullptr))
            throw Nf2Error(Nf2Error::Kind::InvalidSchema, "attribute '" + a.name + "' has inconsistent nesting");
    }
    return Schema{std::move(attributes)};
}

std::optional<std::size_t> Schema::index_of(std::string_view name) const
{
    for (std::size_t i = 0; i < attributes.size(); ++i)
        if (attributes[i].name == name)
            return i;
    return std::nullopt;
}

bool operator==(const Schema& a, const Schema& b)
{
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& x = a.attributes[i];
        const auto& y = b.attributes[i];
        if (x.name != y.name || x.type != y.type)
            return false;
        if (x.type == AttrType::Relation && !(*x.nested == *y.nested))
            return false;
    }
    return true;
}

namespace {

bool conforms(const Value& v, const Attribute& a)
{
    switch (a.type) {
    case AttrType::String: return std::holds_alternative<std::string>(v);
    case AttrType::Int: return std::holds_alternative<std::int64_t>(v);
    case AttrType::Float: return std::holds_alternative<double>(v);
    case AttrType::Relation: {
        const auto* p = std::get_if<RelationPtr>(&v);
        return p && *p && (*p)->schema == *a.nested;
    }
    }
    return false;
}

} // namespace

Relation Relation::make(Schema schema, std::vector<Row> rows)
{
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != schema.size())
            throw Nf2Error(Nf2Error::Kind::InvalidSchema, "row " + std::to_string(r) + " has wrong arity");
        for (std::size_t i = 0; i < schema.size(); ++i)
            if (!conforms(rows[r][i], schema.attributes[i]))
                throw Nf2Error(Nf2Error::Kind::InvalidSchema, "row " + std::to_string(r) + ", attribute '" +
                                                                  schema.attributes[i].name + "' has wrong type");
    }
    return Relation{std::move(schema), std::move(rows)};
}

bool value_equal(const Value& a, const Value& b)
{
    if (a.index() != b.index())
        return false;
    if (const auto* pa = std::get_if<RelationPtr>(&a)) {
        const auto& pb = std::get<RelationPtr>(b);
        if (!*pa || !pb)
            return *pa == pb;
        return **pa == *pb;
    }
    return a == b;
}

bool operator==(const Relation& a, const Relation& b)
{
    if (!(a.schema == b.schema) || a.rows.size() != b.rows.size())
        return false;
    for (std::size_t r = 0; r < a.rows.size(); ++r)
        for (std::size_t i = 0; i < a.schema.size(); ++i)
            if (!value_equal(a.rows[r][i], b.rows[r][i]))
                return false;
    return true;
}

std::string render_value(const Value& v)
{
    struct {
        std::string operator()(std::monostate) const { return "UNDEFINED"; }
        std::string operator()(const std::string& s) const { return "'" + s + "'"; }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(double d) const { return format_decimal(d); }
        std::string operator()(const RelationPtr& r) const
        {
            return "{" + std::to_string(r ? r->rows.size() : 0) + " rows}";
        }
    } visitor;
    return std::visit(visitor, v);
}

// ---------------------------------------------------------------- builders

namespace {

template <typename T>
std::shared_ptr<T> node()
{
    return std::make_shared<T>();
}

} // namespace

RelExprPtr input(std::string label)
{
    auto n = node<RelExpr>();
    n->kind = RelExpr::Kind::Input;
    n->name = std::move(label);
    return n;
}

RelExprPtr nested_ref(std::string attribute)
{
    auto n = node<RelExpr>();
    n->kind = RelExpr::Kind::NestedRef;
    n->name = std::move(attribute);
    return n;
}

RelExprPtr constant(Relation r)
{
    auto n = node<RelExpr>();
    n->kind = RelExpr::Kind::Const;
    n->constant = std::make_shared<const Relation>(std::move(r));
    return n;
}

RelExprPtr project(std::vector<ProjectItem> items, RelExprPtr in)
{
    auto n = node<RelExpr>();
    n->kind = RelExpr::Kind::Project;
    n->items = std::move(items);
    n->input = std::move(in);
    return n;
}

RelExprPtr project(std::initializer_list<std::string> attributes, RelExprPtr in)
{
    std::vector<ProjectItem> items;
    for (const auto& a : attributes)
        items.push_back(keep(a));
    return project(std::move(items), std::move(in));
}

RelExprPtr select(ScalarExprPtr condition, RelExprPtr in)
{
    auto n = node<RelExpr>();
    n->kind = RelExpr::Kind::Select;
    n->condition = std::move(condition);
    n->input = std::move(in);
    return n;
}

RelExprPtr unnest(std::string attribute, RelExprPtr in)
{
    auto n = node<RelExpr>();
    n->kind = RelExpr::Kind::Unnest;
    n->name = std::move(attribute);
    n->input = std::move(in);
    return n;
}

RelExprPtr join(ScalarExprPtr condition, RelExprPtr left, RelExprPtr right)
{
    auto n = node<RelExpr>();
    n->kind = RelExpr::Kind::Join;
    n->condition = std::move(condition);
    n->input = std::move(left);
    n->right = std::move(right);
    return n;
}

ProjectItem keep(std::string attribute) { return {attribute, attribute, nullptr}; }
ProjectItem rename(std::string output, std::string source) { return {std::move(output), std::move(source), nullptr}; }
ProjectItem nest(std::string output, RelExprPtr e) { return {std::move(output), {}, std::move(e)}; }

ScalarExprPtr attr(std::string name)
{
    auto n = node<ScalarExpr>();
    n->kind = ScalarExpr::Kind::Attr;
    n->name = std::move(name);
    return n;
}

ScalarExprPtr literal(Value v)
{
    auto n = node<ScalarExpr>();
    n->kind = ScalarExpr::Kind::Literal;
    n->literal = std::move(v);
    return n;
}

ScalarExprPtr literal(double v) { return literal(Value(v)); }
ScalarExprPtr literal_int(std::int64_t v) { return literal(Value(v)); }

ScalarExprPtr arith(ArithOp op, ScalarExprPtr l, ScalarExprPtr r)
{
    auto n = node<ScalarExpr>();
    n->kind = ScalarExpr::Kind::Arith;
    n->arith = op;
    n->children = {std::move(l), std::move(r)};
    return n;
}

ScalarExprPtr compare(CompareOp op, ScalarExprPtr l, ScalarExprPtr r)
{
    auto n = node<ScalarExpr>();
    n->kind = ScalarExpr::Kind::Compare;
    n->compare = op;
    n->children = {std::move(l), std::move(r)};
    return n;
}

namespace {

ScalarExprPtr junction(ScalarExpr::Kind kind, std::vector<ScalarExprPtr> children)
{
    if (children.size() == 1)
        return children.front();
    auto n = node<ScalarExpr>();
    n->kind = kind;
    for (auto& c : children) {
        if (c->kind == kind)
            n->children.insert(n->children.end(), c->children.begin(), c->children.end());
        else
            n->children.push_back(std::move(c));
    }
    return n;
}

} // namespace

ScalarExprPtr conj(std::vector<ScalarExprPtr> children) { return junction(ScalarExpr::Kind::And, std::move(children)); }
ScalarExprPtr disj(std::vector<ScalarExprPtr> children) { return junction(ScalarExpr::Kind::Or, std::move(children)); }

ScalarExprPtr negate(ScalarExprPtr child)
{
    auto n = node<ScalarExpr>();
    n->kind = ScalarExpr::Kind::Not;
    n->children = {std::move(child)};
    return n;
}

ScalarExprPtr aggregate(AggregateFn fn, RelExprPtr rel)
{
    auto n = node<ScalarExpr>();
    n->kind = ScalarExpr::Kind::Aggregate;
    n->aggregate = fn;
    n->relation = std::move(rel);
    return n;
}

ScalarExprPtr scalar_of(RelExprPtr rel)
{
    auto n = node<ScalarExpr>();
    n->kind = ScalarExpr::Kind::ScalarOf;
    n->relation = std::move(rel);
    return n;
}

ScalarExprPtr segment_intersects(std::vector<std::string> attrs, Region r, SegmentMode mode)
{
    if (attrs.size() != 4)
        throw std::invalid_argument("segment_intersects needs four attribute names");
    auto n = node<ScalarExpr>();
    n->kind = ScalarExpr::Kind::SegmentIntersects;
    n->segment_attrs = std::move(attrs);
    n->region = r;
    n->segment_mode = mode;
    return n;
}

// ------------------------------------------------------------- type check

namespace {

enum class SType { String, Int, Float, Bool };

const char* sname(SType t)
{
    switch (t) {
    case SType::String: return "string";
    case SType::Int: return "int";
    case SType::Float: return "float";
    case SType::Bool: return "bool";
    }
    return "?";
}

bool numeric(SType t) { return t == SType::Int || t == SType::Float; }

[[noreturn]] void mismatch(const std::string& msg) { throw Nf2Error(Nf2Error::Kind::TypeMismatch, msg); }
[[noreturn]] void unknown(const std::string& name)
{
    throw Nf2Error(Nf2Error::Kind::UnknownAttribute, "unknown attribute '" + name + "'");
}

SType atomic(const Attribute& a)
{
    switch (a.type) {
    case AttrType::String: return SType::String;
    case AttrType::Int: return SType::Int;
    case AttrType::Float: return SType::Float;
    case AttrType::Relation: break;
    }
    mismatch("attribute '" + a.name + "' is relation-valued");
}

Schema primed(const Schema& l, const Schema& r)
{
    std::vector<Attribute> attrs = l.attributes;
    for (auto a : r.attributes) {
        a.name += "'";
        attrs.push_back(std::move(a));
    }
    return Schema::make(std::move(attrs));
}

class Checker {
public:
    explicit Checker(const Schema& input, std::vector<const Schema*> scope = {})
        : input_(input)
        , scope_(std::move(scope))
    {}

    Schema rel(const RelExpr& e)
    {
        switch (e.kind) {
        case RelExpr::Kind::Input: return input_;
        case RelExpr::Kind::NestedRef: {
            const Attribute& a = lookup(e.name);
            if (a.type != AttrType::Relation)
                mismatch("'" + e.name + "' is not relation-valued");
            return *a.nested;
        }
        case RelExpr::Kind::Const: return e.constant->schema;
        case RelExpr::Kind::Project: {
            const Schema in = rel(*e.input);
            std::vector<Attribute> out;
            for (const auto& item : e.items) {
                if (item.nested) {
                    scope_.push_back(&in);
                    Schema ns = rel(*item.nested);
                    scope_.pop_back();
                    out.push_back({item.output, AttrType::Relation, std::make_shared<const Schema>(std::move(ns))});
                } else {
                    auto idx = in.index_of(item.source);
                    if (!idx)
                        unknown(item.source);
                    Attribute a = in.attributes[*idx];
                    a.name = item.output;
                    out.push_back(std::move(a));
                }
            }
            return Schema::make(std::move(out));
        }
        case RelExpr::Kind::Select: {
            Schema in = rel(*e.input);
            scope_.push_back(&in);
            const SType t = scalar(*e.condition);
            scope_.pop_back();
            if (t != SType::Bool)
                mismatch("selection condition is " + std::string(sname(t)));
            return in;
        }
        case RelExpr::Kind::Unnest: {
            const Schema in = rel(*e.input);
            auto idx = in.index_of(e.name);
            if (!idx)
                unknown(e.name);
            const Attribute& a = in.attributes[*idx];
            if (a.type != AttrType::Relation)
                mismatch("cannot unnest atomic attribute '" + e.name + "'");
            std::vector<Attribute> out(in.attributes.begin(), in.attributes.begin() + *idx);
            out.insert(out.end(), a.nested->attributes.begin(), a.nested->attributes.end());
            out.insert(out.end(), in.attributes.begin() + *idx + 1, in.attributes.end());
            return Schema::make(std::move(out));
        }
        case RelExpr::Kind::Join: {
            Schema combined = primed(rel(*e.input), rel(*e.right));
            scope_.push_back(&combined);
            const SType t = scalar(*e.condition);
            scope_.pop_back();
            if (t != SType::Bool)
                mismatch("join condition is " + std::string(sname(t)));
            return combined;
        }
        }
        mismatch("bad relation node");
    }

    SType scalar(const ScalarExpr& e)
    {
        switch (e.kind) {
        case ScalarExpr::Kind::Attr: return atomic(lookup(e.name));
        case ScalarExpr::Kind::Literal:
            if (std::holds_alternative<std::string>(e.literal))
                return SType::String;
            if (std::holds_alternative<std::int64_t>(e.literal))
                return SType::Int;
            if (std::holds_alternative<double>(e.literal) || std::holds_alternative<std::monostate>(e.literal))
                return SType::Float;
            mismatch("relation literal in scalar position");
        case ScalarExpr::Kind::Arith: {
            const SType l = scalar(*e.children[0]);
            const SType r = scalar(*e.children[1]);
            if (!numeric(l) || !numeric(r))
                mismatch("arithmetic on " + std::string(sname(l)) + " and " + sname(r));
            return l == SType::Int && r == SType::Int ? SType::Int : SType::Float;
        }
        case ScalarExpr::Kind::Compare: {
            const SType l = scalar(*e.children[0]);
            const SType r = scalar(*e.children[1]);
            const bool ok = (numeric(l) && numeric(r)) || (l == r && l != SType::Bool);
            if (!ok)
                mismatch("cannot compare " + std::string(sname(l)) + " with " + sname(r));
            return SType::Bool;
        }
        case ScalarExpr::Kind::And:
        case ScalarExpr::Kind::Or:
        case ScalarExpr::Kind::Not:
            for (const auto& c : e.children)
                if (scalar(*c) != SType::Bool)
                    mismatch("boolean connective over non-boolean operand");
            return SType::Bool;
        case ScalarExpr::Kind::Aggregate: {
            const Schema s = rel(*e.relation);
            if (e.aggregate == AggregateFn::Count)
                return SType::Int;
            if (s.size() != 1)
                mismatch("min/max need a single-attribute relation");
            const SType t = atomic(s.attributes[0]);
            if (!numeric(t))
                mismatch("min/max over non-numeric attribute '" + s.attributes[0].name + "'");
            return t;
        }
        case ScalarExpr::Kind::ScalarOf: {
            const Schema s = rel(*e.relation);
            if (s.size() != 1)
                mismatch("scalar subexpression needs a single-attribute relation");
            return atomic(s.attributes[0]);
        }
        case ScalarExpr::Kind::SegmentIntersects:
            for (const auto& n : e.segment_attrs)
                if (!numeric(atomic(lookup(n))))
                    mismatch("segment coordinate '" + n + "' is not numeric");
            return SType::Bool;
        }
        mismatch("bad scalar node");
    }

private:
    const Attribute& lookup(const std::string& name) const
    {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
            if (auto idx = (*it)->index_of(name))
                return (*it)->attributes[*idx];
        unknown(name);
    }

    const Schema& input_;
    std::vector<const Schema*> scope_;
};

// -------------------------------------------------------------- execution

struct Frame {
    const Schema* schema;
    const Row* row;
};

std::optional<double> as_number(const Value& v)
{
    if (const auto* i = std::get_if<std::int64_t>(&v))
        return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&v))
        return *d;
    return std::nullopt;
}

template <typename T>
bool apply(CompareOp op, const T& a, const T& b)
{
    switch (op) {
    case CompareOp::Lt: return a < b;
    case CompareOp::Le: return a <= b;
    case CompareOp::Eq: return a == b;
    case CompareOp::Ne: return a != b;
    case CompareOp::Ge: return a >= b;
    case CompareOp::Gt: return a > b;
    }
    return false;
}

class Executor {
public:
    explicit Executor(const Relation& input)
        : input_(RelationPtr(RelationPtr(), &input))
    {}

    RelationPtr rel(const RelExpr& e)
    {
        switch (e.kind) {
        case RelExpr::Kind::Input: return input_;
        case RelExpr::Kind::NestedRef: return std::get<RelationPtr>(lookup(e.name));
        case RelExpr::Kind::Const: return e.constant;
        case RelExpr::Kind::Project: return do_project(e);
        case RelExpr::Kind::Select: {
            RelationPtr in = rel(*e.input);
            auto out = std::make_shared<Relation>();
            out->schema = in->schema;
            for (const auto& row : in->rows) {
                scope_.push_back({&in->schema, &row});
                const bool keep = test(*e.condition);
                scope_.pop_back();
                if (keep)
                    out->rows.push_back(row);
            }
            return out;
        }
        case RelExpr::Kind::Unnest: {
            RelationPtr in = rel(*e.input);
            const std::size_t idx = *in->schema.index_of(e.name);
            const Schema& inner = *in->schema.attributes[idx].nested;
            std::vector<Attribute> attrs(in->schema.attributes.begin(), in->schema.attributes.begin() + idx);
            attrs.insert(attrs.end(), inner.attributes.begin(), inner.attributes.end());
            attrs.insert(attrs.end(), in->schema.attributes.begin() + idx + 1, in->schema.attributes.end());
            auto out = std::make_shared<Relation>();
            out->schema = Schema{std::move(attrs)};
            for (const auto& row : in->rows) {
                const Relation& nested = *std::get<RelationPtr>(row[idx]);
                for (const auto& irow : nested.rows) {
                    Row r(row.begin(), row.begin() + idx);
                    r.insert(r.end(), irow.begin(), irow.end());
                    r.insert(r.end(), row.begin() + idx + 1, row.end());
                    out->rows.push_back(std::move(r));
                }
            }
            return out;
        }
        case RelExpr::Kind::Join: {
            RelationPtr l = rel(*e.input);
            RelationPtr r = rel(*e.right);
            auto out = std::make_shared<Relation>();
            out->schema = primed(l->schema, r->schema);
            Row combined;
            for (const auto& lr : l->rows) {
                for (const auto& rr : r->rows) {
                    combined = lr;
                    combined.insert(combined.end(), rr.begin(), rr.end());
                    scope_.push_back({&out->schema, &combined});
                    const bool keep = test(*e.condition);
                    scope_.pop_back();
                    if (keep)
                        out->rows.push_back(combined);
                }
            }
            return out;
        }
        }
        return nullptr;
    }

    Value value(const ScalarExpr& e)
    {
        switch (e.kind) {
        case ScalarExpr::Kind::Attr: return lookup(e.name);
        case ScalarExpr::Kind::Literal: return e.literal;
        case ScalarExpr::Kind::Arith: {
            const Value l = value(*e.children[0]);
            const Value r = value(*e.children[1]);
            const auto* li = std::get_if<std::int64_t>(&l);
            const auto* ri = std::get_if<std::int64_t>(&r);
            if (li && ri)
                return e.arith == ArithOp::Add ? *li + *ri : *li - *ri;
            const auto a = as_number(l);
            const auto b = as_number(r);
            if (!a || !b)
                return std::monostate{};
            return e.arith == ArithOp::Add ? *a + *b : *a - *b;
        }
        case ScalarExpr::Kind::Aggregate: {
            RelationPtr r = rel(*e.relation);
            if (e.aggregate == AggregateFn::Count)
                return static_cast<std::int64_t>(r->rows.size());
            if (r->rows.empty())
                return std::monostate{};
            const bool want_min = e.aggregate == AggregateFn::Min;
            Value best = r->rows.front()[0];
            for (const auto& row : r->rows) {
                const Value& v = row[0];
                const bool better = want_min ? *as_number(v) < *as_number(best) : *as_number(v) > *as_number(best);
                if (better)
                    best = v;
            }
            return best;
        }
        case ScalarExpr::Kind::ScalarOf: {
            RelationPtr r = rel(*e.relation);
            if (r->rows.size() != 1)
                return std::monostate{};
            return r->rows.front()[0];
        }
        default: break;
        }
        throw std::logic_error("boolean node in value position");
    }

    bool test(const ScalarExpr& e)
    {
        switch (e.kind) {
        case ScalarExpr::Kind::Compare: {
            const Value l = value(*e.children[0]);
            const Value r = value(*e.children[1]);
            if (std::holds_alternative<std::monostate>(l) || std::holds_alternative<std::monostate>(r))
                return false;
            if (const auto* ls = std::get_if<std::string>(&l))
                return apply(e.compare, *ls, std::get<std::string>(r));
            const auto* li = std::get_if<std::int64_t>(&l);
            const auto* ri = std::get_if<std::int64_t>(&r);
            if (li && ri)
                return apply(e.compare, *li, *ri);
            return apply(e.compare, *as_number(l), *as_number(r));
        }
        case ScalarExpr::Kind::And:
            return std::all_of(e.children.begin(), e.children.end(), [&](const auto& c) { return test(*c); });
        case ScalarExpr::Kind::Or:
            return std::any_of(e.children.begin(), e.children.end(), [&](const auto& c) { return test(*c); });
        case ScalarExpr::Kind::Not: return !test(*e.children[0]);
        case ScalarExpr::Kind::SegmentIntersects: {
            double c[4];
            for (int k = 0; k < 4; ++k)
                c[k] = *as_number(lookup(e.segment_attrs[static_cast<std::size_t>(k)]));
            const Segment s{{0, c[0], c[1], 0.0}, {1, c[2], c[3], 1.0}};
            if (e.segment_mode == SegmentMode::Closed)
                return !segment_region_closed(s, e.region).empty();
            return !segment_region_params(s, e.region, PointClass::Interior).empty();
        }
        default: break;
        }
        throw std::logic_error("value node in boolean position");
    }

private:
    RelationPtr do_project(const RelExpr& e)
    {
        RelationPtr in = rel(*e.input);
        std::vector<Attribute> attrs;
        std::vector<std::optional<std::size_t>> sources;
        for (const auto& item : e.items) {
            if (item.nested) {
                attrs.push_back({item.output, AttrType::Relation, nullptr});
                sources.push_back(std::nullopt);
            } else {
                const std::size_t idx = *in->schema.index_of(item.source);
                Attribute a = in->schema.attributes[idx];
                a.name = item.output;
                attrs.push_back(std::move(a));
                sources.push_back(idx);
            }
        }
        auto out = std::make_shared<Relation>();
        std::vector<RelationPtr> first_nested(e.items.size());
        for (const auto& row : in->rows) {
            Row r;
            r.reserve(e.items.size());
            scope_.push_back({&in->schema, &row});
            for (std::size_t i = 0; i < e.items.size(); ++i) {
                if (sources[i]) {
                    r.push_back(row[*sources[i]]);
                } else {
                    RelationPtr nested = rel(*e.items[i].nested);
                    if (!first_nested[i])
                        first_nested[i] = nested;
                    r.push_back(std::move(nested));
                }
            }
            scope_.pop_back();
            out->rows.push_back(std::move(r));
        }
        // with no rows to look at, nested schemas come from the type checker
        for (std::size_t i = 0; i < e.items.size(); ++i) {
            if (sources[i])
                continue;
            if (first_nested[i]) {
                attrs[i].nested = std::make_shared<const Schema>(first_nested[i]->schema);
            } else {
                std::vector<const Schema*> schemas;
                for (const auto& f : scope_)
                    schemas.push_back(f.schema);
                schemas.push_back(&in->schema);
                Checker checker(input_->schema, std::move(schemas));
                attrs[i].nested = std::make_shared<const Schema>(checker.rel(*e.items[i].nested));
            }
        }
        out->schema = Schema{std::move(attrs)};
        return out;
    }

    const Value& lookup(const std::string& name) const
    {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
            if (auto idx = it->schema->index_of(name))
                return (*it->row)[*idx];
        throw Nf2Error(Nf2Error::Kind::UnknownAttribute, "unknown attribute '" + name + "'");
    }

    RelationPtr input_;
    std::vector<Frame> scope_;
};

} // namespace

Schema type_check(const RelExprPtr& e, const Schema& input_schema)
{
    Checker c(input_schema);
    return c.rel(*e);
}

Relation execute(const RelExprPtr& e, const Relation& in)
{
    Schema schema = type_check(e, in.schema);
    Executor x(in);
    RelationPtr r = x.rel(*e);
    Relation out{std::move(schema), r->rows};
    return out;
}

// -------------------------------------------------------------- rendering

namespace {

const char* op_text(CompareOp op)
{
    switch (op) {
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "<>";
    case CompareOp::Ge: return ">=";
    case CompareOp::Gt: return ">";
    }
    return "?";
}

std::string join_text(const std::vector<std::string>& parts, const char* sep)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i)
            out += sep;
        out += parts[i];
    }
    return out;
}

std::string render_child(const ScalarExprPtr& c)
{
    const bool group = c->kind == ScalarExpr::Kind::And || c->kind == ScalarExpr::Kind::Or;
    return group ? "(" + render(c) + ")" : render(c);
}

} // namespace

std::string render(const RelExprPtr& e)
{
    switch (e->kind) {
    case RelExpr::Kind::Input:
    case RelExpr::Kind::NestedRef: return e->name;
    case RelExpr::Kind::Const: return "CONST[" + std::to_string(e->constant->rows.size()) + " rows]";
    case RelExpr::Kind::Project: {
        std::vector<std::string> items;
        for (const auto& item : e->items) {
            if (item.nested)
                items.push_back(item.output + " := " + render(item.nested));
            else if (item.output != item.source)
                items.push_back(item.output + " := " + item.source);
            else
                items.push_back(item.source);
        }
        return "PROJECT[" + join_text(items, ", ") + "](" + render(e->input) + ")";
    }
    case RelExpr::Kind::Select: return "SELECT[" + render(e->condition) + "](" + render(e->input) + ")";
    case RelExpr::Kind::Unnest: return "UNNEST[" + e->name + "](" + render(e->input) + ")";
    case RelExpr::Kind::Join:
        return "JOIN[" + render(e->condition) + "](" + render(e->input) + ", " + render(e->right) + ")";
    }
    return "?";
}

std::string render(const ScalarExprPtr& e)
{
    switch (e->kind) {
    case ScalarExpr::Kind::Attr: return e->name;
    case ScalarExpr::Kind::Literal: return render_value(e->literal);
    case ScalarExpr::Kind::Arith: {
        const auto& r = e->children[1];
        std::string rhs = r->kind == ScalarExpr::Kind::Arith ? "(" + render(r) + ")" : render(r);
        return render(e->children[0]) + (e->arith == ArithOp::Add ? " + " : " - ") + rhs;
    }
    case ScalarExpr::Kind::Compare:
        return render(e->children[0]) + " " + op_text(e->compare) + " " + render(e->children[1]);
    case ScalarExpr::Kind::And:
    case ScalarExpr::Kind::Or: {
        std::vector<std::string> parts;
        for (const auto& c : e->children)
            parts.push_back(render_child(c));
        return join_text(parts, e->kind == ScalarExpr::Kind::And ? " AND " : " OR ");
    }
    case ScalarExpr::Kind::Not: return "NOT (" + render(e->children[0]) + ")";
    case ScalarExpr::Kind::Aggregate: {
        const char* fn = e->aggregate == AggregateFn::Min ? "MIN" : e->aggregate == AggregateFn::Max ? "MAX" : "COUNT";
        return std::string(fn) + "(" + render(e->relation) + ")";
    }
    case ScalarExpr::Kind::ScalarOf: return render(e->relation);
    case ScalarExpr::Kind::SegmentIntersects: {
        const Region& r = e->region;
        return std::string(e->segment_mode == SegmentMode::Closed ? "SEGMENT_MEETS" : "SEGMENT_MEETS_INTERIOR") +
               "[" + join_text(e->segment_attrs, ", ") + "; (" + format_decimal(r.x_min) + ", " +
               format_decimal(r.y_min) + ", " + format_decimal(r.x_max) + ", " + format_decimal(r.y_max) + ")]";
    }
    }
    return "?";
}

// ------------------------------------------------------ trajectories in NF2

Schema trajectories_schema()
{
    auto inner = std::make_shared<const Schema>(Schema::make({{"order", AttrType::Int, nullptr},
                                                              {"x", AttrType::Float, nullptr},
                                                              {"y", AttrType::Float, nullptr},
                                                              {"tau", AttrType::Float, nullptr}}));
    return Schema::make({{"tid", AttrType::String, nullptr}, {"T", AttrType::Relation, inner}});
}

Relation to_nf2(const TrajectoriesRelation& rel)
{
    Relation out;
    out.schema = trajectories_schema();
    const Schema& inner = *out.schema.attributes[1].nested;
    for (const auto& row : rel.rows()) {
        auto t = std::make_shared<Relation>();
        t->schema = inner;
        for (const auto& p : row.trajectory.points())
            t->rows.push_back({p.order, p.x, p.y, p.tau});
        out.rows.push_back({row.tid, RelationPtr(std::move(t))});
    }
    return out;
}

std::vector<std::string> tids(const Relation& r)
{
    auto idx = r.schema.index_of("tid");
    if (!idx || r.schema.attributes[*idx].type != AttrType::String)
        throw Nf2Error(Nf2Error::Kind::UnknownAttribute, "relation has no string attribute 'tid'");
    std::vector<std::string> out;
    for (const auto& row : r.rows)
        out.push_back(std::get<std::string>(row[*idx]));
    return out;
}

namespace {

// Segments of the current tuple's T: (order, x, y, x', y').
RelExprPtr nested_segments()
{
    auto successor = compare(CompareOp::Eq, arith(ArithOp::Add, attr("order"), literal_int(1)), attr("order'"));
    return project({"order", "x", "y", "x'", "y'"}, join(successor, nested_ref("T"), nested_ref("T")));
}

RelExprPtr p_first() { return select(compare(CompareOp::Eq, attr("order"), literal_int(0)), nested_ref("T")); }

RelExprPtr p_last()
{
    return select(compare(CompareOp::Eq, attr("order"), aggregate(AggregateFn::Max, project({"order"}, nested_ref("T")))),
                  nested_ref("T"));
}

ScalarExprPtr agg_of(AggregateFn fn, const std::string& a, RelExprPtr rel)
{
    return aggregate(fn, project({a}, std::move(rel)));
}

ScalarExprPtr coord(const std::string& a, RelExprPtr rel) { return scalar_of(project({a}, std::move(rel))); }

ScalarExprPtr lt(ScalarExprPtr a, ScalarExprPtr b) { return compare(CompareOp::Lt, std::move(a), std::move(b)); }
ScalarExprPtr gt(ScalarExprPtr a, ScalarExprPtr b) { return compare(CompareOp::Gt, std::move(a), std::move(b)); }

// p inside R, written point-first as in the published expressions
ScalarExprPtr point_inside(RelExprPtr (*point)(), const Region& r)
{
    return conj({gt(coord("x", point()), literal(r.x_min)), lt(coord("x", point()), literal(r.x_max)),
                 gt(coord("y", point()), literal(r.y_min)), lt(coord("y", point()), literal(r.y_max))});
}

ScalarExprPtr point_outside(RelExprPtr (*point)(), const Region& r)
{
    return disj({lt(coord("x", point()), literal(r.x_min)), lt(coord("y", point()), literal(r.y_min)),
                 gt(coord("x", point()), literal(r.x_max)), gt(coord("y", point()), literal(r.y_max))});
}

} // namespace

RelExprPtr segment_join_expr()
{
    return unnest("T_sgmt", project({keep("tid"), nest("T_sgmt", nested_segments())}, input()));
}

Relation segment_join(const Relation& trajectories) { return execute(segment_join_expr(), trajectories); }

RelExprPtr compile_spatial(De9imLabel label, const Region& r, const Strictness& s)
{
    if (s.mode == Strictness::Mode::Approximated)
        throw Nf2Error(Nf2Error::Kind::UnsupportedStrictness, "approximated evaluation has no algebra form");
    const bool relaxed = s.mode == Strictness::Mode::Relaxed;
    auto T = [] { return nested_ref("T"); };
    const auto xmin = [&] { return literal(r.x_min); };
    const auto ymin = [&] { return literal(r.y_min); };
    const auto xmax = [&] { return literal(r.x_max); };
    const auto ymax = [&] { return literal(r.y_max); };

    ScalarExprPtr cond;
    switch (label) {
    case De9imLabel::R179:
        cond = conj({lt(xmin(), agg_of(AggregateFn::Min, "x", T())), lt(ymin(), agg_of(AggregateFn::Min, "y", T())),
                     gt(xmax(), agg_of(AggregateFn::Max, "x", T())), gt(ymax(), agg_of(AggregateFn::Max, "y", T()))});
        break;
    case De9imLabel::R247:
        cond = conj({point_inside(p_first, r), point_inside(p_last, r),
                     disj({lt(agg_of(AggregateFn::Min, "x", T()), xmin()), gt(agg_of(AggregateFn::Max, "x", T()), xmax()),
                           lt(agg_of(AggregateFn::Min, "y", T()), ymin()),
                           gt(agg_of(AggregateFn::Max, "y", T()), ymax())})});
        break;
    case De9imLabel::R255:
        cond = conj({point_inside(p_first, r),
                     disj({lt(agg_of(AggregateFn::Min, "x", p_last()), xmin()),
                           gt(agg_of(AggregateFn::Max, "x", p_last()), xmax()),
                           lt(agg_of(AggregateFn::Min, "y", p_last()), ymin()),
                           gt(agg_of(AggregateFn::Max, "y", p_last()), ymax())})});
        break;
    case De9imLabel::R031: {
        auto interior = conj({lt(xmin(), attr("x")), lt(ymin(), attr("y")), gt(xmax(), attr("x")), gt(ymax(), attr("y"))});
        cond = compare(CompareOp::Eq, aggregate(AggregateFn::Count, select(interior, T())), literal_int(0));
        if (relaxed) {
            auto meets = segment_intersects({"x", "y", "x'", "y'"}, r, SegmentMode::Closed);
            cond = conj({cond, compare(CompareOp::Eq, aggregate(AggregateFn::Count, select(meets, nested_segments())),
                                       literal_int(0))});
        }
        break;
    }
    case De9imLabel::R223: {
        auto interior = conj({gt(attr("x"), xmin()), gt(attr("y"), ymin()), lt(attr("x"), xmax()), lt(attr("y"), ymax())});
        ScalarExprPtr crosses = gt(aggregate(AggregateFn::Count, select(interior, T())), literal_int(0));
        if (relaxed) {
            auto enters = segment_intersects({"x", "y", "x'", "y'"}, r, SegmentMode::Interior);
            crosses = disj({crosses, gt(aggregate(AggregateFn::Count, select(enters, nested_segments())), literal_int(0))});
        }
        cond = conj({point_outside(p_first, r), point_outside(p_last, r), crosses});
        break;
    }
    default:
        throw Nf2Error(Nf2Error::Kind::UnsupportedLabel,
                       "no algebra expression for " + std::string(stq::to_string(label)));
    }
    return select(cond, input());
}

RelExprPtr compile_temporal(AllenLabel label, const Interval& i)
{
    auto tmin = [] { return agg_of(AggregateFn::Min, "tau", nested_ref("T")); };
    auto tmax = [] { return agg_of(AggregateFn::Max, "tau", nested_ref("T")); };
    auto ts = [&] { return literal(i.tau_s); };
    auto te = [&] { return literal(i.tau_e); };

    ScalarExprPtr cond;
    switch (label) {
    case AllenLabel::Precedes: cond = lt(tmax(), ts()); break;
    case AllenLabel::Overlaps: cond = conj({lt(tmin(), ts()), gt(tmax(), ts()), lt(tmax(), te())}); break;
    case AllenLabel::During: cond = conj({gt(tmin(), ts()), lt(tmax(), te())}); break;
    case AllenLabel::PrecededBy: cond = gt(tmin(), te()); break;
    case AllenLabel::OverlappedBy: cond = conj({gt(tmin(), ts()), lt(tmin(), te()), gt(tmax(), te())}); break;
    case AllenLabel::Contains: cond = conj({lt(tmin(), ts()), gt(tmax(), te())}); break;
    default:
        throw Nf2Error(Nf2Error::Kind::UnsupportedLabel,
                       "no algebra expression for " + std::string(stq::to_string(label)));
    }
    return select(cond, input());
}

} // namespace stq::nf2
