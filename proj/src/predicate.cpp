#include "stq/predicate.hpp"

#include "stq/decimal.hpp"

#include <array>
#include <cctype>
#include <set>

namespace stq {

const char* keyword(Op op)
{
    switch (op) {
    case Op::Within: return "WITHIN";
    case Op::Inside: return "INSIDE";
    case Op::Outside: return "OUTSIDE";
    case Op::Before: return "BEFORE";
    case Op::After: return "AFTER";
    }
    return "?";
}

const char* keyword(Quantifier q) { return q == Quantifier::Exists ? "EXISTS" : "FORALL"; }

const char* keyword(Domain d) { return d == Domain::All ? "T" : "TFL"; }

const char* to_string(Diagnostic::Kind kind)
{
    switch (kind) {
    case Diagnostic::Kind::UnknownName: return "UnknownName";
    case Diagnostic::Kind::TypeError: return "TypeError";
    case Diagnostic::Kind::UnboundVariable: return "UnboundVariable";
    case Diagnostic::Kind::EndpointUnderQuantifier: return "EndpointUnderQuantifier";
    }
    return "?";
}

Expr Expr::make_atom(PointRef p, Op op, std::string target)
{
    Expr e;
    e.kind = Kind::Atom;
    e.atom = Atom{std::move(p), op, std::move(target)};
    return e;
}

Expr Expr::make_not(Expr inner)
{
    Expr e;
    e.kind = Kind::Not;
    e.children.push_back(std::move(inner));
    return e;
}

Expr Expr::make_and(std::vector<Expr> es)
{
    if (es.size() == 1)
        return std::move(es.front());
    Expr e;
    e.kind = Kind::And;
    e.children = std::move(es);
    return e;
}

Expr Expr::make_or(std::vector<Expr> es)
{
    if (es.size() == 1)
        return std::move(es.front());
    Expr e;
    e.kind = Kind::Or;
    e.children = std::move(es);
    return e;
}

Clause Clause::quantified(Quantifier q, std::string var, Domain d, Expr body)
{
    Clause c;
    c.kind = Kind::Quantified;
    c.quantifier = q;
    c.variable = std::move(var);
    c.domain = d;
    c.body = std::move(body);
    return c;
}

Clause Clause::ground(Expr body)
{
    Clause c;
    c.kind = Kind::Ground;
    c.body = std::move(body);
    return c;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok { Ident, LParen, RParen, Colon, Comma, End };

struct Token {
    Tok kind;
    std::string_view text;
    std::size_t pos;
};

const std::set<std::string_view> kReserved = {"EXISTS", "FORALL", "IN",      "AND",    "OR",    "NOT",
                                              "WITHIN", "INSIDE", "OUTSIDE", "BEFORE", "AFTER"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

[[noreturn]] void syntax_error(std::size_t pos, const std::string& expected, std::string_view found)
{
    std::string what = "syntax error at position " + std::to_string(pos) + ": expected " + expected;
    if (found.empty())
        what += ", found end of input";
    else
        what += ", found '" + std::string(found) + "'";
    throw PredicateError(PredicateError::Kind::SyntaxError, pos, expected, what);
}

std::vector<Token> tokenize(std::string_view src)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (ident_start(c)) {
            std::size_t j = i + 1;
            while (j < src.size() && ident_char(src[j]))
                ++j;
            out.push_back({Tok::Ident, src.substr(i, j - i), i});
            i = j;
            continue;
        }
        switch (c) {
        case '(': out.push_back({Tok::LParen, src.substr(i, 1), i}); break;
        case ')': out.push_back({Tok::RParen, src.substr(i, 1), i}); break;
        case ':': out.push_back({Tok::Colon, src.substr(i, 1), i}); break;
        case ',': out.push_back({Tok::Comma, src.substr(i, 1), i}); break;
        default: syntax_error(i, "identifier, keyword or punctuation", src.substr(i, 1));
        }
        ++i;
    }
    out.push_back({Tok::End, {}, src.size()});
    return out;
}

// ---------------------------------------------------------------------------
// Recursive-descent parser. Two tokens of lookahead are needed in one
// place: after AND inside a clause body, a following quantifier (possibly
// parenthesised) starts the next clause instead of continuing the body.

class Parser {
public:
    explicit Parser(std::string_view src)
        : toks_(tokenize(src))
    {}

    PredicateAst parse()
    {
        PredicateAst ast;
        parse_predicate(ast.clauses);
        if (peek().kind != Tok::End)
            syntax_error(peek().pos, "'AND' or end of input", peek().text);
        return ast;
    }

private:
    const Token& peek(std::size_t ahead = 0) const
    {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }

    bool is_kw(const Token& t, std::string_view kw) const { return t.kind == Tok::Ident && t.text == kw; }

    bool is_quantifier(const Token& t) const { return is_kw(t, "EXISTS") || is_kw(t, "FORALL"); }

    const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    void expect(Tok kind, const char* expected)
    {
        if (peek().kind != kind)
            syntax_error(peek().pos, expected, peek().text);
        advance();
    }

    void expect_kw(std::string_view kw)
    {
        if (!is_kw(peek(), kw))
            syntax_error(peek().pos, "'" + std::string(kw) + "'", peek().text);
        advance();
    }

    // True when the token at `at` starts a clause-level group: a quantifier,
    // or a parenthesised group containing a quantifier at any depth.
    bool starts_clause_group(std::size_t at) const
    {
        const Token& t = toks_[std::min(at, toks_.size() - 1)];
        if (is_quantifier(t))
            return true;
        if (t.kind != Tok::LParen)
            return false;
        int depth = 0;
        for (std::size_t i = at; i < toks_.size(); ++i) {
            const Token& u = toks_[i];
            if (u.kind == Tok::LParen)
                ++depth;
            else if (u.kind == Tok::RParen && --depth == 0)
                return false;
            else if (is_quantifier(u))
                return true;
            else if (u.kind == Tok::End)
                return false;
        }
        return false;
    }

    void parse_predicate(std::vector<Clause>& out)
    {
        parse_clause(out);
        while (is_kw(peek(), "AND")) {
            advance();
            parse_clause(out);
        }
    }

    void parse_clause(std::vector<Clause>& out)
    {
        if (is_quantifier(peek())) {
            out.push_back(parse_quantified());
            return;
        }
        if (peek().kind == Tok::LParen && starts_clause_group(pos_)) {
            advance();
            parse_predicate(out);
            expect(Tok::RParen, "')'");
            return;
        }
        // A ground body; its top-level conjuncts become separate clauses.
        std::vector<Expr> conj = parse_conj_units();
        if (is_kw(peek(), "OR")) {
            std::vector<Expr> disj{Expr::make_and(std::move(conj))};
            while (is_kw(peek(), "OR")) {
                advance();
                disj.push_back(Expr::make_and(parse_conj_units()));
            }
            out.push_back(Clause::ground(Expr::make_or(std::move(disj))));
            return;
        }
        for (auto& e : conj)
            out.push_back(Clause::ground(std::move(e)));
    }

    Clause parse_quantified()
    {
        const Quantifier q = is_kw(advance(), "EXISTS") ? Quantifier::Exists : Quantifier::ForAll;
        const Token& var = peek();
        if (var.kind != Tok::Ident || kReserved.count(var.text) || var.text == "pf" || var.text == "pl")
            syntax_error(var.pos, "variable name", var.text);
        advance();
        expect_kw("IN");
        Domain d;
        if (is_kw(peek(), "T"))
            d = Domain::All;
        else if (is_kw(peek(), "TFL"))
            d = Domain::Inner;
        else
            syntax_error(peek().pos, "'T' or 'TFL'", peek().text);
        advance();
        expect(Tok::Colon, "':'");
        return Clause::quantified(q, std::string(var.text), d, parse_body());
    }

    Expr parse_body()
    {
        std::vector<Expr> disj{Expr::make_and(parse_conj_units())};
        while (is_kw(peek(), "OR")) {
            advance();
            disj.push_back(Expr::make_and(parse_conj_units()));
        }
        return Expr::make_or(std::move(disj));
    }

    std::vector<Expr> parse_conj_units()
    {
        std::vector<Expr> units;
        parse_unit_into(units);
        while (is_kw(peek(), "AND") && !starts_clause_group(pos_ + 1)) {
            advance();
            parse_unit_into(units);
        }
        return units;
    }

    // Parses one unit. Shorthand atoms ("pf, pl OP X") contribute one
    // conjunct per point reference.
    void parse_unit_into(std::vector<Expr>& units)
    {
        if (peek().kind == Tok::Ident && peek(1).kind == Tok::Comma) {
            Expr e = parse_atom();
            if (e.kind == Expr::Kind::And) {
                for (auto& c : e.children)
                    units.push_back(std::move(c));
                return;
            }
            units.push_back(std::move(e));
            return;
        }
        units.push_back(parse_unit());
    }

    Expr parse_unit()
    {
        if (is_kw(peek(), "NOT")) {
            advance();
            return Expr::make_not(parse_unit());
        }
        if (peek().kind == Tok::LParen) {
            advance();
            Expr e = parse_body();
            expect(Tok::RParen, "')'");
            return e;
        }
        return parse_atom();
    }

    PointRef parse_pointref()
    {
        const Token& t = peek();
        if (t.kind != Tok::Ident || kReserved.count(t.text))
            syntax_error(t.pos, "point reference ('pf', 'pl' or a variable)", t.text);
        advance();
        if (t.text == "pf")
            return PointRef::first();
        if (t.text == "pl")
            return PointRef::last();
        return PointRef::variable(std::string(t.text));
    }

    Expr parse_atom()
    {
        std::vector<PointRef> refs{parse_pointref()};
        while (peek().kind == Tok::Comma) {
            advance();
            refs.push_back(parse_pointref());
        }
        static constexpr std::array<Op, 5> kOps = {Op::Within, Op::Inside, Op::Outside, Op::Before, Op::After};
        const Token& t = peek();
        std::optional<Op> op;
        for (Op o : kOps)
            if (is_kw(t, keyword(o)))
                op = o;
        if (!op)
            syntax_error(t.pos, "operator (WITHIN, INSIDE, OUTSIDE, BEFORE, AFTER)", t.text);
        advance();
        const Token& target = peek();
        if (target.kind != Tok::Ident || kReserved.count(target.text))
            syntax_error(target.pos, "region or interval name", target.text);
        advance();
        std::vector<Expr> atoms;
        for (auto& r : refs)
            atoms.push_back(Expr::make_atom(std::move(r), *op, std::string(target.text)));
        return Expr::make_and(std::move(atoms));
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

} // namespace

PredicateAst parse_predicate(std::string_view text) { return Parser(text).parse(); }

PredicateAst parse_predicate(std::string_view text, const NameEnv& env)
{
    PredicateAst ast = parse_predicate(text);
    auto diags = validate(ast, env);
    if (!diags.empty()) {
        const auto& d = diags.front();
        PredicateError::Kind kind = PredicateError::Kind::UnknownName;
        switch (d.kind) {
        case Diagnostic::Kind::UnknownName: kind = PredicateError::Kind::UnknownName; break;
        case Diagnostic::Kind::TypeError: kind = PredicateError::Kind::TypeError; break;
        case Diagnostic::Kind::UnboundVariable: kind = PredicateError::Kind::UnboundVariable; break;
        case Diagnostic::Kind::EndpointUnderQuantifier:
            kind = PredicateError::Kind::EndpointUnderQuantifier;
            break;
        }
        throw PredicateError(kind, 0, {}, d.message);
    }
    return ast;
}

// ---------------------------------------------------------------------------
// Formatting

namespace {

std::string format_ref(const PointRef& p)
{
    switch (p.kind) {
    case PointRef::Kind::First: return "pf";
    case PointRef::Kind::Last: return "pl";
    case PointRef::Kind::Variable: return p.name;
    }
    return "?";
}

std::string parenthesize(const std::string& s) { return "(" + s + ")"; }

} // namespace

std::string format_expr(const Expr& e)
{
    switch (e.kind) {
    case Expr::Kind::Atom:
        return format_ref(e.atom.point) + " " + keyword(e.atom.op) + " " + e.atom.target;
    case Expr::Kind::Not: return "NOT " + parenthesize(format_expr(e.children.front()));
    case Expr::Kind::And:
    case Expr::Kind::Or: {
        const bool is_and = e.kind == Expr::Kind::And;
        std::string out;
        for (const auto& c : e.children) {
            if (!out.empty())
                out += is_and ? " AND " : " OR ";
            const bool wrap = c.kind == Expr::Kind::Or || (is_and && c.kind == Expr::Kind::And);
            out += wrap ? parenthesize(format_expr(c)) : format_expr(c);
        }
        return out;
    }
    }
    return {};
}

std::string format_predicate(const PredicateAst& ast)
{
    const bool several = ast.clauses.size() > 1;
    std::string out;
    for (const auto& c : ast.clauses) {
        if (!out.empty())
            out += " AND ";
        if (c.kind == Clause::Kind::Quantified) {
            std::string q = std::string(keyword(c.quantifier)) + " " + c.variable + " IN " + keyword(c.domain) +
                            ": " + format_expr(c.body);
            out += several ? parenthesize(q) : q;
        } else {
            const bool wrap = c.body.kind == Expr::Kind::And || (several && c.body.kind == Expr::Kind::Or);
            out += wrap ? parenthesize(format_expr(c.body)) : format_expr(c.body);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

void validate_expr(const Expr& e, const Clause& clause, const NameEnv& env, std::vector<Diagnostic>& out)
{
    if (e.kind != Expr::Kind::Atom) {
        for (const auto& c : e.children)
            validate_expr(c, clause, env, out);
        return;
    }
    const Atom& a = e.atom;
    const bool quantified = clause.kind == Clause::Kind::Quantified;
    if (a.point.kind == PointRef::Kind::Variable) {
        if (!quantified || a.point.name != clause.variable) {
            out.push_back({Diagnostic::Kind::UnboundVariable, "unbound point variable '" + a.point.name + "'"});
        }
    } else if (quantified) {
        out.push_back({Diagnostic::Kind::EndpointUnderQuantifier,
                       "'" + format_ref(a.point) + "' may not appear under a quantifier"});
    }
    auto it = env.find(a.target);
    if (it == env.end()) {
        out.push_back({Diagnostic::Kind::UnknownName, "unknown name '" + a.target + "'"});
        return;
    }
    if (it->second == NameKind::Region && (a.op == Op::Before || a.op == Op::After)) {
        out.push_back({Diagnostic::Kind::TypeError,
                       std::string(keyword(a.op)) + " requires an interval, but '" + a.target + "' is a region"});
    }
}

} // namespace

std::vector<Diagnostic> validate(const PredicateAst& ast, const NameEnv& env)
{
    std::vector<Diagnostic> out;
    for (const auto& c : ast.clauses)
        validate_expr(c.body, c, env, out);
    return out;
}

// ---------------------------------------------------------------------------
// Strictness

std::optional<Strictness> Strictness::parse(std::string_view text)
{
    if (text == "strict")
        return strict();
    if (text == "relaxed")
        return relaxed();
    constexpr std::string_view prefix = "approx:";
    if (text.substr(0, prefix.size()) != prefix)
        return std::nullopt;
    text.remove_prefix(prefix.size());
    const auto colon = text.find(':');
    std::string_view name = text.substr(0, colon);
    if (name.empty())
        return std::nullopt;
    std::optional<int> param;
    if (colon != std::string_view::npos) {
        auto k = parse_integer(text.substr(colon + 1));
        if (!k || *k < 0 || *k > 1'000'000)
            return std::nullopt;
        param = static_cast<int>(*k);
    }
    return approximated(std::string(name), param);
}

std::string Strictness::to_string() const
{
    switch (mode) {
    case Mode::Strict: return "strict";
    case Mode::Relaxed: return "relaxed";
    case Mode::Approximated:
        return "approx:" + strategy + (parameter ? ":" + std::to_string(*parameter) : std::string());
    }
    return "?";
}

} // namespace stq
