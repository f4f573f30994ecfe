#include <doctest.h>

#include "generators.hpp"
#include "stq/predicate.hpp"

#include <fstream>
#include <string>

using namespace stq;

namespace {

std::vector<std::string> corpus()
{
    std::ifstream in(STQ_FIXTURES "/grammar_corpus.txt");
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);)
        if (!line.empty())
            lines.push_back(line);
    return lines;
}

PredicateError::Kind error_kind(const std::string& text, const NameEnv* env = nullptr)
{
    try {
        if (env)
            parse_predicate(text, *env);
        else
            parse_predicate(text);
    } catch (const PredicateError& e) {
        return e.kind();
    }
    FAIL("parsed: " << text);
    return PredicateError::Kind::SyntaxError;
}

const NameEnv kEnv = {{"R", NameKind::Region}, {"I", NameKind::Interval}};

} // namespace

TEST_CASE("grammar corpus parses and formats stably")
{
    const auto lines = corpus();
    REQUIRE(lines.size() >= 40);
    for (const auto& line : lines) {
        CAPTURE(line);
        const PredicateAst ast = parse_predicate(line);
        CHECK(validate(ast, kEnv).empty());
        const std::string text = format_predicate(ast);
        CHECK(parse_predicate(text) == ast);
        CHECK(format_predicate(parse_predicate(text)) == text);
    }
}

TEST_CASE("clause structure")
{
    SUBCASE("quantifier after AND opens a clause")
    {
        const auto ast = parse_predicate("pf INSIDE R AND EXISTS p IN TFL: p OUTSIDE R AND p WITHIN I");
        REQUIRE(ast.clauses.size() == 2);
        CHECK(ast.clauses[1].kind == Clause::Kind::Quantified);
        CHECK(ast.clauses[1].body.kind == Expr::Kind::And);
    }
    SUBCASE("ground conjuncts become clauses")
    {
        const auto ast = parse_predicate("pf INSIDE R AND pl OUTSIDE R");
        REQUIRE(ast.clauses.size() == 2);
        CHECK(ast.clauses[0].body == Expr::make_atom(PointRef::first(), Op::Inside, "R"));
    }
    SUBCASE("shorthand desugars to a conjunction")
    {
        const auto a = parse_predicate("pf, pl INSIDE R");
        const auto b = parse_predicate("pf INSIDE R AND pl INSIDE R");
        CHECK(a == b);
    }
    SUBCASE("shorthand under NOT negates the conjunction")
    {
        const auto ast = parse_predicate("NOT (pf, pl INSIDE R)");
        REQUIRE(ast.clauses.size() == 1);
        const Expr& body = ast.clauses[0].body;
        REQUIRE(body.kind == Expr::Kind::Not);
        CHECK(body.children[0].kind == Expr::Kind::And);
    }
    SUBCASE("parenthesized quantified clause")
    {
        const auto a = parse_predicate("pf INSIDE R AND (FORALL p IN T: p WITHIN R)");
        REQUIRE(a.clauses.size() == 2);
        CHECK(a.clauses[1].quantifier == Quantifier::ForAll);
    }
    SUBCASE("disjunction inside a clause")
    {
        const auto a = parse_predicate("EXISTS p IN T: p INSIDE R OR p BEFORE I");
        REQUIRE(a.clauses.size() == 1);
        CHECK(a.clauses[0].body.kind == Expr::Kind::Or);
    }
}

TEST_CASE("syntax errors are positioned")
{
    for (const char* bad : {"", "EXISTS", "EXISTS p IN Q: p INSIDE R", "EXISTS p IN T p INSIDE R", "pf INSIDE",
                            "pf INSIDE R AND", "NOT EXISTS p IN T: p INSIDE R", "(pf INSIDE R", "pf INSIDE R)",
                            "pf INSIDE R OR EXISTS p IN T: p INSIDE R", "EXISTS pf IN T: pf INSIDE R",
                            "EXISTS INSIDE IN T: INSIDE INSIDE R", "pf WITHIN 3", "pf @ R"}) {
        CAPTURE(bad);
        try {
            parse_predicate(bad);
            FAIL("accepted");
        } catch (const PredicateError& e) {
            CHECK(e.kind() == PredicateError::Kind::SyntaxError);
            CHECK(e.position() <= std::string(bad).size());
            CHECK_FALSE(e.expected().empty());
        }
    }
}

TEST_CASE("validation diagnostics")
{
    CHECK(error_kind("EXISTS p IN T: p INSIDE Q", &kEnv) == PredicateError::Kind::UnknownName);
    CHECK(error_kind("EXISTS p IN T: p BEFORE R", &kEnv) == PredicateError::Kind::TypeError);
    CHECK(error_kind("EXISTS p IN T: q INSIDE R", &kEnv) == PredicateError::Kind::UnboundVariable);
    CHECK(error_kind("EXISTS p IN T: pf INSIDE R", &kEnv) == PredicateError::Kind::EndpointUnderQuantifier);
    CHECK(error_kind("p INSIDE R", &kEnv) == PredicateError::Kind::UnboundVariable);

    const auto diags = validate(parse_predicate("EXISTS p IN T: q BEFORE R AND p INSIDE Z"), kEnv);
    CHECK(diags.size() == 3);
    CHECK(validate(parse_predicate("pf INSIDE I"), kEnv).empty());  // INSIDE applies to intervals too
}

TEST_CASE("strictness parsing")
{
    CHECK(Strictness::parse("strict") == Strictness::strict());
    CHECK(Strictness::parse("relaxed") == Strictness::relaxed());
    CHECK(Strictness::parse("approx:uniform") == Strictness::approximated("uniform"));
    CHECK(Strictness::parse("approx:uniform:7") == Strictness::approximated("uniform", 7));
    CHECK_FALSE(Strictness::parse("approx:"));
    CHECK_FALSE(Strictness::parse("approx:uniform:x"));
    CHECK_FALSE(Strictness::parse("loose"));
    CHECK(Strictness::approximated("uniform", 7).to_string() == "approx:uniform:7");
}

TEST_CASE("parse after format is the identity on random predicates")
{
    gen::Rng rng(2024);
    for (int n = 0; n < 10000; ++n) {
        const PredicateAst ast = gen::ast(rng);
        const std::string text = format_predicate(ast);
        CAPTURE(text);
        REQUIRE(parse_predicate(text) == ast);
    }
}

TEST_CASE("fuzzed input yields only positioned syntax errors")
{
    gen::Rng rng(99);
    static const std::vector<std::string> tokens = {
        "EXISTS", "FORALL", "IN", "T", "TFL", ":", "AND", "OR", "NOT", "(", ")", ",", "pf", "pl", "p", "R", "I",
        "WITHIN", "INSIDE", "OUTSIDE", "BEFORE", "AFTER", "x1", "_", "9", "\t", "\n"};
    int parsed = 0;
    for (int n = 0; n < 100000; ++n) {
        std::string text;
        if (n % 2 == 0) {
            const int len = gen::uniform_int(rng, 0, 40);
            for (int i = 0; i < len; ++i)
                text += static_cast<char>(gen::uniform_int(rng, 0, 255));
        } else {
            const int len = gen::uniform_int(rng, 1, 14);
            for (int i = 0; i < len; ++i)
                text += tokens[std::size_t(gen::uniform_int(rng, 0, int(tokens.size()) - 1))] + " ";
        }
        try {
            parse_predicate(text);
            ++parsed;
        } catch (const PredicateError& e) {
            REQUIRE(e.kind() == PredicateError::Kind::SyntaxError);
            REQUIRE(e.position() <= text.size());
        }
    }
    MESSAGE("fuzz inputs that parsed: " << parsed);
}
